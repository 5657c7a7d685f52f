use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "trustsample", version, about = "Aggregate multi-criteria model evaluations into trust scores")]
pub struct Cli {
    /// Worker threads for sampling and grid enumeration (output does not depend on it).
    #[arg(long, global = true, env = "TRUSTSAMPLE_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every model with one strategy per ontology level.
    Rank(RankArgs),
    /// Print the Pareto front and a dominating witness for every other model.
    Pareto(ParetoArgs),
    /// Cumulative preference-sampling shares at increasing sample counts.
    Converge(ConvergeArgs),
    /// Uniform surrogate models, their front, and sampled preference domains.
    Simulate(SimulateArgs),
    /// Run a catalogued experiment, or list the catalog when no id is given.
    Experiment(ExperimentArgs),
    /// Serve the JSON API and the static UI bundle.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Structured,
    #[value(name = "tabular-text", alias = "tabular", alias = "csv")]
    TabularText,
}

impl From<OutputFormat> for trustsample::report::Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Table => Self::Table,
            OutputFormat::Structured => Self::Structured,
            OutputFormat::TabularText => Self::TabularText,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizeArg {
    None,
    Bounds,
    Range,
}

impl From<NormalizeArg> for trustsample::Normalization {
    fn from(n: NormalizeArg) -> Self {
        match n {
            NormalizeArg::None => Self::None,
            NormalizeArg::Bounds => Self::Bounds,
            NormalizeArg::Range => Self::Range,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DominanceArg {
    Weak,
    Strict,
}

impl From<DominanceArg> for trustsample::DominanceMode {
    fn from(d: DominanceArg) -> Self {
        match d {
            DominanceArg::Weak => Self::Weak,
            DominanceArg::Strict => Self::Strict,
        }
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Score table: a CSV path or `embedded:<id>`.
    #[arg(long, default_value = "embedded:decodingtrust")]
    pub data: String,

    /// JSON sidecar mapping criterion → {direction, lo, hi}.
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Dirichlet alpha as a comma list; symmetric 1 when omitted.
    #[arg(long)]
    pub alpha: Option<String>,

    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,

    #[arg(long, env = "TRUSTSAMPLE_SEED", default_value_t = 42)]
    pub seed: u64,

    /// Allow 10⁷ or more samples.
    #[arg(long)]
    pub long_run: bool,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Ontology document; a flat tree over the table's criteria when omitted.
    #[arg(long)]
    pub ontology: Option<PathBuf>,

    /// `preference`, `average`, `pareto`, or a path to a strategy document.
    #[arg(long, default_value = "preference")]
    pub strategy: String,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    /// A fixed preference vector instead of sampling.
    #[arg(long, conflicts_with = "alpha")]
    pub weights: Option<String>,

    /// Use `--weights` verbatim instead of rescaling them to sum to 1.
    #[arg(long, requires = "weights")]
    pub no_weight_normalize: bool,

    /// Per-level normalization; defaults to `range` or the strategy document's choice.
    #[arg(long, value_enum)]
    pub normalize: Option<NormalizeArg>,

    #[arg(long, value_enum, default_value = "weak")]
    pub dominance: DominanceArg,

    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,

    /// Record wall-clock time in the report metadata.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[arg(long, value_enum, default_value = "weak")]
    pub dominance: DominanceArg,

    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    /// Comma list of increasing sample counts; powers of ten up to `--samples` when omitted.
    #[arg(long)]
    pub checkpoints: Option<String>,

    #[arg(long, value_enum, default_value = "range")]
    pub normalize: NormalizeArg,

    /// Also enumerate the simplex lattice at this resolution and compare.
    #[arg(long)]
    pub resolution: Option<u32>,

    /// Write trace and oracle files here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    /// `table` and `tabular-text` print CSV rows.
    #[arg(long, value_enum, default_value = "tabular-text")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1000)]
    pub models: usize,

    #[arg(long, default_value_t = 3)]
    pub dims: usize,

    #[command(flatten)]
    pub sampling: SamplingArgs,

    /// Write `points.csv` and `domains.csv` here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub id: Option<String>,

    #[arg(long, default_value_t = trustsample::aggregate::presets::DEFAULT_PRESET_SAMPLES)]
    pub samples: u64,

    #[arg(long, env = "TRUSTSAMPLE_SEED", default_value_t = trustsample::aggregate::presets::DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "PORT", default_value_t = 8080)]
    pub port: u16,

    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,

    /// Directory with the built UI bundle.
    #[arg(long, default_value = "ui/dist")]
    pub static_dir: PathBuf,
}
