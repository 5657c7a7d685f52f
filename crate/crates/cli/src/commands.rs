use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use trustsample::aggregate::presets::{catalog, run_experiment_with, ExperimentOutcome};
use trustsample::aggregate::{AlphaSpec, StrategyConfig, StrategySpec};
use trustsample::analysis::{converge, decade_checkpoints, grid_oracle, surrogate_study};
use trustsample::report::{emit_report, emit_trace, Format};
use trustsample::{
    datasets, hierarchical_aggregate_with, load_matrix, load_ontology, normalize, pareto_front, AlphaVector,
    MatrixSchema, Normalization, OntologyNode, ScoreMatrix,
};

use crate::args::{
    Cli, Command, ConvergeArgs, DataArgs, ExperimentArgs, OutputFormat, ParetoArgs, RankArgs, SamplingArgs,
    SimulateArgs,
};
use crate::Failure;

/// Sample counts at or above this need `--long-run`.
pub const LONG_RUN_SAMPLES: u64 = 10_000_000;

pub(crate) fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    if cli.threads == Some(0) {
        return Err(Failure::config("--threads must be at least 1"));
    }
    if let Command::Serve(args) = cli.command {
        return crate::service::serve(args, cli.threads);
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| Failure::config(e.to_string()))?
    };
    // Commands render into buffers inside the pool, since the caller's
    // writers need not be `Send`.
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let result = pool.install(|| match cli.command {
        Command::Rank(a) => rank(a, &mut o),
        Command::Pareto(a) => pareto(a, &mut o),
        Command::Converge(a) => converge_cmd(a, &mut o, &mut e),
        Command::Simulate(a) => simulate(a, &mut o),
        Command::Experiment(a) => experiment(a, &mut o),
        Command::Serve(_) => unreachable!(),
    });
    out.write_all(&o)?;
    err.write_all(&e)?;
    result
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

/// Resolves `--data`/`--schema` to a dataset id and matrix.
pub fn load_data(args: &DataArgs) -> Result<(String, ScoreMatrix), Failure> {
    let schema = match &args.schema {
        Some(p) => Some(MatrixSchema::from_json(&read(p)?)?),
        None => None,
    };
    if let Some(id) = args.data.strip_prefix("embedded:") {
        let matrix = match &schema {
            Some(s) => load_matrix(datasets::embedded_csv(id)?, Some(s))?,
            None => datasets::embedded(id)?,
        };
        return Ok((id.to_string(), matrix));
    }
    let path = Path::new(&args.data);
    let matrix = load_matrix(&read(path)?, schema.as_ref())?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| args.data.clone());
    Ok((id, matrix))
}

/// Parses a comma list such as `1,1,2.5`.
pub fn parse_list(flag: &str, text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::config(format!("{flag}: \"{}\" is not a number", t.trim())))
        })
        .collect()
}

fn parse_counts(flag: &str, text: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .or_else(|_| match t.parse::<f64>() {
                    Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
                    _ => Err(()),
                })
                .map_err(|_| Failure::config(format!("{flag}: \"{t}\" is not a sample count")))
        })
        .collect()
}

fn check_long_run(n: u64, s: &SamplingArgs) -> Result<(), Failure> {
    if n >= LONG_RUN_SAMPLES && !s.long_run {
        return Err(Failure::config(format!("samples {n} ≥ 10⁷ requires --long-run")));
    }
    Ok(())
}

/// Alpha from `--alpha`, checked against `len` before any work starts.
fn alpha_for(s: &SamplingArgs, len: usize) -> Result<AlphaVector, Failure> {
    match &s.alpha {
        Some(text) => Ok(AlphaSpec::Explicit(AlphaVector::new(parse_list("--alpha", text)?)?).resolve(len)?),
        None => Ok(AlphaVector::symmetric(len, 1.0)?),
    }
}

fn rank_config(a: &RankArgs, depth: usize) -> Result<StrategyConfig, Failure> {
    let spec = if let Some(w) = &a.weights {
        Some(StrategySpec::Weighted {
            weights: parse_list("--weights", w)?,
            normalize: !a.no_weight_normalize,
        })
    } else {
        match a.strategy.as_str() {
            "preference" | "preference_sample" => {
                let alpha = match &a.sampling.alpha {
                    Some(text) => AlphaSpec::Explicit(AlphaVector::new(parse_list("--alpha", text)?)?),
                    None => AlphaSpec::Symmetric(1.0),
                };
                Some(StrategySpec::preference(alpha, a.sampling.samples, a.sampling.seed))
            }
            "average" => Some(StrategySpec::Average),
            "pareto" | "pareto_membership" => Some(StrategySpec::ParetoMembership {
                mode: a.dominance.into(),
            }),
            _ => None,
        }
    };
    let mut config = match spec {
        Some(spec) => StrategyConfig::new(vec![spec; depth]),
        None => StrategyConfig::from_json(&read(Path::new(&a.strategy))?).map_err(|e| Failure::config(e.to_string()))?,
    };
    if let Some(n) = a.normalize {
        config.normalization = n.into();
    }
    Ok(config)
}

fn rank(a: RankArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (id, matrix) = load_data(&a.data)?;
    let ontology = match &a.ontology {
        Some(p) => load_ontology(&read(p)?, &matrix)?,
        None => OntologyNode::flat(&matrix),
    };
    let config = rank_config(&a, ontology.depth())?;
    for spec in config.levels.iter().chain(config.overrides.values()) {
        if let StrategySpec::PreferenceSample { n_samples, .. } = spec {
            check_long_run(*n_samples, &a.sampling)?;
        }
    }
    // Flat runs can validate the alpha length up front; nested runs check
    // each node's child count as they reach it.
    if a.ontology.is_none() {
        if let Some(StrategySpec::PreferenceSample { alpha, .. }) = config.levels.first() {
            alpha.resolve(matrix.n_criteria())?;
        }
    }
    let started = Instant::now();
    let mut report = hierarchical_aggregate_with(&ontology, &matrix, &config, &id)?;
    if a.timing {
        report.metadata.elapsed_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    out.write_all(&emit_report(&report, a.format.into()))?;
    Ok(())
}

#[derive(Serialize)]
struct ParetoDocument<'a> {
    dataset_id: &'a str,
    mode: trustsample::DominanceMode,
    model_ids: &'a [String],
    optimal: Vec<&'a str>,
    dominated_by: std::collections::BTreeMap<&'a str, &'a str>,
}

fn pareto(a: ParetoArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (id, matrix) = load_data(&a.data)?;
    let front = pareto_front(&normalize(&matrix), a.dominance.into())?;
    let names = matrix.model_ids();
    let witness = |i: usize| front.dominated_by.get(&i).map(|&j| names[j].as_str());
    let text = match a.format {
        OutputFormat::Table => {
            let width = names.iter().map(String::len).max().unwrap_or(5).max(5);
            let mut s = format!("{:<width$}  optimal  dominated_by\n", "model");
            for (i, name) in names.iter().enumerate() {
                let flag = if front.is_optimal(i) { "yes" } else { "no" };
                writeln!(s, "{name:<width$}  {flag:<7}  {}", witness(i).unwrap_or("-")).unwrap();
            }
            writeln!(s, "{}/{} Pareto optimal", front.optimal_indices.len(), names.len()).unwrap();
            s
        }
        OutputFormat::TabularText => {
            let mut s = String::from("model,pareto_optimal,dominated_by\n");
            for (i, name) in names.iter().enumerate() {
                writeln!(s, "{name},{},{}", front.is_optimal(i), witness(i).unwrap_or("")).unwrap();
            }
            s
        }
        OutputFormat::Structured => {
            let doc = ParetoDocument {
                dataset_id: &id,
                mode: a.dominance.into(),
                model_ids: names,
                optimal: front.optimal_indices.iter().map(|&i| names[i].as_str()).collect(),
                dominated_by: front
                    .dominated_by
                    .iter()
                    .map(|(&l, &w)| (names[l].as_str(), names[w].as_str()))
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn converge_cmd(a: ConvergeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let (_, matrix) = load_data(&a.data)?;
    let alpha = alpha_for(&a.sampling, matrix.n_criteria())?;
    let checkpoints = match &a.checkpoints {
        Some(text) => parse_counts("--checkpoints", text)?,
        None => decade_checkpoints(a.sampling.samples),
    };
    if let Some(&last) = checkpoints.last() {
        check_long_run(last, &a.sampling)?;
    }
    let normalized = Normalization::from(a.normalize).apply(&matrix)?;
    let trace = converge(&normalized, &alpha, &checkpoints, a.sampling.seed)?;
    let format: Format = match a.format {
        OutputFormat::Structured => Format::Structured,
        _ => Format::TabularText,
    };
    out.write_all(&emit_trace(&trace, format))?;

    let oracle = match a.resolution {
        Some(r) => {
            let oracle = grid_oracle(&normalized, r)?;
            let final_shares = trace.shares_at.last().cloned().unwrap_or_default();
            writeln!(err, "grid r={r}: {} points, {} winners", oracle.n_points, oracle.winners.len())?;
            writeln!(err, "model,sampled,grid")?;
            for (i, id) in trace.model_ids.iter().enumerate() {
                let sampled = final_shares.get(i).copied().unwrap_or(0.0);
                if sampled > 0.0 || oracle.shares[i] > 0.0 {
                    writeln!(err, "{id},{sampled:.6},{:.6}", oracle.shares[i])?;
                }
            }
            Some(oracle)
        }
        None => None,
    };
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("trace.csv"), emit_trace(&trace, Format::TabularText))?;
        fs::write(dir.join("trace.json"), emit_trace(&trace, Format::Structured))?;
        if let Some(oracle) = &oracle {
            fs::write(dir.join("grid.json"), serde_json::to_string_pretty(oracle).unwrap() + "\n")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulationSummary {
    models: usize,
    dims: usize,
    samples: u64,
    seed: u64,
    pareto_front: Vec<String>,
    preference_real: Vec<String>,
    off_front_winners: Vec<String>,
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    check_long_run(a.sampling.samples, &a.sampling)?;
    let alpha = alpha_for(&a.sampling, a.dims)?;
    let study = surrogate_study(a.models, a.dims, &alpha, a.sampling.samples, a.sampling.seed)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("points.csv"), study.points_csv())?;
        fs::write(dir.join("domains.csv"), study.domains_csv())?;
    }
    let ids = |idx: Vec<usize>| -> Vec<String> { idx.into_iter().map(|i| study.matrix.model_ids()[i].clone()).collect() };
    let summary = SimulationSummary {
        models: a.models,
        dims: a.dims,
        samples: a.sampling.samples,
        seed: a.sampling.seed,
        pareto_front: ids(study.front.optimal_indices.clone()),
        preference_real: ids(study.preference_real()),
        off_front_winners: ids(study.off_front_winners()),
    };
    let text = match a.format {
        OutputFormat::Structured => serde_json::to_string_pretty(&summary).unwrap() + "\n",
        OutputFormat::TabularText => format!(
            "key,value\nmodels,{}\ndims,{}\nsamples,{}\nseed,{}\npareto_front,{}\npreference_real,{}\noff_front_winners,{}\n",
            summary.models,
            summary.dims,
            summary.samples,
            summary.seed,
            summary.pareto_front.len(),
            summary.preference_real.len(),
            summary.off_front_winners.len()
        ),
        OutputFormat::Table => format!(
            "models             {}\ndims               {}\nsamples            {}\nseed               {}\npareto front       {}\npreference-real    {}\noff-front winners  {}\n",
            summary.models,
            summary.dims,
            summary.samples,
            summary.seed,
            summary.pareto_front.len(),
            summary.preference_real.len(),
            summary.off_front_winners.len()
        ),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn list_catalog(out: &mut dyn Write) -> std::io::Result<()> {
    let entries = catalog();
    let width = entries.iter().map(|p| p.id.len()).max().unwrap_or(0);
    for p in entries {
        writeln!(out, "{:<width$}  {}  [{}]", p.id, p.title, p.datasets.join(", "))?;
    }
    Ok(())
}

fn experiment(a: ExperimentArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let Some(id) = a.id else {
        list_catalog(out)?;
        return Ok(());
    };
    let outcome = run_experiment_with(&id, a.seed, a.samples)?;
    out.write_all(&render_experiment(&outcome, a.format.into()))?;
    Ok(())
}

pub fn render_experiment(outcome: &ExperimentOutcome, format: Format) -> Vec<u8> {
    match format {
        Format::Structured => (serde_json::to_string_pretty(outcome).unwrap() + "\n").into_bytes(),
        Format::TabularText => {
            let mut s = String::from("dataset,model,node,score\n");
            for run in &outcome.runs {
                let body = String::from_utf8(emit_report(&run.report, Format::TabularText)).unwrap();
                for line in body.lines().skip(1) {
                    writeln!(s, "{},{line}", run.dataset_id).unwrap();
                }
            }
            s.into_bytes()
        }
        Format::Table => {
            let mut s = format!("{}  {}\n", outcome.id, outcome.title);
            for run in &outcome.runs {
                writeln!(s, "\n[{}] {}", run.dataset_id, run.summary).unwrap();
                s.push_str(&String::from_utf8(emit_report(&run.report, Format::Table)).unwrap());
            }
            s.into_bytes()
        }
    }
}
