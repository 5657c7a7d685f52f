//! Built-in experiment catalog.
//!
//! Ids follow the published experiment numbering: `1-1-x` Pareto
//! aggregation, `2-1` averaging, `2-2-x` skewed preferences, `2-3-x` a
//! confidence sweep on the privacy characteristic. TrustLLM sampling runs
//! use the `trustllm-ps` table (characteristics already preference-sampled
//! from their sub-characteristics), so the top level is the second level of
//! a two-level sampling run.

use serde::{Deserialize, Serialize};

use super::{hierarchical_aggregate_with, StrategyConfig, StrategySpec, TrustReport};
use crate::datasets::{self, DECODINGTRUST, TRUSTLLM, TRUSTLLM_PS};
use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;
use crate::ontology::OntologyNode;
use crate::sampling::{focus_alpha, AlphaVector};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_PRESET_SAMPLES: u64 = 100_000;
/// Focus multiplier for the skewed-preference runs.
pub const DEFAULT_FOCUS_MULTIPLIER: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Focus {
    Robustness,
    Privacy,
    Fairness,
}

impl Focus {
    fn criteria(self, dataset: &str) -> &'static [&'static str] {
        match (self, dataset) {
            (Focus::Robustness, DECODINGTRUST) => &["Adversarial Robustness"],
            (Focus::Robustness, _) => &["Robustness"],
            (Focus::Privacy, _) => &["Privacy"],
            (Focus::Fairness, _) => &["Fairness"],
        }
    }
}

#[derive(Clone, Debug)]
enum Plan {
    Pareto(&'static [&'static str]),
    Average(&'static [&'static str]),
    Focused { focus: &'static [Focus], multiplier: f64 },
}

struct Preset {
    id: &'static str,
    title: &'static str,
    plan: Plan,
}

const SAMPLING_DATASETS: [&str; 2] = [TRUSTLLM_PS, DECODINGTRUST];

fn presets() -> Vec<Preset> {
    use Focus::*;
    let focused = |focus: &'static [Focus]| Plan::Focused {
        focus,
        multiplier: DEFAULT_FOCUS_MULTIPLIER,
    };
    let sweep = |k: f64| Plan::Focused {
        focus: &[Privacy],
        multiplier: k,
    };
    vec![
        Preset { id: "1-1-1_TLLM", title: "Pareto optimality over averaged TrustLLM characteristics", plan: Plan::Pareto(&[TRUSTLLM]) },
        Preset { id: "1-1-2_TLLM", title: "Pareto optimality over preference-sampled TrustLLM characteristics", plan: Plan::Pareto(&[TRUSTLLM_PS]) },
        Preset { id: "1-1-4_DT", title: "Pareto optimality over DecodingTrust", plan: Plan::Pareto(&[DECODINGTRUST]) },
        Preset { id: "2-1", title: "Averaging", plan: Plan::Average(&[TRUSTLLM, DECODINGTRUST]) },
        Preset { id: "2-2-1", title: "Robustness focus", plan: focused(&[Robustness]) },
        Preset { id: "2-2-2", title: "Privacy focus", plan: focused(&[Privacy]) },
        Preset { id: "2-2-3", title: "Fairness focus", plan: focused(&[Fairness]) },
        Preset { id: "2-2-4", title: "Robustness and privacy focus", plan: focused(&[Robustness, Privacy]) },
        Preset { id: "2-2-5", title: "Robustness and fairness focus", plan: focused(&[Robustness, Fairness]) },
        Preset { id: "2-2-6", title: "Privacy and fairness focus", plan: focused(&[Privacy, Fairness]) },
        Preset { id: "2-2-7", title: "Privacy, fairness and robustness focus", plan: focused(&[Privacy, Fairness, Robustness]) },
        Preset { id: "2-3-1", title: "Privacy confidence ×1 (symmetric)", plan: sweep(1.0) },
        Preset { id: "2-3-2", title: "Privacy confidence ×2", plan: sweep(2.0) },
        Preset { id: "2-3-3", title: "Privacy confidence ×3", plan: sweep(3.0) },
        Preset { id: "2-3-4", title: "Privacy confidence ×4", plan: sweep(4.0) },
        Preset { id: "2-3-5", title: "Privacy confidence ×5", plan: sweep(5.0) },
        Preset { id: "2-3-6", title: "Privacy confidence ×10", plan: sweep(10.0) },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub id: String,
    pub title: String,
    pub datasets: Vec<String>,
}

pub fn catalog() -> Vec<PresetInfo> {
    presets()
        .into_iter()
        .map(|p| PresetInfo {
            id: p.id.to_string(),
            title: p.title.to_string(),
            datasets: match p.plan {
                Plan::Pareto(ds) | Plan::Average(ds) => ds.iter().map(|d| d.to_string()).collect(),
                Plan::Focused { .. } => SAMPLING_DATASETS.iter().map(|d| d.to_string()).collect(),
            },
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRun {
    pub dataset_id: String,
    /// One-line result, e.g. `7/8 Pareto optimal` or `gpt-4, 44.9%`.
    pub summary: String,
    pub report: TrustReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub id: String,
    pub title: String,
    pub runs: Vec<ExperimentRun>,
}

/// Runs a catalogued experiment with the default seed and sample count.
pub fn run_experiment(preset_id: &str) -> Result<ExperimentOutcome> {
    run_experiment_with(preset_id, DEFAULT_SEED, DEFAULT_PRESET_SAMPLES)
}

pub fn run_experiment_with(preset_id: &str, seed: u64, n_samples: u64) -> Result<ExperimentOutcome> {
    let preset = presets()
        .into_iter()
        .find(|p| p.id == preset_id)
        .ok_or_else(|| Error::UnknownPreset {
            id: preset_id.to_string(),
            catalog: presets().iter().map(|p| p.id).collect::<Vec<_>>().join(", "),
        })?;

    let runs = match &preset.plan {
        Plan::Pareto(ds) => ds
            .iter()
            .map(|d| run_single(d, StrategySpec::pareto(), Summary::ParetoCount))
            .collect::<Result<Vec<_>>>()?,
        Plan::Average(ds) => ds
            .iter()
            .map(|d| run_single(d, StrategySpec::Average, Summary::Top))
            .collect::<Result<Vec<_>>>()?,
        Plan::Focused { focus, multiplier } => SAMPLING_DATASETS
            .iter()
            .map(|d| {
                let matrix = datasets::embedded(d)?;
                let alpha = focused_alpha(&matrix, d, focus, *multiplier)?;
                run_single(d, StrategySpec::preference(alpha, n_samples, seed), Summary::Top)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(ExperimentOutcome {
        id: preset.id.to_string(),
        title: preset.title.to_string(),
        runs,
    })
}

fn focused_alpha(matrix: &ScoreMatrix, dataset: &str, focus: &[Focus], multiplier: f64) -> Result<AlphaVector> {
    let base = AlphaVector::symmetric(matrix.n_criteria(), 1.0)?;
    if multiplier == 1.0 {
        return Ok(base);
    }
    let indices = focus
        .iter()
        .flat_map(|f| f.criteria(dataset))
        .map(|name| {
            matrix
                .criterion_index(name)
                .ok_or_else(|| Error::DanglingCriterion(name.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    focus_alpha(&base, &indices, multiplier)
}

enum Summary {
    ParetoCount,
    Top,
}

fn run_single(dataset: &str, strategy: StrategySpec, summary: Summary) -> Result<ExperimentRun> {
    let matrix = datasets::embedded(dataset)?;
    let ontology = OntologyNode::flat(&matrix);
    let report = hierarchical_aggregate_with(&ontology, &matrix, &StrategyConfig::new(vec![strategy]), dataset)?;
    let summary = match summary {
        Summary::ParetoCount => format!(
            "{}/{} Pareto optimal",
            report.nonzero().len(),
            report.model_ids.len()
        ),
        Summary::Top => {
            let (model, score) = report.top();
            format!("{model}, {:.1}%", score * 100.0)
        }
    };
    Ok(ExperimentRun {
        dataset_id: dataset.to_string(),
        summary,
        report,
    })
}
