//! Aggregation strategies and their hierarchical composition.

mod hierarchical;
pub mod presets;
mod report;

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;
use crate::normalize::Normalization;
use crate::pareto::DominanceMode;
use crate::sampling::{AlphaVector, DirichletSampler, PreferenceVector};
use crate::scalarize::{dot, scalarize_matrix, winners_into, ScalarScores, WinTally, DEFAULT_TIE_EPSILON};

pub use hierarchical::{hierarchical_aggregate, hierarchical_aggregate_with};
pub use presets::{catalog, run_experiment, ExperimentOutcome, ExperimentRun, PresetInfo};
pub use report::{NodeRun, ReportMetadata, ScoreScale, TrustReport};

/// Samples per level when a strategy document leaves `n_samples` out.
pub const DEFAULT_SAMPLES: u64 = 10_000;

/// Samples per parallel work unit. Fixed so that the split of work never
/// depends on the thread count.
pub(crate) const CHUNK: u64 = 4096;

/// Alpha as written in a strategy document: a bare number means a symmetric
/// vector sized to the node's child count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Symmetric(f64),
    Explicit(AlphaVector),
}

impl AlphaSpec {
    pub fn resolve(&self, len: usize) -> Result<AlphaVector> {
        match self {
            AlphaSpec::Symmetric(a) => AlphaVector::symmetric(len, *a),
            AlphaSpec::Explicit(alpha) if alpha.len() == len => Ok(alpha.clone()),
            AlphaSpec::Explicit(alpha) => Err(Error::AlphaLength {
                expected: len,
                actual: alpha.len(),
            }),
        }
    }
}

impl From<AlphaVector> for AlphaSpec {
    fn from(a: AlphaVector) -> Self {
        AlphaSpec::Explicit(a)
    }
}

fn default_samples() -> u64 {
    DEFAULT_SAMPLES
}

/// Aggregation applied at one node of the ontology.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrategySpec {
    Average,
    PreferenceSample {
        alpha: AlphaSpec,
        #[serde(default = "default_samples")]
        n_samples: u64,
        #[serde(default)]
        seed: u64,
    },
    ParetoMembership {
        #[serde(default)]
        mode: DominanceMode,
    },
    /// One fixed preference vector. Rescaled to sum to 1 unless `normalize`
    /// is false, in which case the weights are used verbatim.
    Weighted {
        weights: Vec<f64>,
        #[serde(default = "default_true")]
        normalize: bool,
    },
}

fn default_true() -> bool {
    true
}

impl StrategySpec {
    pub fn preference(alpha: impl Into<AlphaSpec>, n_samples: u64, seed: u64) -> Self {
        StrategySpec::PreferenceSample {
            alpha: alpha.into(),
            n_samples,
            seed,
        }
    }

    pub fn symmetric(n_samples: u64, seed: u64) -> Self {
        Self::preference(AlphaSpec::Symmetric(1.0), n_samples, seed)
    }

    pub fn pareto() -> Self {
        StrategySpec::ParetoMembership {
            mode: DominanceMode::Weak,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            StrategySpec::Average => "average",
            StrategySpec::PreferenceSample { .. } => "preference_sample",
            StrategySpec::ParetoMembership { .. } => "pareto_membership",
            StrategySpec::Weighted { .. } => "weighted",
        }
    }

    /// Applies the strategy to an already-normalized level matrix.
    pub fn apply(&self, matrix: &ScoreMatrix) -> Result<ScalarScores> {
        match self {
            StrategySpec::Average => aggregate_average(matrix),
            StrategySpec::PreferenceSample {
                alpha,
                n_samples,
                seed,
            } => aggregate_preference(matrix, &alpha.resolve(matrix.n_criteria())?, *n_samples, *seed),
            StrategySpec::ParetoMembership { mode } => {
                crate::pareto::pareto_membership_scores_with(matrix, *mode)
            }
            StrategySpec::Weighted { weights, normalize } => {
                if weights.len() != matrix.n_criteria() {
                    return Err(Error::InvalidWeights(format!(
                        "weights length {} ≠ criteria {}",
                        weights.len(),
                        matrix.n_criteria()
                    )));
                }
                if *normalize {
                    scalarize_matrix(matrix, PreferenceVector::normalized(weights.clone())?)
                } else {
                    scalarize_matrix(matrix, weights)
                }
            }
        }
    }
}

/// Strategy document: one strategy per level (root first), optional
/// per-node overrides keyed by node name or `/`-joined path, and the
/// normalization applied to each level's child matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub levels: Vec<StrategySpec>,
    #[serde(default)]
    pub overrides: BTreeMap<String, StrategySpec>,
    #[serde(default)]
    pub normalization: Normalization,
}

impl StrategyConfig {
    pub fn new(levels: Vec<StrategySpec>) -> Self {
        StrategyConfig {
            levels,
            overrides: BTreeMap::new(),
            normalization: Normalization::default(),
        }
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn from_json(document: &str) -> Result<Self> {
        serde_json::from_str(document).map_err(|e| Error::MalformedDocument {
            path: format!("strategy (line {}, column {})", e.line(), e.column()),
            message: e.to_string(),
        })
    }
}

/// Per-model arithmetic mean across criteria.
pub fn aggregate_average(matrix: &ScoreMatrix) -> Result<ScalarScores> {
    matrix.require_maximized()?;
    let c = matrix.n_criteria() as f64;
    ScalarScores::new(
        matrix.model_ids().to_vec(),
        matrix.rows().map(|r| r.iter().sum::<f64>() / c).collect(),
    )
}

/// Share of `n` Dirichlet preference draws each model wins.
pub fn aggregate_preference(
    matrix: &ScoreMatrix,
    alpha: &AlphaVector,
    n: u64,
    seed: u64,
) -> Result<ScalarScores> {
    let tally = tally_preferences(matrix, alpha, seed, 0..n)?;
    ScalarScores::new(matrix.model_ids().to_vec(), tally.shares())
}

fn check_sampling_inputs(matrix: &ScoreMatrix, alpha: &AlphaVector) -> Result<()> {
    matrix.require_maximized()?;
    if alpha.len() != matrix.n_criteria() {
        return Err(Error::AlphaLength {
            expected: matrix.n_criteria(),
            actual: alpha.len(),
        });
    }
    Ok(())
}

/// Winner tally over sample indices `range`, split into fixed-size chunks
/// that run in parallel and merge exactly.
pub fn tally_preferences(
    matrix: &ScoreMatrix,
    alpha: &AlphaVector,
    seed: u64,
    range: Range<u64>,
) -> Result<WinTally> {
    check_sampling_inputs(matrix, alpha)?;
    if range.is_empty() {
        return Err(Error::ZeroSamples);
    }
    let sampler = DirichletSampler::new(alpha, seed);
    let starts: Vec<u64> = (range.start..range.end).step_by(CHUNK as usize).collect();
    let tallies = starts
        .into_par_iter()
        .map(|start| tally_chunk(matrix, &sampler, start..(start + CHUNK).min(range.end)))
        .collect::<Result<Vec<_>>>()?;
    let mut total = WinTally::new(matrix.n_models());
    for t in &tallies {
        total.merge(t);
    }
    Ok(total)
}

fn tally_chunk(matrix: &ScoreMatrix, sampler: &DirichletSampler, range: Range<u64>) -> Result<WinTally> {
    let mut tally = WinTally::new(matrix.n_models());
    let mut w = vec![0.0; matrix.n_criteria()];
    let mut scores = vec![0.0; matrix.n_models()];
    let mut winners = Vec::with_capacity(matrix.n_models());
    for i in range {
        sampler.sample_into(i, &mut w)?;
        for (s, row) in scores.iter_mut().zip(matrix.rows()) {
            *s = dot(row, &w);
        }
        winners_into(&scores, DEFAULT_TIE_EPSILON, &mut winners);
        tally.record(&winners);
    }
    Ok(tally)
}
