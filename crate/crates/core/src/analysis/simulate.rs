use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Bounds, ScoreMatrix};
use crate::pareto::{pareto_front, DominanceMode, ParetoResult};
use crate::sampling::{stream_words, AlphaVector, DirichletSampler};
use crate::scalarize::{dot, winners_into, DEFAULT_TIE_EPSILON};

use super::converge::csv_field;

/// `n_models × dims` independent uniform deviates on `[0, 1)`, all maximized.
/// Row `i` is drawn from stream `(seed, i)`.
pub fn simulate_surrogates(n_models: usize, dims: usize, seed: u64) -> Result<ScoreMatrix> {
    if n_models == 0 {
        return Err(Error::InvalidArgument("n_models must be at least 1".into()));
    }
    if dims < 2 {
        return Err(Error::InvalidArgument("dims must be at least 2".into()));
    }
    let rows = (0..n_models)
        .map(|i| {
            let mut next = stream_words(seed, i as u64);
            (0..dims)
                .map(|_| (next() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
                .collect()
        })
        .collect();
    let width = n_models.to_string().len();
    ScoreMatrix::uniform(
        (0..n_models).map(|i| format!("s{i:0width$}")).collect(),
        (1..=dims).map(|d| format!("x{d}")).collect(),
        rows,
        Bounds::UNIT,
    )
}

/// One sampled preference and the surrogate(s) that won it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSample {
    pub weights: Vec<f64>,
    pub winners: Vec<usize>,
}

/// Surrogate point cloud, its Pareto front, and sampled preference domains.
#[derive(Clone, Debug, PartialEq)]
pub struct SurrogateStudy {
    pub matrix: ScoreMatrix,
    pub front: ParetoResult,
    pub samples: Vec<DomainSample>,
}

impl SurrogateStudy {
    /// Sampled winners that are not on the Weak Pareto front (should be empty).
    pub fn off_front_winners(&self) -> Vec<usize> {
        let mut off: Vec<usize> = self
            .samples
            .iter()
            .flat_map(|s| s.winners.iter().copied())
            .filter(|&w| !self.front.is_optimal(w))
            .collect();
        off.sort_unstable();
        off.dedup();
        off
    }

    /// Distinct surrogates that won at least one sample.
    pub fn preference_real(&self) -> Vec<usize> {
        let mut real: Vec<usize> = self.samples.iter().flat_map(|s| s.winners.iter().copied()).collect();
        real.sort_unstable();
        real.dedup();
        real
    }

    /// `model,x1..xd,pareto_optimal` rows.
    pub fn points_csv(&self) -> String {
        let m = &self.matrix;
        let mut out = format!("model,{},pareto_optimal\n", m.criterion_ids().join(","));
        for (i, row) in m.rows().enumerate() {
            let cells: Vec<String> = row.iter().map(f64::to_string).collect();
            out.push_str(&format!(
                "{},{},{}\n",
                csv_field(&m.model_ids()[i]),
                cells.join(","),
                self.front.is_optimal(i)
            ));
        }
        out
    }

    /// `sample,w1..wd,winner` rows; tied samples list winners separated by `;`.
    pub fn domains_csv(&self) -> String {
        let dims = self.matrix.n_criteria();
        let header: Vec<String> = (1..=dims).map(|d| format!("w{d}")).collect();
        let mut out = format!("sample,{},winner\n", header.join(","));
        for (i, s) in self.samples.iter().enumerate() {
            let w: Vec<String> = s.weights.iter().map(f64::to_string).collect();
            let winners: Vec<&str> = s
                .winners
                .iter()
                .map(|&m| self.matrix.model_ids()[m].as_str())
                .collect();
            out.push_str(&format!("{i},{},{}\n", w.join(","), winners.join(";")));
        }
        out
    }
}

/// Generates surrogates, extracts their front, and records the winner of
/// each of `n_samples` preference draws.
pub fn surrogate_study(
    n_models: usize,
    dims: usize,
    alpha: &AlphaVector,
    n_samples: u64,
    seed: u64,
) -> Result<SurrogateStudy> {
    let matrix = simulate_surrogates(n_models, dims, seed)?;
    if alpha.len() != dims {
        return Err(Error::AlphaLength {
            expected: dims,
            actual: alpha.len(),
        });
    }
    let front = pareto_front(&matrix, DominanceMode::Weak)?;
    // Preference streams are offset from the surrogate streams by using a
    // different key.
    let sampler = DirichletSampler::new(alpha, seed.wrapping_add(1));
    let mut scores = vec![0.0; n_models];
    let mut winners = Vec::new();
    let samples = (0..n_samples)
        .map(|i| {
            let w = sampler.sample(i)?;
            for (s, row) in scores.iter_mut().zip(matrix.rows()) {
                *s = dot(row, w.weights());
            }
            winners_into(&scores, DEFAULT_TIE_EPSILON, &mut winners);
            Ok(DomainSample {
                weights: w.into(),
                winners: winners.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SurrogateStudy {
        matrix,
        front,
        samples,
    })
}
