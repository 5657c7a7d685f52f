//! Weighted-sum scalarization and winner selection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;

/// Absolute tolerance under which two scalar scores count as tied.
pub const DEFAULT_TIE_EPSILON: f64 = 1e-12;

/// Per-model scalar scores, aligned with `model_ids`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarScores {
    pub model_ids: Vec<String>,
    pub scores: Vec<f64>,
}

impl ScalarScores {
    pub fn new(model_ids: Vec<String>, scores: Vec<f64>) -> Result<Self> {
        if model_ids.len() != scores.len() {
            return Err(Error::LengthMismatch {
                expected: model_ids.len(),
                actual: scores.len(),
            });
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidArgument("scores must be finite".into()));
        }
        Ok(ScalarScores { model_ids, scores })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn get(&self, model: &str) -> Option<f64> {
        self.model_ids
            .iter()
            .position(|m| m == model)
            .map(|i| self.scores[i])
    }

    /// Model indices ordered by descending score; ties keep input order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]));
        order
    }
}

/// The models achieving the maximum score, each earning an equal share of
/// one unit of credit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerSet {
    indices: Vec<usize>,
}

impl WinnerSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn fractional_credit(&self) -> f64 {
        1.0 / self.indices.len() as f64
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }
}

/// `Σ_c w_c x_c`.
pub fn weighted_score(x: &[f64], w: &[f64]) -> Result<f64> {
    if x.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: w.len(),
        });
    }
    Ok(dot(x, w))
}

#[inline]
pub(crate) fn dot(x: &[f64], w: &[f64]) -> f64 {
    x.iter().zip(w).map(|(a, b)| a * b).sum()
}

/// Scalarizes every model row. The matrix must be all-maximized; weights
/// are used verbatim, so pass a [`PreferenceVector`](crate::PreferenceVector)
/// for normalized weights or a raw slice to reproduce unnormalized tables.
pub fn scalarize_matrix(matrix: &ScoreMatrix, w: impl AsRef<[f64]>) -> Result<ScalarScores> {
    let w = w.as_ref();
    matrix.require_maximized()?;
    if w.len() != matrix.n_criteria() {
        return Err(Error::LengthMismatch {
            expected: matrix.n_criteria(),
            actual: w.len(),
        });
    }
    let scores = matrix.rows().map(|row| dot(row, w)).collect();
    ScalarScores::new(matrix.model_ids().to_vec(), scores)
}

/// Indices whose score is within `tie_epsilon` of the maximum.
pub fn argmax_winners(scores: &ScalarScores, tie_epsilon: f64) -> Result<WinnerSet> {
    if scores.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut indices = Vec::new();
    winners_into(&scores.scores, tie_epsilon, &mut indices);
    Ok(WinnerSet { indices })
}

pub(crate) fn winners_into(scores: &[f64], tie_epsilon: f64, out: &mut Vec<usize>) {
    out.clear();
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.extend(
        scores
            .iter()
            .enumerate()
            .filter(|(_, s)| **s >= max - tie_epsilon)
            .map(|(i, _)| i),
    );
}

/// Exact tally of winner credit.
///
/// Sole wins are integer counts and tied wins are counted per winner set, so
/// merging tallies is associative and commutative and the resulting shares do
/// not depend on how the work was split.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WinTally {
    sole: Vec<u64>,
    ties: BTreeMap<Vec<usize>, u64>,
    total: u64,
}

impl WinTally {
    pub fn new(n_models: usize) -> Self {
        WinTally {
            sole: vec![0; n_models],
            ties: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn record(&mut self, winners: &[usize]) {
        self.record_n(winners, 1);
    }

    pub fn record_n(&mut self, winners: &[usize], count: u64) {
        match winners {
            [] => return,
            [one] => self.sole[*one] += count,
            many => *self.ties.entry(many.to_vec()).or_default() += count,
        }
        self.total += count;
    }

    pub fn merge(&mut self, other: &WinTally) {
        for (a, b) in self.sole.iter_mut().zip(&other.sole) {
            *a += b;
        }
        for (set, count) in &other.ties {
            *self.ties.entry(set.clone()).or_default() += count;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn n_models(&self) -> usize {
        self.sole.len()
    }

    /// Credit per model, ties split equally.
    pub fn credits(&self) -> Vec<f64> {
        let mut credits: Vec<f64> = self.sole.iter().map(|&c| c as f64).collect();
        for (set, &count) in &self.ties {
            let each = count as f64 / set.len() as f64;
            for &i in set {
                credits[i] += each;
            }
        }
        credits
    }

    /// Credit per model divided by the number of recorded events.
    pub fn shares(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.credits().into_iter().map(|c| c / total).collect()
    }

    /// Models that received any credit.
    pub fn winners(&self) -> Vec<usize> {
        let mut any = self.sole.iter().map(|&c| c > 0).collect::<Vec<_>>();
        for set in self.ties.keys() {
            for &i in set {
                any[i] = true;
            }
        }
        any.iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(i, _)| i)
            .collect()
    }

    /// Models that won at least one event outright.
    pub fn sole_winners(&self) -> Vec<usize> {
        self.sole
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(v: &[f64]) -> ScalarScores {
        ScalarScores::new((0..v.len()).map(|i| format!("m{i}")).collect(), v.to_vec()).unwrap()
    }

    #[test]
    fn one_hot_picks_component() {
        let x = [0.3, 0.7, 0.1];
        assert_eq!(weighted_score(&x, &[0.0, 1.0, 0.0]).unwrap(), 0.7);
        assert!(weighted_score(&x, &[1.0]).is_err());
    }

    #[test]
    fn winners_simple_and_tied() {
        let w = argmax_winners(&scores(&[0.3, 0.9, 0.1]), DEFAULT_TIE_EPSILON).unwrap();
        assert_eq!(w.indices(), &[1]);
        assert_eq!(w.fractional_credit(), 1.0);
        let w = argmax_winners(&scores(&[0.5, 0.5]), DEFAULT_TIE_EPSILON).unwrap();
        assert_eq!(w.indices(), &[0, 1]);
        assert_eq!(w.fractional_credit(), 0.5);
        assert!(argmax_winners(&scores(&[]), DEFAULT_TIE_EPSILON).is_err());
    }

    #[test]
    fn tally_splits_ties() {
        let mut t = WinTally::new(3);
        t.record(&[0]);
        t.record(&[0, 2]);
        t.record(&[0, 1, 2]);
        let s = t.shares();
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((s[0] - (1.0 + 0.5 + 1.0 / 3.0) / 3.0).abs() < 1e-15);
        assert_eq!(t.winners(), vec![0, 1, 2]);
        assert_eq!(t.sole_winners(), vec![0]);

        let mut a = WinTally::new(3);
        a.record(&[0]);
        let mut b = WinTally::new(3);
        b.record(&[0, 2]);
        b.record(&[0, 1, 2]);
        a.merge(&b);
        assert_eq!(a, t);
    }

    #[test]
    fn ranking_descends() {
        assert_eq!(scores(&[0.2, 0.9, 0.5]).ranking(), vec![1, 2, 0]);
    }
}
