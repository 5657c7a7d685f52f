//! Dominance and Pareto-front extraction.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;
use crate::scalarize::ScalarScores;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DominanceMode {
    /// At least as good everywhere and strictly better somewhere.
    #[default]
    Weak,
    /// Strictly better everywhere.
    Strict,
}

impl std::str::FromStr for DominanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(DominanceMode::Weak),
            "strict" => Ok(DominanceMode::Strict),
            other => Err(Error::InvalidArgument(format!(
                "dominance mode \"{other}\" (expected weak or strict)"
            ))),
        }
    }
}

/// Whether row `a` dominates row `b` (all criteria maximized).
pub fn dominates(a: &[f64], b: &[f64], mode: DominanceMode) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b, mode))
}

#[inline]
fn dominates_unchecked(a: &[f64], b: &[f64], mode: DominanceMode) -> bool {
    match mode {
        DominanceMode::Weak => {
            let mut better = false;
            for (x, y) in a.iter().zip(b) {
                if x < y {
                    return false;
                }
                better |= x > y;
            }
            better
        }
        DominanceMode::Strict => a.iter().zip(b).all(|(x, y)| x > y),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParetoResult {
    /// Non-dominated models, ascending.
    pub optimal_indices: Vec<usize>,
    /// Dominated model → a Pareto-optimal model that dominates it.
    pub dominated_by: BTreeMap<usize, usize>,
}

impl ParetoResult {
    pub fn is_optimal(&self, i: usize) -> bool {
        self.optimal_indices.binary_search(&i).is_ok()
    }

    pub fn n_models(&self) -> usize {
        self.optimal_indices.len() + self.dominated_by.len()
    }

    pub fn membership(&self) -> Vec<bool> {
        (0..self.n_models()).map(|i| self.is_optimal(i)).collect()
    }
}

/// Exact non-dominated set by pairwise comparison.
pub fn pareto_front(matrix: &ScoreMatrix, mode: DominanceMode) -> Result<ParetoResult> {
    matrix.require_maximized()?;
    let n = matrix.n_models();
    let dominated: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = matrix.row(i);
            (0..n).any(|j| j != i && dominates_unchecked(matrix.row(j), row, mode))
        })
        .collect();
    let optimal_indices: Vec<usize> = (0..n).filter(|&i| !dominated[i]).collect();
    // Dominance is a strict partial order, so every dominated model has an
    // optimal dominator.
    let dominated_by = (0..n)
        .filter(|&i| dominated[i])
        .map(|i| {
            let witness = optimal_indices
                .iter()
                .copied()
                .find(|&j| dominates_unchecked(matrix.row(j), matrix.row(i), mode))
                .expect("finite strict partial order has a maximal dominator");
            (i, witness)
        })
        .collect();
    Ok(ParetoResult {
        optimal_indices,
        dominated_by,
    })
}

/// 1.0 for Weak-Pareto-optimal models, 0.0 for dominated ones.
pub fn pareto_membership_scores(matrix: &ScoreMatrix) -> Result<ScalarScores> {
    pareto_membership_scores_with(matrix, DominanceMode::Weak)
}

pub fn pareto_membership_scores_with(matrix: &ScoreMatrix, mode: DominanceMode) -> Result<ScalarScores> {
    let front = pareto_front(matrix, mode)?;
    ScalarScores::new(
        matrix.model_ids().to_vec(),
        front
            .membership()
            .into_iter()
            .map(|m| if m { 1.0 } else { 0.0 })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Bounds;

    fn m(rows: &[&[f64]]) -> ScoreMatrix {
        ScoreMatrix::uniform(
            (0..rows.len()).map(|i| format!("m{i}")).collect(),
            (0..rows[0].len()).map(|i| format!("c{i}")).collect(),
            rows.iter().map(|r| r.to_vec()).collect(),
            Bounds::UNIT,
        )
        .unwrap()
    }

    #[test]
    fn reflexive_and_incomparable() {
        for mode in [DominanceMode::Weak, DominanceMode::Strict] {
            assert!(!dominates(&[0.5, 0.5], &[0.5, 0.5], mode).unwrap());
            assert!(!dominates(&[1.0, 0.0], &[0.0, 1.0], mode).unwrap());
            assert!(!dominates(&[0.0, 1.0], &[1.0, 0.0], mode).unwrap());
        }
        assert!(dominates(&[1.0], &[1.0, 2.0], DominanceMode::Weak).is_err());
    }

    #[test]
    fn weak_versus_strict() {
        assert!(dominates(&[1.0, 0.5], &[1.0, 0.4], DominanceMode::Weak).unwrap());
        assert!(!dominates(&[1.0, 0.5], &[1.0, 0.4], DominanceMode::Strict).unwrap());
    }

    #[test]
    fn single_dominant_model() {
        let mat = m(&[&[0.1, 0.2], &[0.9, 0.9], &[0.5, 0.1]]);
        let front = pareto_front(&mat, DominanceMode::Weak).unwrap();
        assert_eq!(front.optimal_indices, vec![1]);
        assert_eq!(front.dominated_by, BTreeMap::from([(0, 1), (2, 1)]));
        assert_eq!(pareto_membership_scores(&mat).unwrap().scores, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn single_model_and_incomparable_pair() {
        assert_eq!(
            pareto_front(&m(&[&[0.3, 0.3]]), DominanceMode::Weak).unwrap().optimal_indices,
            vec![0]
        );
        assert_eq!(
            pareto_membership_scores(&m(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap().scores,
            vec![1.0, 1.0]
        );
    }

    #[test]
    fn duplicates_are_both_optimal() {
        let front = pareto_front(&m(&[&[0.5, 0.5], &[0.5, 0.5]]), DominanceMode::Weak).unwrap();
        assert_eq!(front.optimal_indices, vec![0, 1]);
    }
}
