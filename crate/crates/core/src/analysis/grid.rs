//! Exhaustive simplex-lattice oracle.
//!
//! Every composition `k` of `resolution` into `C` non-negative parts gives a
//! weight vector `k / resolution`. Scalarizing each lattice point and
//! counting winners estimates each model's preference-domain volume under
//! the uniform (`alpha = 1`) prior without touching the Dirichlet sampler.
//!
//! Lattice points are the vertices of the standard subdivision of the
//! simplex into `resolution^(C−1)` congruent cells. A point is weighted by
//! the number of cells around it, so that boundary points (which sit in
//! fewer cells) are not over-counted: the estimate is the exact volume
//! integral of the piecewise-linear interpolant of each winner indicator.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;
use crate::scalarize::{winners_into, WinTally, DEFAULT_TIE_EPSILON};

pub const DEFAULT_GRID_CAP: u128 = 100_000_000;

/// Number of lattice points, `C(resolution + C − 1, C − 1)`.
pub fn lattice_size(resolution: u32, dims: usize) -> u128 {
    let n = u128::from(resolution) + dims as u128 - 1;
    let k = dims as u128 - 1;
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Winner statistics over the full lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreferenceDomainMap {
    pub resolution: u32,
    pub n_points: u64,
    pub model_ids: Vec<String>,
    /// Cell-weighted fraction of the lattice won, ties split equally.
    pub shares: Vec<f64>,
    /// Models that win at least one lattice point outright.
    pub winners: Vec<usize>,
    /// Models that only ever tie for first.
    pub tie_only: Vec<usize>,
}

pub fn grid_oracle(matrix: &ScoreMatrix, resolution: u32) -> Result<PreferenceDomainMap> {
    grid_oracle_with_cap(matrix, resolution, DEFAULT_GRID_CAP)
}

pub fn grid_oracle_with_cap(matrix: &ScoreMatrix, resolution: u32, cap: u128) -> Result<PreferenceDomainMap> {
    let tally = grid_tally(matrix, resolution, cap)?;
    let winners = tally.sole_winners();
    let tie_only = tally
        .winners()
        .into_iter()
        .filter(|i| !winners.contains(i))
        .collect();
    Ok(PreferenceDomainMap {
        resolution,
        n_points: lattice_size(resolution, matrix.n_criteria()) as u64,
        model_ids: matrix.model_ids().to_vec(),
        shares: tally.shares(),
        winners,
        tie_only,
    })
}

fn check_grid(matrix: &ScoreMatrix, resolution: u32, cap: u128) -> Result<()> {
    matrix.require_maximized()?;
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be at least 1".into()));
    }
    if matrix.n_criteria() < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 criteria".into()));
    }
    if matrix.n_criteria() > MAX_GRID_DIMS {
        return Err(Error::InvalidArgument(format!(
            "grid supports at most {MAX_GRID_DIMS} criteria"
        )));
    }
    let points = lattice_size(resolution, matrix.n_criteria());
    if points > cap {
        return Err(Error::GridTooLarge { points, cap });
    }
    Ok(())
}

/// Keeps the weighted tally (`points × C!`) inside `u64` under the default cap.
const MAX_GRID_DIMS: usize = 12;

/// Number of subdivision cells incident to a lattice point, indexed by the
/// bit mask of its zero components: `C! / Π (run + 1)!` over the maximal
/// runs of zero components, read cyclically.
fn cell_weights(dims: usize) -> Vec<u64> {
    let factorial = |n: usize| (1..=n as u64).product::<u64>();
    let full = factorial(dims);
    (0..1u32 << dims)
        .map(|mask| {
            if mask.count_ones() as usize == dims {
                return 0;
            }
            // rotate so the scan starts on a nonzero component
            let start = (0..dims).find(|&i| mask & (1 << i) == 0).unwrap_or(0);
            let mut weight = full;
            let mut run = 0;
            for step in 1..=dims {
                if mask & (1 << ((start + step) % dims)) != 0 {
                    run += 1;
                } else {
                    weight /= factorial(run + 1);
                    run = 0;
                }
            }
            weight
        })
        .collect()
}

fn zero_mask(k: &[u32]) -> usize {
    k.iter()
        .enumerate()
        .filter(|(_, &x)| x == 0)
        .fold(0, |m, (i, _)| m | (1 << i))
}

/// Prefixes of length `min(2, C − 1)`; each is one parallel work unit.
fn prefixes(resolution: u32, dims: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..(dims - 1).min(2) {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                let used: u32 = p.iter().sum();
                (0..=resolution - used).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

struct Walker<'a> {
    columns: &'a [Vec<f64>],
    tie_epsilon: f64,
    /// `partial[d]`: scores from the first `d` components.
    partial: Vec<Vec<f64>>,
    prefix: Vec<u32>,
    winners: Vec<usize>,
}

impl Walker<'_> {
    fn walk(&mut self, depth: usize, remaining: u32, visit: &mut impl FnMut(&[u32], &[f64], &[usize])) {
        let dims = self.columns.len();
        let last = depth + 1 == dims;
        let from = if last { remaining } else { 0 };
        for k in from..=remaining {
            let kf = f64::from(k);
            {
                let (head, tail) = self.partial.split_at_mut(depth + 1);
                for ((n, c), col) in tail[0].iter_mut().zip(&head[depth]).zip(&self.columns[depth]) {
                    *n = c + kf * col;
                }
            }
            self.prefix.push(k);
            if last {
                winners_into(&self.partial[dims], self.tie_epsilon, &mut self.winners);
                visit(&self.prefix, &self.partial[dims], &self.winners);
            } else {
                self.walk(depth + 1, remaining - k, visit);
            }
            self.prefix.pop();
        }
    }
}

/// Visits every lattice point under `prefix` in lexicographic order.
fn walk_prefix(
    matrix: &ScoreMatrix,
    columns: &[Vec<f64>],
    resolution: u32,
    prefix: &[u32],
    visit: &mut impl FnMut(&[u32], &[f64], &[usize]),
) {
    let dims = columns.len();
    let n = matrix.n_models();
    let mut partial = vec![vec![0.0; n]; dims + 1];
    for (d, &k) in prefix.iter().enumerate() {
        let kf = f64::from(k);
        let (head, tail) = partial.split_at_mut(d + 1);
        for ((nx, c), col) in tail[0].iter_mut().zip(&head[d]).zip(&columns[d]) {
            *nx = c + kf * col;
        }
    }
    let used: u32 = prefix.iter().sum();
    let mut walker = Walker {
        columns,
        tie_epsilon: DEFAULT_TIE_EPSILON * f64::from(resolution),
        partial,
        prefix: prefix.to_vec(),
        winners: Vec::with_capacity(n),
    };
    walker.walk(prefix.len(), resolution - used, visit);
}

fn grid_tally(matrix: &ScoreMatrix, resolution: u32, cap: u128) -> Result<WinTally> {
    check_grid(matrix, resolution, cap)?;
    let columns: Vec<Vec<f64>> = (0..matrix.n_criteria()).map(|c| matrix.column(c)).collect();
    let weights = cell_weights(matrix.n_criteria());
    let tallies: Vec<WinTally> = prefixes(resolution, matrix.n_criteria())
        .into_par_iter()
        .map(|prefix| {
            let mut tally = WinTally::new(matrix.n_models());
            walk_prefix(matrix, &columns, resolution, &prefix, &mut |k, _, w| {
                tally.record_n(w, weights[zero_mask(k)])
            });
            tally
        })
        .collect();
    let mut total = WinTally::new(matrix.n_models());
    for t in &tallies {
        total.merge(t);
    }
    Ok(total)
}

/// `(w_1..w_C, winners)` for every lattice point, for export. Respects the
/// same cap as the oracle.
pub fn domain_rows(matrix: &ScoreMatrix, resolution: u32, cap: u128) -> Result<Vec<(Vec<f64>, Vec<usize>)>> {
    check_grid(matrix, resolution, cap)?;
    let columns: Vec<Vec<f64>> = (0..matrix.n_criteria()).map(|c| matrix.column(c)).collect();
    let r = f64::from(resolution);
    let mut rows = Vec::new();
    walk_prefix(matrix, &columns, resolution, &[], &mut |k, _, w| {
        rows.push((k.iter().map(|&x| f64::from(x) / r).collect(), w.to_vec()));
    });
    Ok(rows)
}
