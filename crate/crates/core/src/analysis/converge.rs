use serde::{Deserialize, Serialize};

use crate::aggregate::tally_preferences;
use crate::error::{Error, Result};
use crate::matrix::ScoreMatrix;
use crate::sampling::AlphaVector;
use crate::scalarize::WinTally;

/// Cumulative preference-sampling shares at increasing sample counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub model_ids: Vec<String>,
    pub alpha: AlphaVector,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    /// `shares_at[k][m]`: model `m`'s cumulative share after `checkpoints[k]` samples.
    pub shares_at: Vec<Vec<f64>>,
    /// Models with positive cumulative share at each checkpoint.
    pub ever_winners_at: Vec<Vec<usize>>,
}

impl ConvergenceTrace {
    pub fn final_ever_winners(&self) -> &[usize] {
        self.ever_winners_at.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// `checkpoint,model,cumulative_share` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("checkpoint,model,cumulative_share\n");
        for (k, shares) in self.checkpoints.iter().zip(&self.shares_at) {
            for (model, share) in self.model_ids.iter().zip(shares) {
                out.push_str(&format!("{k},{},{share}\n", csv_field(model)));
            }
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn check_checkpoints(checkpoints: &[u64]) -> Result<()> {
    if checkpoints.is_empty()
        || checkpoints[0] == 0
        || checkpoints.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::UnsortedCheckpoints);
    }
    Ok(())
}

/// One incremental sampling pass over streams `(seed, 0..last)`, emitting
/// cumulative shares at every checkpoint. Sample `i` is the same draw in
/// every trace with this seed, so a longer schedule extends a shorter one.
pub fn converge(
    matrix: &ScoreMatrix,
    alpha: &AlphaVector,
    checkpoints: &[u64],
    seed: u64,
) -> Result<ConvergenceTrace> {
    check_checkpoints(checkpoints)?;
    let mut cumulative = WinTally::new(matrix.n_models());
    let mut shares_at = Vec::with_capacity(checkpoints.len());
    let mut ever_winners_at = Vec::with_capacity(checkpoints.len());
    let mut start = 0;
    for &k in checkpoints {
        cumulative.merge(&tally_preferences(matrix, alpha, seed, start..k)?);
        shares_at.push(cumulative.shares());
        ever_winners_at.push(cumulative.winners());
        start = k;
    }
    Ok(ConvergenceTrace {
        model_ids: matrix.model_ids().to_vec(),
        alpha: alpha.clone(),
        seed,
        checkpoints: checkpoints.to_vec(),
        shares_at,
        ever_winners_at,
    })
}

/// Powers of ten from 10 up to `max` inclusive.
pub fn decade_checkpoints(max: u64) -> Vec<u64> {
    std::iter::successors(Some(10u64), |k| k.checked_mul(10))
        .take_while(|k| *k <= max)
        .collect()
}
