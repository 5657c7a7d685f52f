use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::StrategySpec;
use crate::normalize::Normalization;

/// Whether scores live on `[0, 1]` (shares, normalized averages, Pareto
/// membership) or on the table's native scale.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreScale {
    #[default]
    Unit,
    Native,
}

/// The strategy a node actually ran, with alpha and seed resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeRun {
    pub level: usize,
    pub strategy: StrategySpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub dataset_id: String,
    pub root: String,
    pub normalization: Normalization,
    pub scale: ScoreScale,
    /// Configured strategy per level, root first.
    pub levels: Vec<StrategySpec>,
    /// Node path → resolved strategy.
    pub nodes: BTreeMap<String, NodeRun>,
    /// Wall-clock time. Left out of reproducible output unless requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

/// Per-model trustworthiness plus the score vector of every branch node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrustReport {
    pub model_ids: Vec<String>,
    pub trust_scores: Vec<f64>,
    /// Branch node path (`root/child/...`) → per-model scores.
    pub per_node_scores: BTreeMap<String, Vec<f64>>,
    pub metadata: ReportMetadata,
}

impl TrustReport {
    /// Model indices by descending trust score; ties keep table order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.model_ids.len()).collect();
        order.sort_by(|&a, &b| self.trust_scores[b].total_cmp(&self.trust_scores[a]));
        order
    }

    pub fn score_of(&self, model: &str) -> Option<f64> {
        self.model_ids
            .iter()
            .position(|m| m == model)
            .map(|i| self.trust_scores[i])
    }

    /// Highest-scoring model (first in table order on ties).
    pub fn top(&self) -> (&str, f64) {
        let i = self.ranking()[0];
        (&self.model_ids[i], self.trust_scores[i])
    }

    /// Models with a strictly positive trust score.
    pub fn nonzero(&self) -> Vec<usize> {
        (0..self.trust_scores.len())
            .filter(|&i| self.trust_scores[i] > 0.0)
            .collect()
    }
}
