use std::collections::BTreeMap;

use super::{AlphaSpec, NodeRun, ReportMetadata, ScoreScale, StrategyConfig, StrategySpec, TrustReport};
use crate::error::{Error, Result};
use crate::matrix::{Bounds, Direction, ScoreMatrix};
use crate::normalize::Normalization;
use crate::ontology::{NodeKind, OntologyNode};

/// Bottom-up evaluation of `ontology` over `matrix` with one strategy per
/// level (root first) and range normalization at every level.
pub fn hierarchical_aggregate(
    ontology: &OntologyNode,
    matrix: &ScoreMatrix,
    per_level: &[StrategySpec],
) -> Result<TrustReport> {
    hierarchical_aggregate_with(ontology, matrix, &StrategyConfig::new(per_level.to_vec()), "")
}

/// Bottom-up evaluation driven by a full strategy document.
///
/// Each branch node gathers its children's score vectors into a matrix
/// (leaves contribute their raw column, branches their aggregate scores on
/// `[0, 1]`), normalizes it, and applies its strategy: the node's own
/// override, else a document override for its path or name, else its
/// level's strategy.
pub fn hierarchical_aggregate_with(
    ontology: &OntologyNode,
    matrix: &ScoreMatrix,
    config: &StrategyConfig,
    dataset_id: &str,
) -> Result<TrustReport> {
    ontology.validate(matrix)?;
    if ontology.is_leaf() {
        return Err(Error::InvalidArgument("ontology root must be a branch".into()));
    }
    let depth = ontology.depth();
    if config.levels.len() != depth {
        return Err(Error::LevelMismatch {
            expected: depth,
            actual: config.levels.len(),
        });
    }

    let mut eval = Evaluator {
        matrix,
        config,
        per_node: BTreeMap::new(),
        runs: BTreeMap::new(),
    };
    let root = eval.node(ontology, 0, &ontology.name)?;

    let root_strategy = &eval.runs[&ontology.name].strategy;
    let scale = if config.normalization == Normalization::None
        && matches!(root_strategy, StrategySpec::Average | StrategySpec::Weighted { .. })
    {
        ScoreScale::Native
    } else {
        ScoreScale::Unit
    };
    Ok(TrustReport {
        model_ids: matrix.model_ids().to_vec(),
        trust_scores: root.values,
        per_node_scores: eval.per_node,
        metadata: ReportMetadata {
            dataset_id: dataset_id.to_string(),
            root: ontology.name.clone(),
            normalization: config.normalization,
            scale,
            levels: config.levels.clone(),
            nodes: eval.runs,
            elapsed_ms: None,
        },
    })
}

struct Column {
    values: Vec<f64>,
    bounds: Bounds,
    direction: Direction,
}

struct Evaluator<'a> {
    matrix: &'a ScoreMatrix,
    config: &'a StrategyConfig,
    per_node: BTreeMap<String, Vec<f64>>,
    runs: BTreeMap<String, NodeRun>,
}

impl Evaluator<'_> {
    fn node(&mut self, node: &OntologyNode, level: usize, path: &str) -> Result<Column> {
        let children = match &node.kind {
            NodeKind::Leaf { criterion } => {
                let c = self
                    .matrix
                    .criterion_index(criterion)
                    .ok_or_else(|| Error::DanglingCriterion(criterion.clone()))?;
                return Ok(Column {
                    values: self.matrix.column(c),
                    bounds: self.matrix.bounds()[c],
                    direction: self.matrix.directions()[c],
                });
            }
            NodeKind::Branch(children) => children,
        };

        let columns = children
            .iter()
            .map(|child| self.node(child, level + 1, &format!("{path}/{}", child.name)))
            .collect::<Result<Vec<_>>>()?;
        let n_models = self.matrix.n_models();
        let rows = (0..n_models)
            .map(|m| columns.iter().map(|c| c.values[m]).collect())
            .collect();
        let level_matrix = ScoreMatrix::new(
            self.matrix.model_ids().to_vec(),
            children.iter().map(|c| c.name.clone()).collect(),
            rows,
            columns.iter().map(|c| c.bounds).collect(),
            columns.iter().map(|c| c.direction).collect(),
        )?;
        let level_matrix = self.config.normalization.apply(&level_matrix)?;

        let strategy = self.resolve(node, level, path, level_matrix.n_criteria())?;
        let scores = strategy.apply(&level_matrix)?;

        let bounds = match (&strategy, self.config.normalization) {
            (StrategySpec::Average | StrategySpec::Weighted { .. }, Normalization::None) => {
                let lo = columns.iter().map(|c| c.bounds.lo).fold(f64::INFINITY, f64::min);
                let hi = columns.iter().map(|c| c.bounds.hi).fold(f64::NEG_INFINITY, f64::max);
                Bounds { lo, hi }
            }
            _ => Bounds::UNIT,
        };
        self.per_node.insert(path.to_string(), scores.scores.clone());
        self.runs.insert(path.to_string(), NodeRun { level, strategy });
        Ok(Column {
            values: scores.scores,
            bounds,
            direction: Direction::Maximize,
        })
    }

    fn resolve(&self, node: &OntologyNode, level: usize, path: &str, n_children: usize) -> Result<StrategySpec> {
        let spec = node
            .strategy_override
            .as_ref()
            .or_else(|| self.config.overrides.get(path))
            .or_else(|| self.config.overrides.get(&node.name))
            .unwrap_or(&self.config.levels[level]);
        Ok(match spec {
            StrategySpec::PreferenceSample {
                alpha,
                n_samples,
                seed,
            } => StrategySpec::PreferenceSample {
                alpha: AlphaSpec::Explicit(alpha.resolve(n_children)?),
                n_samples: *n_samples,
                seed: if level == 0 { *seed } else { node_seed(*seed, path) },
            },
            other => other.clone(),
        })
    }
}

/// Seed for a non-root node: the level seed mixed with an FNV-1a hash of the
/// node path, so sibling nodes draw from unrelated streams.
fn node_seed(seed: u64, path: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in path.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix(seed ^ h)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
