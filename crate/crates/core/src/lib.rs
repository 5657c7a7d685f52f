//! Multi-criteria trustworthiness aggregation.
//!
//! Reduces a models × criteria evaluation table to one score per model by
//! averaging, by Pareto membership, or by *preference sampling*: drawing
//! many weight vectors from a Dirichlet prior, scalarizing the table with
//! each, and crediting the winner. Strategies compose over a hierarchical
//! ontology of characteristics.

pub mod aggregate;
pub mod analysis;
pub mod datasets;
mod error;
pub mod matrix;
pub mod normalize;
pub mod ontology;
pub mod pareto;
pub mod report;
pub mod sampling;
pub mod scalarize;

pub use aggregate::{
    aggregate_average, aggregate_preference, hierarchical_aggregate, hierarchical_aggregate_with,
    run_experiment, AlphaSpec, StrategyConfig, StrategySpec, TrustReport,
};
pub use error::{Error, Result};
pub use matrix::{load_matrix, Bounds, Direction, MatrixSchema, ScoreMatrix};
pub use normalize::{normalize, normalize_range, Normalization};
pub use ontology::{load_ontology, OntologyNode};
pub use pareto::{dominates, pareto_front, pareto_membership_scores, DominanceMode, ParetoResult};
pub use sampling::{focus_alpha, sample_preference, AlphaVector, PreferenceVector, SampleStream};
pub use scalarize::{argmax_winners, scalarize_matrix, weighted_score, ScalarScores, WinnerSet};
