use thiserror::Error;

/// Errors produced by loading, validating and aggregating score data.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty table")]
    EmptyTable,

    #[error("duplicate model name \"{0}\"")]
    DuplicateModel(String),

    #[error("duplicate criterion \"{0}\"")]
    DuplicateCriterion(String),

    #[error("non-numeric cell at row {row}, column \"{column}\": \"{value}\"")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("value {value} for model \"{model}\" criterion \"{criterion}\" outside bounds [{lo}, {hi}]")]
    OutOfBounds {
        model: String,
        criterion: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid bounds for criterion \"{criterion}\": hi ({hi}) must exceed lo ({lo})")]
    InvalidBounds { criterion: String, lo: f64, hi: f64 },

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("malformed document at {path}: {message}")]
    MalformedDocument { path: String, message: String },

    #[error("dangling criterion reference \"{0}\"")]
    DanglingCriterion(String),

    #[error("dangling child reference \"{0}\"")]
    DanglingNode(String),

    #[error("cycle in ontology through node \"{0}\"")]
    Cycle(String),

    #[error("branch \"{0}\" has zero children")]
    EmptyBranch(String),

    #[error("duplicate sibling name \"{0}\"")]
    DuplicateSibling(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("alpha length {actual} ≠ criteria {expected}")]
    AlphaLength { expected: usize, actual: usize },

    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("criterion \"{0}\" is not maximized; normalize the matrix first")]
    NotMaximized(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid multiplier {0}: must be ≥ 1")]
    InvalidMultiplier(f64),

    #[error("strategy count {actual} does not match tree depth {expected}")]
    LevelMismatch { expected: usize, actual: usize },

    #[error("n_samples must be at least 1")]
    ZeroSamples,

    #[error("checkpoints must be positive and strictly increasing")]
    UnsortedCheckpoints,

    #[error("grid of {points} points exceeds cap {cap}")]
    GridTooLarge { points: u128, cap: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown preset \"{id}\"; available: {catalog}")]
    UnknownPreset { id: String, catalog: String },

    #[error("unknown dataset \"{0}\"")]
    UnknownDataset(String),

    #[error("degenerate Dirichlet draw after {0} attempts")]
    DegenerateDraw(u32),
}

impl Error {
    /// True for errors caused by the caller's configuration (alpha, strategy,
    /// flags) rather than by the contents of a data document.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::AlphaLength { .. }
                | Error::InvalidAlpha(_)
                | Error::InvalidWeights(_)
                | Error::InvalidMultiplier(_)
                | Error::IndexOutOfRange { .. }
                | Error::LevelMismatch { .. }
                | Error::ZeroSamples
                | Error::UnsortedCheckpoints
                | Error::GridTooLarge { .. }
                | Error::InvalidArgument(_)
                | Error::UnknownPreset { .. }
                | Error::UnknownDataset(_)
                | Error::NotMaximized(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
