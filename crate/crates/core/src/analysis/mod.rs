//! Convergence of preference-real sets, the simplex-lattice oracle, and the
//! uniform-surrogate simulation study.

mod converge;
mod grid;
mod simulate;

pub use converge::{check_checkpoints, converge, decade_checkpoints, ConvergenceTrace};
pub use grid::{
    domain_rows, grid_oracle, grid_oracle_with_cap, lattice_size, PreferenceDomainMap,
    DEFAULT_GRID_CAP,
};
pub use simulate::{simulate_surrogates, surrogate_study, DomainSample, SurrogateStudy};
