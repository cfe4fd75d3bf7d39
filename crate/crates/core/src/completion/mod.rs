//! Low-rank matrix completion oracle.
//!
//! An estimate of a user-by-arm submatrix is built by repeating `f` times:
//! draw a Bernoulli mask over the submatrix, collect `b` noisy rewards per
//! masked entry as users arrive, split the wider side into roughly square
//! blocks and solve a nuclear-norm regularized least-squares problem on
//! each block. The final estimate is the entrywise median of the `f`
//! repetitions.
//!
//! The oracle is stateful ([`LowRankEstimator`]): the caller drives it one
//! round at a time, which lets several instances share the stream of
//! arriving users.

mod collect;
mod estimate;
mod mask;
mod params;
mod solver;

pub use collect::{collect_observations, Collection, DataCollector, ObservationBuffer, Pull};
pub use estimate::{
    low_rank_matrix_estimate, write_diagnostics_csv, BlockDiagnostic, LowRankEstimator, SubmatrixEstimate,
};
pub use mask::{sample_mask, Mask};
pub use params::{derive_oracle_params, OracleConstants, OracleParams};
pub use solver::{nuclear_norm_objective, solve_nuclear_norm, SolveOutcome, SolverSettings};
