//! Phased elimination with matrix-completion estimates and user-graph
//! clustering, for the exact cluster structure.
//!
//! Each phase halves the accuracy target. Every user set with enough active
//! arms gets a matrix-completion oracle over its users and arms; sets that
//! have already shrunk below the threshold hand their users to per-user UCB
//! for the rest of the horizon. When all oracles of a phase finish, every
//! user keeps the arms close to its estimated best, users whose estimates
//! agree are linked, and connected components become the next phase's sets.

mod config;
mod engine;
mod good_arms;
mod graph;
mod trace;
mod ucb;

pub use config::{CPrime, LatticeConfig};
pub(crate) use engine::{run_engine, Refinement};
pub use good_arms::{good_arm_set, GoodArmSet};
pub use graph::{build_user_graph, refine_partition, UserGraph};
pub use trace::{write_phase_trace_csv, Mode, PhaseRecord, PhaseTrace, PHASE_TRACE_HEADER};
pub use ucb::{ucb_index, UcbArmState};

use crate::env::{Instance, RunHistory};
use crate::error::Result;

/// Outcome of a LATTICE run.
#[derive(Debug, Clone)]
pub struct LatticeRun {
    pub history: RunHistory,
    pub trace: PhaseTrace,
    /// Times an empty intersection of good-arm sets fell back to the union.
    pub intersection_fallbacks: usize,
}

/// Runs LATTICE on `instance` for `horizon` rounds.
pub fn run_lattice(instance: &Instance, config: &LatticeConfig, horizon: u64, seed: u64) -> Result<LatticeRun> {
    run_engine(instance, config, Refinement::Cs, horizon, seed)
}
