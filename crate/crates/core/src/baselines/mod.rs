//! Comparison policies sharing the LATTICE run format.

mod etc;
mod kmeans;
mod simplified;
mod ucb;

pub use etc::{run_explore_then_commit, EtcConfig};
pub use kmeans::{kmeans, kmeans_elbow, ElbowResult, KMeansFit};
pub use simplified::{
    robust_active_arms, run_simplified_lattice, union_active_arms, GapScale, PhaseLengths, SimplifiedConfig, SimplifiedPhase,
    SimplifiedRun,
};
pub use ucb::run_per_user_ucb;
