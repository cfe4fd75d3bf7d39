//! Problem instances, the round-by-round simulator and the regret ledger.

mod generate;
mod history;
mod instance;
pub mod io;
mod noise;
mod simulator;

pub use generate::{generate_cs_instance, generate_hard_instance, generate_rcs_instance, RowDistribution};
pub use history::{Record, RunHistory};
pub use instance::Instance;
pub use noise::{NoiseKind, NoiseModel};
pub use simulator::{Environment, Step};

/// Separation factor between clusters' best-arm rewards in relaxed
/// cluster structure instances.
pub const RCS_SEPARATION: f64 = 20.0;
