//! Multi-user multi-armed bandits with latent cluster structure.
//!
//! Users arrive uniformly at random and each pulls one arm per round. Users
//! are grouped into a small number of clusters whose members share (or
//! nearly share) a mean reward vector, so the `N x M` reward matrix is low
//! rank. The crate provides:
//!
//! - [`env`]: instance generators, the round-by-round simulator and the
//!   regret ledger.
//! - [`completion`]: the low-rank matrix completion oracle (Bernoulli masks,
//!   variance-reduced data collection, nuclear-norm solves, median boosting).
//! - [`lattice`]: the phased-elimination algorithm that alternates matrix
//!   completion, good-arm selection and user-graph clustering.
//! - [`lattice_rcs`]: the variant for relaxed cluster structure.
//! - [`baselines`]: per-user UCB, explore-then-commit and a simplified
//!   k-means based phased algorithm.
//! - [`checker`]: spectral diagnostics (condition number, incoherence,
//!   subset smoothness).
//! - [`bench`]: experiment configuration, multi-seed execution and report
//!   emission (CSV and SVG).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bench;
pub mod checker;
pub mod completion;
pub mod env;
pub mod error;
pub mod lattice;
pub mod lattice_rcs;
pub mod linalg;
pub mod rng;

pub use error::{Error, Result};
