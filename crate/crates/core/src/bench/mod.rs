//! Experiment harness: TOML configuration, seeded multi-run execution,
//! CSV and SVG reports, and regret-scaling studies.
//!
//! Every (algorithm, seed) cell runs on the same instance, built once from
//! the instance spec; the seed only drives user arrivals, noise and the
//! policy's own randomness. Cells run in parallel and are aggregated in
//! run-id order, so a report is a deterministic function of its config.
//!
//! # Config format
//!
//! ```toml
//! name = "appendix-a"
//! horizon = 60000
//! seeds = [1, 2, 3, 4, 5]
//! out_dir = "out/appendix-a"
//! check = true            # write assumptions.txt
//! full_history = false    # regret.csv holds checkpoints only
//! checkpoints = 100       # log-spaced, the horizon is always added
//!
//! [instance]
//! kind = "cs"             # cs | rcs | hard | file
//! users = 200
//! arms = 200
//! clusters = 4
//! seed = 7
//! rows = { kind = "gaussian", mean = 0.0, std = 1.0 }
//! noise = { kind = "gaussian", sigma = 0.5 }
//!
//! [[algorithms]]
//! name = "ucb"            # lattice | lattice-rcs | ucb | etc | simplified-lattice
//! params = { sigma = 0.5 }
//!
//! [[algorithms]]
//! name = "lattice"
//! label = "lattice"       # optional, must be unique
//! [algorithms.params]
//! clusters = 4
//! sigma = 0.5
//!
//! [scaling]               # used by `latbench bench`
//! horizons = [16384, 32768, 65536, 131072]
//! ```
//!
//! `params` holds the fields of the algorithm's config struct; missing
//! fields take their defaults.

mod config;
mod report;
mod run;
mod scaling;
mod svg;

pub use config::{Algorithm, AlgorithmEntry, ExperimentConfig, InstanceSpec, ScalingSpec, UcbConfig, ALGORITHMS};
pub use report::{
    checkpoint_grid, curves_from_summary, emit_report, loglog_slope, mean_stderr, read_regret_csv, read_summary_csv,
    summarize_regret_rows, write_regret_csv, write_summary_csv, Curve, RegretRow, Report, RunSummary, Sample,
    SummaryRow, REGRET_HEADER, SUMMARY_HEADER,
};
pub use run::{run_algorithm, run_experiment, run_experiment_on};
pub use scaling::{run_scaling_study, ScalingPoint, ScalingReport};
pub use svg::render_regret_svg;
