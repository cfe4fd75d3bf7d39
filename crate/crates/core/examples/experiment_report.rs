//! Runs an experiment described in TOML and writes `regret.csv`,
//! `summary.csv`, `phase_trace.csv`, `regret.svg` and `assumptions.txt`.
//!
//! ```bash
//! cargo run --release --example experiment_report -- configs/appendix_a.toml out/appendix-a
//! ```
//!
//! Without arguments a small built-in config is used and the report goes
//! to `out/example`.

use std::path::PathBuf;

use latent_bandits::bench::{emit_report, run_experiment, ExperimentConfig};

const SMALL: &str = r#"
name = "small"
horizon = 20000
seeds = [1, 2, 3]
check = true

[instance]
kind = "cs"
users = 60
arms = 60
clusters = 3
seed = 2
noise = { kind = "gaussian", sigma = 0.5 }

[[algorithms]]
name = "lattice"
params = { clusters = 3, sigma = 0.5, c_prime = { kind = "fixed", value = 1.0 }, oracle = { c_b = 0.3, f_cap = 1 } }

[[algorithms]]
name = "ucb"
params = { sigma = 0.5 }
"#;

fn main() -> latent_bandits::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config = match args.first() {
        Some(path) => ExperimentConfig::from_file(path.as_ref())?,
        None => ExperimentConfig::from_toml_str(SMALL)?,
    };
    config.out_dir = args.get(1).map(PathBuf::from).unwrap_or_else(|| "out/example".into());

    let report = run_experiment(&config)?;
    print!("{}", report.describe());
    for path in emit_report(&report, &config.out_dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
