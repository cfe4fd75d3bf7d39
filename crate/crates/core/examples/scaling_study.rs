//! Final regret against horizon on a fixed instance, with the fitted
//! log-log slope per algorithm.
//!
//! ```bash
//! cargo run --release --example scaling_study
//! ```

use latent_bandits::bench::{run_scaling_study, Algorithm, ExperimentConfig, InstanceSpec, UcbConfig};
use latent_bandits::env::{NoiseModel, RowDistribution};
use latent_bandits::lattice::LatticeConfig;

fn main() -> latent_bandits::Result<()> {
    let instance = InstanceSpec::Cs {
        users: 32,
        arms: 32,
        clusters: 2,
        rows: RowDistribution::Gaussian { mean: 0.0, std: 1.0 },
        noise: NoiseModel::gaussian(0.5),
        seed: 11,
    };
    let algorithms = [
        Algorithm::Lattice(LatticeConfig::desk_scale(2, 0.5)),
        Algorithm::Ucb(UcbConfig { sigma: 0.5 }),
    ];
    let config = ExperimentConfig::new(instance, &algorithms, 4096, vec![1, 2, 3]);
    let study = run_scaling_study(&config, &[4096, 8192, 16384, 32768])?;
    for p in &study.points {
        println!("{:<10} T={:<6} mean final regret {:>8.1} +- {:.1}", p.algorithm, p.horizon, p.mean, p.stderr);
    }
    for alg in study.algorithms() {
        println!("{alg}: slope {:.3}", study.slope(&alg).unwrap_or(f64::NAN));
    }
    Ok(())
}
