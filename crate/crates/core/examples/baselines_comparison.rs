//! Per-user UCB, explore-then-commit, simplified LATTICE and LATTICE on one
//! instance with paired seeds.
//!
//! ```bash
//! cargo run --release --example baselines_comparison
//! ```

use latent_bandits::baselines::{
    run_explore_then_commit, run_per_user_ucb, run_simplified_lattice, EtcConfig, SimplifiedConfig,
};
use latent_bandits::env::{generate_cs_instance, NoiseModel, RowDistribution};
use latent_bandits::lattice::{run_lattice, LatticeConfig};

fn main() -> latent_bandits::Result<()> {
    let gauss = RowDistribution::Gaussian { mean: 0.0, std: 1.0 };
    let inst = generate_cs_instance(100, 80, 3, gauss, 5)?.with_noise(NoiseModel::gaussian(0.5));
    let horizon = 30_000;
    let etc = EtcConfig {
        clusters: 3,
        sigma: 0.5,
        explore_fraction: 0.2,
        ..Default::default()
    };
    let simplified = SimplifiedConfig {
        clusters: 3,
        lambda_scale: 1.0,
        ..Default::default()
    };
    let lattice = LatticeConfig::desk_scale(3, 0.5);

    println!("seed  ucb       etc       simplified  lattice");
    for seed in 1..=3 {
        let ucb = run_per_user_ucb(&inst, horizon, 0.5, seed)?.cumulative_regret();
        let e = run_explore_then_commit(&inst, horizon, &etc, seed)?.cumulative_regret();
        let s = run_simplified_lattice(&inst, &simplified, horizon, seed)?.history.cumulative_regret();
        let l = run_lattice(&inst, &lattice, horizon, seed)?.history.cumulative_regret();
        println!("{seed:>4}  {ucb:<8.0}  {e:<8.0}  {s:<10.0}  {l:.0}");
    }
    Ok(())
}
