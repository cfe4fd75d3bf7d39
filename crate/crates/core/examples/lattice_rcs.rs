//! LATTICE for the relaxed cluster structure: joint refinement until the
//! clusters separate, then per-cluster intersection of good arms.
//!
//! ```bash
//! cargo run --release --example lattice_rcs
//! ```

use latent_bandits::env::{generate_rcs_instance, NoiseModel, RowDistribution};
use latent_bandits::lattice::LatticeConfig;
use latent_bandits::lattice_rcs::{run_lattice_rcs, RcsConfig};

fn main() -> latent_bandits::Result<()> {
    let gauss = RowDistribution::Gaussian { mean: 0.0, std: 1.0 };
    let nu = 0.02;
    let inst = generate_rcs_instance(60, 40, 3, nu, gauss, 3)?.with_noise(NoiseModel::gaussian(0.3));
    let config = RcsConfig::new(LatticeConfig::desk_scale(3, 0.3), nu);
    let horizon = 40_000;
    let run = run_lattice_rcs(&inst, &config, horizon, 3)?;

    for r in &run.trace.records {
        let arms: Vec<usize> = r.arm_sets.iter().map(Vec::len).collect();
        println!("phase {:>2}  {:<11} sets {:<2} arms {arms:?}", r.phase, r.mode.as_str(), r.user_sets.len());
    }
    match run.trace.clusterwise_from() {
        Some(p) => {
            let r = run.trace.records.iter().find(|r| r.phase == p).unwrap();
            println!("cluster-wise from phase {p}, partition correct: {}", r.user_sets == inst.clusters());
        }
        None => println!("never reached cluster-wise mode"),
    }
    let h = &run.history;
    println!(
        "regret {:.0}, regret(T)/regret(T/2) = {:.3}, intersection fallbacks {}",
        h.cumulative_regret(),
        h.cumulative_regret() / h.cumulative_at(horizon as usize / 2),
        run.intersection_fallbacks
    );
    Ok(())
}
