//! LATTICE on a cluster-structured instance, with the phase trace.
//!
//! ```bash
//! cargo run --release --example lattice_cs
//! ```

use latent_bandits::env::{generate_cs_instance, NoiseModel, RowDistribution};
use latent_bandits::lattice::{run_lattice, LatticeConfig};

fn main() -> latent_bandits::Result<()> {
    let gauss = RowDistribution::Gaussian { mean: 0.0, std: 1.0 };
    let inst = generate_cs_instance(100, 100, 3, gauss, 2)?.with_noise(NoiseModel::gaussian(0.5));
    let mut config = LatticeConfig::desk_scale(3, 0.5);
    config.track_oracle_error = true;
    let horizon = 40_000;
    let run = run_lattice(&inst, &config, horizon, 1)?;

    println!("phase  delta   mode         sets  arms/set      rounds  oracle error");
    for r in &run.trace.records {
        let arms: Vec<usize> = r.arm_sets.iter().map(Vec::len).collect();
        println!(
            "{:>5}  {:<6.3}  {:<11}  {:>4}  {:<12}  {:>6}  {}",
            r.phase,
            r.delta,
            r.mode.as_str(),
            r.user_sets.len(),
            format!("{arms:?}"),
            r.rounds_used(),
            r.oracle_error.map_or("-".into(), |e| format!("{e:.3}")),
        );
    }
    let recovered = run.trace.records.iter().any(|r| r.user_sets == inst.clusters());
    let h = &run.history;
    println!(
        "regret {:.0} after {horizon} rounds ({:.0} in the last quarter); true clusters recovered: {recovered}",
        h.cumulative_regret(),
        h.cumulative_regret() - h.cumulative_at(3 * horizon as usize / 4)
    );
    Ok(())
}
