//! Generates CS, RCS and hard instances, checks their structure and
//! round-trips one through the text format.
//!
//! ```bash
//! cargo run --example generate_instance
//! ```

use latent_bandits::env::io::{instance_to_string, read_instance};
use latent_bandits::env::{
    generate_cs_instance, generate_hard_instance, generate_rcs_instance, Instance, NoiseModel, RowDistribution,
};
use latent_bandits::linalg::numerical_rank;

fn describe(name: &str, inst: &Instance) {
    let sizes: Vec<usize> = inst.clusters().iter().map(Vec::len).collect();
    println!(
        "{name:<5} N={} M={} C={} nu={} rank(P)={} cluster sizes {:?} best arms of users 0..4 {:?}",
        inst.num_users(),
        inst.num_arms(),
        inst.num_clusters(),
        inst.nu(),
        numerical_rank(inst.rewards(), 1e-9),
        sizes,
        &inst.best_arms()[..4],
    );
    let violations = inst.check_invariants();
    if !violations.is_empty() {
        println!("      violations: {violations:?}");
    }
}

fn main() -> latent_bandits::Result<()> {
    let gauss = RowDistribution::Gaussian { mean: 0.0, std: 1.0 };

    let cs = generate_cs_instance(200, 200, 4, gauss, 7)?.with_noise(NoiseModel::gaussian(0.5));
    describe("cs", &cs);

    let rcs = generate_rcs_instance(60, 40, 3, 0.02, gauss, 1)?.with_noise(NoiseModel::gaussian(0.3));
    describe("rcs", &rcs);

    let hard = generate_hard_instance(12, 6, 3, 0.2, &[0, 2, 4], 3)?;
    describe("hard", &hard);

    let text = instance_to_string(&rcs);
    let back = read_instance(text.as_bytes())?;
    println!("text format: {} bytes, exact round trip: {}", text.len(), back == rcs);
    Ok(())
}
