mod common;

use common::*;
use latent_bandits::env::{generate_rcs_instance, NoiseModel};
use latent_bandits::lattice::Mode;
use latent_bandits::lattice_rcs::{run_lattice_rcs, RcsConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn clusterwise_mode_freezes_partition_and_shrinks_arms(
        c in 1usize..4,
        nu in 0.0f64..0.04,
        sigma in 0.0f64..0.4,
        seed in any::<u64>(),
    ) {
        let inst = generate_rcs_instance(18, 12, c, nu, GAUSS, seed % 991).unwrap().with_noise(NoiseModel::gaussian(sigma));
        let cfg = RcsConfig::new(small_lattice(c, sigma), nu);
        let run = run_lattice_rcs(&inst, &cfg, 6000, seed).unwrap();
        check_trace_partitions(&run.trace, 18).map_err(TestCaseError::fail)?;
        check_round_accounting(&run, 6000).map_err(TestCaseError::fail)?;
        check_rcs_modes(&run).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn intersections_match_brute_force(seed in any::<u64>(), users in 1usize..9, arms in 1usize..7) {
        check_intersection(seed, users, arms).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn noiseless_c_sets_are_the_true_clusters() {
    let mut reached = 0;
    for seed in 0..10 {
        let inst = generate_rcs_instance(24, 16, 3, 0.01, GAUSS, seed).unwrap();
        let run = run_lattice_rcs(&inst, &RcsConfig::new(small_lattice(3, 0.0), 0.01), 20000, seed).unwrap();
        if let Some(r) = run.trace.records.iter().find(|r| r.user_sets.len() == 3 && r.complete) {
            reached += 1;
            assert_eq!(r.user_sets, inst.clusters(), "seed {seed} phase {}", r.phase);
        }
        if let Some(r) = run.trace.records.iter().find(|r| r.mode == Mode::Clusterwise) {
            assert_eq!(r.user_sets, inst.clusters(), "seed {seed}");
        }
    }
    assert!(reached >= 8, "only {reached}/10 runs reached C sets");
}

#[test]
fn final_per_round_regret_is_within_two_nu_c() {
    let (nu, c) = (0.02, 3);
    let mut ok = 0;
    for seed in 0..10 {
        let inst = generate_rcs_instance(60, 40, c, nu, GAUSS, seed).unwrap().with_noise(NoiseModel::gaussian(0.3));
        let run = run_lattice_rcs(&inst, &RcsConfig::new(small_lattice(c, 0.3), nu), 40000, seed).unwrap();
        let tail = &run.history.records()[39000..];
        let per_round = tail.iter().map(|r| r.regret).sum::<f64>() / tail.len() as f64;
        if per_round <= 2.0 * nu * c as f64 {
            ok += 1;
        }
    }
    assert!(ok >= 8, "{ok}/10 runs within 2 nu C per round");
}
