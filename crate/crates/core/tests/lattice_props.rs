mod common;

use common::*;
use latent_bandits::env::{generate_cs_instance, NoiseModel};
use latent_bandits::lattice::run_lattice;
use proptest::prelude::*;

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn phases_partition_users_and_account_for_every_round(
        n in 4usize..24,
        m in 4usize..16,
        c in 1usize..4,
        sigma in 0.0f64..0.6,
        horizon in 200u64..3000,
        seed in any::<u64>(),
    ) {
        prop_assume!(c <= n && c <= m);
        let inst = generate_cs_instance(n, m, c, GAUSS, seed % 997).unwrap().with_noise(NoiseModel::gaussian(sigma));
        let run = run_lattice(&inst, &small_lattice(c, sigma), horizon, seed).unwrap();
        check_trace_partitions(&run.trace, n).map_err(TestCaseError::fail)?;
        check_round_accounting(&run, horizon).map_err(TestCaseError::fail)?;
        check_regret_ledger(&run.history, horizon).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn noiseless_set_quality_never_worsens(n in 4usize..24, m in 4usize..16, c in 1usize..4, seed in any::<u64>()) {
        prop_assume!(c <= n && c <= m);
        let inst = generate_cs_instance(n, m, c, GAUSS, seed % 997).unwrap();
        let run = run_lattice(&inst, &small_lattice(c, 0.0), 4000, seed).unwrap();
        check_set_quality_monotone(&run, &inst).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn lattice_is_deterministic(seed in any::<u64>()) {
        let inst = generate_cs_instance(10, 8, 2, GAUSS, 3).unwrap().with_noise(NoiseModel::gaussian(0.3));
        let a = run_lattice(&inst, &small_lattice(2, 0.3), 1500, seed).unwrap();
        let b = run_lattice(&inst, &small_lattice(2, 0.3), 1500, seed).unwrap();
        prop_assert_eq!(a.history, b.history);
        prop_assert_eq!(a.trace, b.trace);
    }
}

proptest! {
    #![proptest_config(cases(256))]

    #[test]
    fn good_arms_and_components_match_brute_force(
        seed in any::<u64>(),
        users in 1usize..9,
        arms in 1usize..7,
        slack in prop::sample::select(vec![1.0, 2.0, 3.0, 4.0]),
    ) {
        check_good_arms_and_graph(seed, users, arms, slack).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn ucb_index_matches_formula(
        seed in any::<u64>(),
        arms in 1usize..6,
        steps in 0usize..60,
        sigma in 0.0f64..2.0,
        horizon in 1u64..100_000,
    ) {
        check_ucb_index(seed, arms, steps, sigma, horizon).map_err(TestCaseError::fail)?;
    }
}
