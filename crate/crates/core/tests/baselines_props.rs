mod common;

use common::*;
use latent_bandits::baselines::{
    run_explore_then_commit, run_per_user_ucb, run_simplified_lattice, EtcConfig, PhaseLengths, SimplifiedConfig,
};
use latent_bandits::env::{generate_cs_instance, NoiseModel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn ucb_tries_every_arm_before_repeating(n in 1usize..10, m in 1usize..12, seed in any::<u64>()) {
        let c = 1.max(n.min(m) / 2);
        let inst = generate_cs_instance(n, m, c, GAUSS, seed % 101).unwrap().with_noise(NoiseModel::gaussian(0.5));
        let h = run_per_user_ucb(&inst, (n * m * 3) as u64, 0.5, seed).unwrap();
        check_ucb_round_robin(&h, n, m).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn simplified_partitions_only_split_early(
        clusters in 1usize..4,
        clustering_phases in 1usize..4,
        seed in any::<u64>(),
    ) {
        let inst = generate_cs_instance(16, 10, 2, GAUSS, seed % 103).unwrap().with_noise(NoiseModel::gaussian(0.3));
        let cfg = SimplifiedConfig {
            clusters,
            clustering_phases,
            phase_lengths: PhaseLengths::Linear { first: 300, step: 100 },
            lambda_scale: 1.0,
            ..Default::default()
        };
        let run = run_simplified_lattice(&inst, &cfg, 4000, seed).unwrap();
        check_regret_ledger(&run.history, 4000).map_err(TestCaseError::fail)?;
        check_simplified_phases(&run, 16, clustering_phases).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn etc_explores_obliviously(seed in any::<u64>(), fraction in 0.05f64..0.5) {
        let a = generate_cs_instance(12, 8, 2, GAUSS, 1).unwrap().with_noise(NoiseModel::gaussian(0.2));
        let b = generate_cs_instance(12, 8, 2, GAUSS, 2).unwrap().with_noise(NoiseModel::gaussian(0.2));
        let cfg = EtcConfig { explore_fraction: fraction, clusters: 2, sigma: 0.2, ..Default::default() };
        let horizon = 3000;
        let ha = run_explore_then_commit(&a, horizon, &cfg, seed).unwrap();
        let hb = run_explore_then_commit(&b, horizon, &cfg, seed).unwrap();
        let commit = (fraction * horizon as f64).floor() as usize;
        check_etc_oblivious(&ha, &hb, commit).map_err(TestCaseError::fail)?;
    }
}
