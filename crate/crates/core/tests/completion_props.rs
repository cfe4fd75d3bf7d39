mod common;

use common::*;
use latent_bandits::completion::{low_rank_matrix_estimate, OracleParams, SolverSettings};
use latent_bandits::env::{generate_cs_instance, Environment};
use latent_bandits::linalg::{max_abs, median};
use latent_bandits::rng::ORACLE_BASE;
use proptest::prelude::*;

proptest! {
    #![proptest_config(cases(40))]

    #[test]
    fn objective_never_increases(
        seed in any::<u64>(),
        rows in 2usize..14,
        cols in 2usize..14,
        rank in 1usize..3,
        p in 0.2f64..1.0,
        noise in 0.0f64..0.5,
        lambda in 0.001f64..3.0,
    ) {
        check_objective_monotone(seed, rows, cols, rank, p, noise, lambda).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn median_resists_a_minority(seed in any::<u64>(), half in 1usize..8, magnitude in 1.0f64..1e9) {
        let f = 2 * half + 1;
        for corrupt in 0..half + 1 {
            if 2 * corrupt < f {
                check_median_robust(seed, f, corrupt, magnitude).map_err(TestCaseError::fail)?;
            }
        }
    }
}

fn noiseless_error(p: f64, seed: u64) -> f64 {
    let inst = generate_cs_instance(40, 40, 2, GAUSS, seed).unwrap();
    let all: Vec<usize> = (0..40).collect();
    let params = OracleParams { p, b: 1, f: 1, lambda: 1e-3, rank: 2, mu: 1.0, sigma: 0.0, zeta: 0.01 };
    let mut env = Environment::new(&inst, u64::MAX / 2, seed);
    let est = low_rank_matrix_estimate(&mut env, &all, &all, &params, &SolverSettings::default(), u64::MAX, seed, ORACLE_BASE).unwrap();
    max_abs(&(&est.values - inst.rewards()))
}

#[test]
fn error_decays_with_sampling_probability() {
    let means: Vec<f64> = [0.3, 0.5, 0.8]
        .iter()
        .map(|&p| (0..10).map(|s| noiseless_error(p, s)).sum::<f64>() / 10.0)
        .collect();
    let inversions: Vec<usize> = (0..2).filter(|&i| means[i + 1] > means[i]).collect();
    assert!(inversions.len() <= 1, "errors {means:?}");
    for i in inversions {
        assert!(means[i + 1] <= 1.1 * means[i], "errors {means:?}");
    }
}

#[test]
fn noiseless_errors_are_small_at_high_p() {
    let mut errs: Vec<f64> = (0..5).map(|s| noiseless_error(0.8, s)).collect();
    assert!(median(&mut errs) < 1e-2, "errors {errs:?}");
}
