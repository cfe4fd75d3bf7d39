mod common;

use common::*;
use latent_bandits::checker::truncated_svd;
use latent_bandits::env::{generate_cs_instance, generate_rcs_instance};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn nice_submatrices_obey_lemma_bounds(
        n in 8usize..60,
        m in 8usize..60,
        c in 2usize..5,
        seed in any::<u64>(),
    ) {
        prop_assume!(c <= n && c <= m);
        let inst = generate_cs_instance(n, m, c, GAUSS, seed % 1009).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed as usize) % c;
        let clusters: Vec<usize> = sample(&mut rng, c, k).into_vec();
        let size = c + (seed as usize / 7) % (m - c + 1);
        let mut arms = sample(&mut rng, m, size).into_vec();
        arms.sort_unstable();
        check_nice_bounds(&inst, &clusters, &arms, seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn rcs_nice_submatrices_obey_kappa_and_u_bounds(seed in any::<u64>()) {
        let inst = generate_rcs_instance(30, 20, 3, 0.0, GAUSS, seed % 1013).unwrap();
        let arms: Vec<usize> = (0..20).collect();
        check_nice_bounds(&inst, &[0, 2], &arms, seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn alpha_is_monotone_in_subset_count(m in 20usize..200, c in 2usize..5, seed in any::<u64>()) {
        let inst = generate_cs_instance(c, m, c, GAUSS, seed % 1019).unwrap();
        let (_, _, v) = truncated_svd(inst.cluster_rows(), 1e-9).unwrap();
        let gamma = 16.0 * (m as f64).ln() / c as f64;
        check_alpha_nested(&v, gamma.min(m as f64 / c as f64), c, seed, &[1, 2, 5, 10, 40]).map_err(TestCaseError::fail)?;
    }
}
