//! The completion oracle on its own: derive parameters for a submatrix,
//! collect masked observations from the simulator and compare the median
//! estimate with the truth. Also calls the nuclear-norm solver directly.
//!
//! ```bash
//! cargo run --release --example matrix_completion
//! ```

use latent_bandits::completion::{
    derive_oracle_params, low_rank_matrix_estimate, solve_nuclear_norm, OracleConstants, SolverSettings,
};
use latent_bandits::env::{generate_cs_instance, Environment, NoiseModel, RowDistribution};
use latent_bandits::linalg::max_abs;
use latent_bandits::rng::ORACLE_BASE;
use rand::{Rng, SeedableRng};

fn main() -> latent_bandits::Result<()> {
    let gauss = RowDistribution::Gaussian { mean: 0.0, std: 1.0 };
    let inst = generate_cs_instance(80, 60, 2, gauss, 4)?.with_noise(NoiseModel::gaussian(0.5));
    let rows: Vec<usize> = (0..80).collect();
    let cols: Vec<usize> = (0..60).collect();

    let constants = OracleConstants { f_cap: 3, ..Default::default() };
    let params = derive_oracle_params(80, 60, 2, 1.0, 0.5, 0.1, 1_000_000, &constants);
    println!("oracle parameters: {params:?}");

    let mut env = Environment::new(&inst, 10_000_000, 1);
    let est = low_rank_matrix_estimate(&mut env, &rows, &cols, &params, &SolverSettings::default(), u64::MAX, 1, ORACLE_BASE)?;
    let err = max_abs(&(&est.values - inst.rewards()));
    println!(
        "{} repetitions over {} rounds, max entrywise error {err:.3} (claimed {:.3})",
        est.repetitions, est.rounds_used, est.claimed_error
    );

    // Direct solve on 60% of the entries of the noiseless matrix.
    let truth = inst.rewards();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let observed: Vec<(usize, usize, f64)> = (0..80)
        .flat_map(|i| (0..60).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.6))
        .map(|(i, j)| (i, j, truth[(i, j)]))
        .collect();
    let out = solve_nuclear_norm(&observed, (80, 60), 1e-3, &SolverSettings { tol: 1e-9, max_iters: 2000 });
    println!(
        "solver: {} iterations, objective {:.3e}, max error {:.2e}",
        out.iterations,
        out.final_objective(),
        max_abs(&(&out.matrix - truth))
    );
    Ok(())
}
