//! Spectral diagnostics of an instance and of one of its nice submatrices.
//!
//! ```bash
//! cargo run --release --example assumption_check
//! ```

use latent_bandits::checker::{check_instance, check_nice_submatrix, CheckerConfig};
use latent_bandits::env::{generate_cs_instance, generate_rcs_instance, RowDistribution};

fn main() -> latent_bandits::Result<()> {
    let gauss = RowDistribution::Gaussian { mean: 0.0, std: 1.0 };

    let cs = generate_cs_instance(40, 500, 4, gauss, 1)?;
    let report = check_instance(&cs, &CheckerConfig::default(), 1)?;
    print!("{report}");

    let arms: Vec<usize> = (0..500).step_by(3).collect();
    let all: Vec<usize> = (0..500).collect();
    let full = check_nice_submatrix(&cs, &[0, 3], &all, &report, 1e-9)?;
    let sub = check_nice_submatrix(&cs, &[0, 3], &arms, &report, 1e-9)?;
    println!("clusters {{0, 3}}, all arms: kappa {:.4} <= {:.4}", full.kappa, full.kappa_bound);
    println!(
        "clusters {{0, 3}}, every third arm: ||U||_2inf {:.4} <= {:.4}, ||V||_2inf {:.4} <= {:.4}",
        sub.u_norm, sub.u_bound, sub.v_norm, sub.v_bound
    );

    // With nu > 0 the per-cluster blocks of U are regular and beta is reported.
    let rcs = generate_rcs_instance(30, 20, 3, 0.1, gauss, 2)?;
    let r = check_instance(&rcs, &CheckerConfig::default(), 2)?;
    println!("rcs beta_hat {:?}", r.beta_hat);
    Ok(())
}
