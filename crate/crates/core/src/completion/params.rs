use serde::{Deserialize, Serialize};

/// Tuning constants of the oracle. The defaults are desk-scale choices;
/// the asymptotic analysis only fixes them up to unknown factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConstants {
    /// Multiplier of the sampling probability.
    pub c_p: f64,
    /// Multiplier inside the variance-reduction factor.
    pub c_b: f64,
    /// Multiplier of the nuclear-norm regularizer.
    pub c_lambda: f64,
    /// Upper bound on the number of median repetitions.
    pub f_cap: usize,
    /// Lower bound on the regularizer, so noiseless data still gets a
    /// low-rank fill of unobserved entries.
    pub lambda_min: f64,
    /// Upper bound on the variance-reduction factor.
    pub b_cap: u64,
}

impl Default for OracleConstants {
    fn default() -> Self {
        OracleConstants {
            c_p: 1.0,
            c_b: 1.0,
            c_lambda: 2.5,
            f_cap: 15,
            lambda_min: 1e-3,
            b_cap: 1 << 20,
        }
    }
}

/// Parameters of one oracle invocation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleParams {
    /// Bernoulli sampling probability of each entry.
    pub p: f64,
    /// Observations averaged per masked entry.
    pub b: u64,
    /// Independent repetitions combined by the entrywise median.
    pub f: usize,
    pub lambda: f64,
    pub rank: usize,
    pub mu: f64,
    pub sigma: f64,
    /// Target entrywise error.
    pub zeta: f64,
}

fn log_dim(d: usize) -> f64 {
    (d.max(2) as f64).ln()
}

/// Sampling probability, repetition counts and regularizer for a
/// `u_size x v_size` submatrix of rank at most `rank`.
///
/// With `d = min(u_size, v_size)`:
/// `p = min(1, c_p mu^2 log^3 d / d)`,
/// `b = max(1, ceil((c_b sigma rank sqrt(mu) / (zeta log d))^2))`,
/// `f = max(1, ceil(log(u_size v_size horizon)))` capped at `f_cap`, and
/// `lambda = c_lambda (sigma / sqrt b) sqrt(d p)` since the solver sees
/// `b`-averaged entries.
#[allow(clippy::too_many_arguments)]
pub fn derive_oracle_params(
    u_size: usize,
    v_size: usize,
    rank: usize,
    mu: f64,
    sigma: f64,
    zeta: f64,
    horizon: u64,
    constants: &OracleConstants,
) -> OracleParams {
    debug_assert!(u_size > 0 && v_size > 0 && rank > 0);
    let d = u_size.min(v_size);
    let ld = log_dim(d);
    let p = (constants.c_p * mu * mu * ld.powi(3) / d as f64).min(1.0);

    let b = if sigma == 0.0 {
        1
    } else {
        let root = constants.c_b * sigma * rank as f64 * mu.sqrt() / (zeta * ld);
        let b = (root * root).ceil();
        if b.is_finite() {
            (b as u64).clamp(1, constants.b_cap.max(1))
        } else {
            constants.b_cap.max(1)
        }
    };

    let volume = (u_size as f64) * (v_size as f64) * (horizon.max(1) as f64);
    let f = (volume.ln().ceil().max(1.0) as usize).min(constants.f_cap.max(1));

    let lambda = (constants.c_lambda * (sigma / (b as f64).sqrt()) * (d as f64 * p).sqrt()).max(constants.lambda_min);

    OracleParams {
        p,
        b,
        f,
        lambda,
        rank,
        mu,
        sigma,
        zeta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_needs_single_pass() {
        let p = derive_oracle_params(100, 100, 2, 1.0, 0.0, 0.1, 1000, &OracleConstants::default());
        assert_eq!(p.b, 1);
    }

    #[test]
    fn variance_factor_matches_formula() {
        let p = derive_oracle_params(50, 200, 4, 2.0, 1.0, 0.05, 1000, &OracleConstants::default());
        // (1 * 1 * 4 * sqrt 2 / (0.05 ln 50))^2 = 836.40..., evaluated by hand.
        let root: f64 = 4.0 * 2f64.sqrt() / (0.05 * 50f64.ln());
        assert_eq!(p.b, (root * root).ceil() as u64);
        assert_eq!(p.b, 837);
        assert!((p.p - (4.0 * 50f64.ln().powi(3) / 50.0).min(1.0)).abs() < 1e-15);
    }

    #[test]
    fn sampling_probability_is_capped() {
        let p = derive_oracle_params(20, 20, 2, 1.0, 0.5, 0.1, 100, &OracleConstants::default());
        assert_eq!(p.p, 1.0);
    }

    #[test]
    fn repetitions_follow_log_volume_with_cap() {
        let c = OracleConstants::default();
        let p = derive_oracle_params(10, 10, 1, 1.0, 1.0, 1.0, 10, &c);
        assert_eq!(p.f, (1000f64).ln().ceil() as usize);
        let p = derive_oracle_params(200, 200, 1, 1.0, 1.0, 1.0, 60_000, &c);
        assert_eq!(p.f, 15);
    }

    #[test]
    fn lambda_uses_effective_noise() {
        let c = OracleConstants::default();
        let p = derive_oracle_params(100, 100, 2, 1.0, 0.5, 0.01, 100, &OracleConstants { c_p: 0.1, ..c });
        let expected = 2.5 * (0.5 / (p.b as f64).sqrt()) * (100.0 * p.p).sqrt();
        assert!((p.lambda - expected).abs() < 1e-12);
    }
}
