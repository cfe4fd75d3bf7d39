use serde::{Deserialize, Serialize};

use crate::completion::{OracleConstants, SolverSettings};
use crate::error::{Error, Result};

/// Scale of the accuracy schedule `Delta_{l+1} = C' 2^{-l}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CPrime {
    Fixed { value: f64 },
    /// `c / C * min(||P||_inf, sigma sqrt(mu) / log M)`, with `||P||_inf`
    /// replaced by the largest averaged observation of phase 1.
    Auto { c: f64 },
}

impl Default for CPrime {
    fn default() -> Self {
        CPrime::Auto { c: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatticeConfig {
    pub clusters: usize,
    /// Sets with at least `gamma * clusters` arms get an oracle. `None`
    /// means `max(1, ceil(ln M / clusters))`.
    pub gamma: Option<f64>,
    pub c_prime: CPrime,
    /// Noise level known to the algorithm.
    pub sigma: f64,
    /// Incoherence known to the algorithm.
    pub mu: f64,
    pub oracle: OracleConstants,
    pub solver: SolverSettings,
    /// When less than this fraction of the horizon remains at a phase
    /// start, sets act greedily on their latest estimate.
    pub greedy_tail: f64,
    /// Record oracle errors against the true rewards in the phase trace.
    pub track_oracle_error: bool,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            clusters: 1,
            gamma: None,
            c_prime: CPrime::default(),
            sigma: 0.0,
            mu: 1.0,
            oracle: OracleConstants::default(),
            solver: SolverSettings::default(),
            greedy_tail: 0.01,
            track_oracle_error: false,
        }
    }
}

impl LatticeConfig {
    pub fn new(clusters: usize, sigma: f64) -> Self {
        LatticeConfig {
            clusters,
            sigma,
            ..Default::default()
        }
    }

    /// Constants tuned for instances of a few hundred users and arms with
    /// rewards of order one: `C' = 1`, one repetition per oracle, and a
    /// denser mask with fewer passes than the defaults.
    pub fn desk_scale(clusters: usize, sigma: f64) -> Self {
        LatticeConfig {
            c_prime: CPrime::Fixed { value: 1.0 },
            oracle: OracleConstants {
                c_p: 1.0,
                f_cap: 1,
                c_b: 0.3,
                ..Default::default()
            },
            ..LatticeConfig::new(clusters, sigma)
        }
    }

    pub fn gamma_for(&self, num_arms: usize) -> f64 {
        self.gamma.unwrap_or_else(|| {
            let g = (num_arms.max(1) as f64).ln() / self.clusters.max(1) as f64;
            g.ceil().max(1.0)
        })
    }

    /// Arm count at or above which a set runs the oracle.
    pub fn arm_threshold(&self, num_arms: usize) -> f64 {
        self.gamma_for(num_arms) * self.clusters as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.clusters == 0 {
            return Err(Error::config("clusters", "must be at least 1"));
        }
        if let Some(g) = self.gamma {
            if !(g >= 1.0) {
                return Err(Error::config("gamma", "must be at least 1"));
            }
        }
        match self.c_prime {
            CPrime::Fixed { value } if !(value > 0.0) => {
                return Err(Error::config("c_prime", "fixed value must be positive"))
            }
            CPrime::Auto { c } if !(c > 0.0) => return Err(Error::config("c_prime", "c must be positive")),
            _ => {}
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::config("sigma", "must be nonnegative"));
        }
        if !(self.mu >= 1.0) {
            return Err(Error::config("mu", "must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.greedy_tail) {
            return Err(Error::config("greedy_tail", "must lie in [0, 1)"));
        }
        let o = &self.oracle;
        if !(o.c_p > 0.0 && o.c_b > 0.0 && o.c_lambda > 0.0) || o.f_cap == 0 || o.b_cap == 0 {
            return Err(Error::config("oracle", "constants must be positive"));
        }
        if !(self.solver.tol > 0.0) || self.solver.max_iters == 0 {
            return Err(Error::config("solver", "tol and max_iters must be positive"));
        }
        Ok(())
    }
}
