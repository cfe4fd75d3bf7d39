use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::completion::{derive_oracle_params, LowRankEstimator, OracleConstants, SolverSettings};
use crate::env::{Environment, Instance, RunHistory};
use crate::error::{Error, Result};
use crate::linalg::argmax;
use crate::rng::{self, ORACLE_BASE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EtcConfig {
    pub explore_fraction: f64,
    pub clusters: usize,
    pub sigma: f64,
    pub mu: f64,
    /// Target error handed to the oracle.
    pub zeta: f64,
    pub oracle: OracleConstants,
    pub solver: SolverSettings,
    /// Lower the sampling probability so that all repetitions fit in the
    /// exploration budget.
    pub fit_budget: bool,
}

impl Default for EtcConfig {
    fn default() -> Self {
        EtcConfig {
            explore_fraction: 0.1,
            clusters: 1,
            sigma: 0.0,
            mu: 1.0,
            zeta: 0.1,
            oracle: OracleConstants::default(),
            solver: SolverSettings::default(),
            fit_budget: true,
        }
    }
}

/// Explores for `explore_fraction * horizon` rounds feeding one full-matrix
/// oracle, then plays each user's estimated best arm. If no repetition has
/// finished at the commit point, the running one is solved on the entries
/// observed so far.
pub fn run_explore_then_commit(instance: &Instance, horizon: u64, config: &EtcConfig, seed: u64) -> Result<RunHistory> {
    if !(config.explore_fraction > 0.0 && config.explore_fraction < 1.0) {
        return Err(Error::config("explore_fraction", "must lie in (0, 1)"));
    }
    let (n, m) = (instance.num_users(), instance.num_arms());
    let budget = (config.explore_fraction * horizon as f64).floor() as u64;
    let mut params = derive_oracle_params(n, m, config.clusters, config.mu, config.sigma, config.zeta, horizon, &config.oracle);
    if config.fit_budget {
        // Leave slack for users that arrive less often than average.
        let per_rep = 0.5 * budget as f64 / params.f as f64;
        params.p = params.p.min(per_rep / (n * m) as f64 / params.b as f64).max(f64::MIN_POSITIVE);
    }
    let mut oracle = LowRankEstimator::new((0..n).collect(), (0..m).collect(), params, config.solver, seed, ORACLE_BASE);
    let mut policy = rng::stream(seed, rng::POLICY);
    let mut env = Environment::new(instance, horizon, seed);

    while env.round() < budget && !env.is_done() {
        let mut pull = None;
        let step = env.step(|u| match oracle.serve(u) {
            Some(p) => {
                pull = Some(p);
                p.arm
            }
            None => policy.gen_range(0..m),
        })?;
        if let Some(p) = pull {
            oracle.record(&p, step.reward);
        }
    }
    if env.is_done() {
        return Ok(env.into_history());
    }
    if oracle.completed_repetitions() == 0 {
        oracle.finish_partial();
    }
    let estimate = oracle.estimate()?;
    let choice: Vec<usize> = (0..n).map(|u| argmax(&estimate.row(u))).collect();
    while !env.is_done() {
        env.step(|u| choice[u])?;
    }
    Ok(env.into_history())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{generate_cs_instance, RowDistribution};

    #[test]
    fn noiseless_commit_is_regret_free() {
        let inst = generate_cs_instance(10, 10, 2, RowDistribution::Gaussian { mean: 0.0, std: 1.0 }, 4).unwrap();
        let cfg = EtcConfig {
            explore_fraction: 0.5,
            clusters: 2,
            oracle: OracleConstants {
                f_cap: 1,
                ..Default::default()
            },
            ..Default::default()
        };
        let h = run_explore_then_commit(&inst, 2000, &cfg, 1).unwrap();
        let committed = h.regret_between(1000, 2000);
        assert!(committed < 1e-9, "commit regret {committed}");
    }

    #[test]
    fn too_short_exploration_is_insufficient() {
        let inst = generate_cs_instance(10, 10, 2, RowDistribution::Gaussian { mean: 0.0, std: 1.0 }, 4).unwrap();
        let cfg = EtcConfig {
            explore_fraction: 0.001,
            fit_budget: false,
            ..Default::default()
        };
        assert!(matches!(run_explore_then_commit(&inst, 500, &cfg, 0), Err(Error::InsufficientBudget(_))));
    }
}
