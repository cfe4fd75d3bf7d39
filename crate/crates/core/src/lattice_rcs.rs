//! LATTICE for the relaxed cluster structure.
//!
//! Users in one cluster share a best arm and have rows within `nu` of each
//! other. Joint refinement (graph components, edge slack `3 delta`) runs
//! while `delta >= 2 nu` and fewer than `C` sets exist. From then on the
//! partition is frozen and each set keeps only the arms every member
//! considers good.

use serde::{Deserialize, Serialize};

use crate::env::Instance;
use crate::error::{Error, Result};
use crate::lattice::{run_engine, GoodArmSet, LatticeConfig, LatticeRun, Refinement};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RcsConfig {
    #[serde(flatten)]
    pub base: LatticeConfig,
    pub nu: f64,
    pub edge_slack_multiplier: f64,
}

impl Default for RcsConfig {
    fn default() -> Self {
        RcsConfig {
            base: LatticeConfig::default(),
            nu: 0.0,
            edge_slack_multiplier: 3.0,
        }
    }
}

impl RcsConfig {
    pub fn new(base: LatticeConfig, nu: f64) -> Self {
        RcsConfig {
            base,
            nu,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.nu >= 0.0) {
            return Err(Error::config("nu", "must be nonnegative"));
        }
        if !(self.edge_slack_multiplier > 0.0) {
            return Err(Error::config("edge_slack_multiplier", "must be positive"));
        }
        Ok(())
    }
}

/// Intersection of the good-arm sets, sorted. Falls back to the union when
/// the intersection is empty; the flag reports the fallback.
pub fn intersect_active_arms(good: &[GoodArmSet]) -> (Vec<usize>, bool) {
    assert!(!good.is_empty(), "empty user set");
    let mut common: Vec<usize> = good[0].arms.clone();
    for g in &good[1..] {
        common.retain(|a| g.arms.contains(a));
    }
    common.sort_unstable();
    if !common.is_empty() {
        return (common, false);
    }
    let mut union: Vec<usize> = good.iter().flat_map(|g| g.arms.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    (union, true)
}

pub fn run_lattice_rcs(instance: &Instance, config: &RcsConfig, horizon: u64, seed: u64) -> Result<LatticeRun> {
    config.validate()?;
    let refinement = Refinement::Rcs {
        nu: config.nu,
        edge_slack: config.edge_slack_multiplier,
    };
    run_engine(instance, &config.base, refinement, horizon, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(arms: &[usize]) -> GoodArmSet {
        GoodArmSet {
            user: 0,
            arms: arms.to_vec(),
        }
    }

    #[test]
    fn identical_sets() {
        assert_eq!(intersect_active_arms(&[gs(&[2, 5]), gs(&[2, 5])]), (vec![2, 5], false));
    }

    #[test]
    fn common_arm() {
        assert_eq!(intersect_active_arms(&[gs(&[0, 1]), gs(&[1, 2]), gs(&[1, 3])]), (vec![1], false));
    }

    #[test]
    fn disjoint_sets_fall_back_to_union() {
        assert_eq!(intersect_active_arms(&[gs(&[0]), gs(&[1])]), (vec![0, 1], true));
    }
}
