use rand::Rng;
use serde::{Deserialize, Serialize};

use super::kmeans_elbow;
use crate::completion::{solve_nuclear_norm, SolverSettings};
use crate::env::{Environment, Instance, RunHistory};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, Matrix};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PhaseLengths {
    /// `first + step * (l - 1)` for phase `l`, repeated until the horizon.
    Linear { first: u64, step: u64 },
    /// Explicit lengths; rounds past their sum continue the last phase's
    /// sets without further updates.
    Explicit { lengths: Vec<u64> },
}

impl PhaseLengths {
    pub fn schedule(&self, horizon: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut used = 0u64;
        match self {
            PhaseLengths::Linear { first, step } => {
                let mut l = 0u64;
                while used < horizon {
                    let len = (first + step * l).max(1).min(horizon - used);
                    out.push(len);
                    used += len;
                    l += 1;
                }
            }
            PhaseLengths::Explicit { lengths } => {
                for &len in lengths {
                    out.push(len);
                    used += len;
                }
                if used < horizon {
                    out.push(horizon - used);
                }
            }
        }
        out
    }
}

/// Source of the reward scale in the gap schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GapScale {
    /// Largest absolute true reward, read from the instance.
    GroundTruth,
    /// Largest absolute per-entry mean observed so far.
    Observed,
    Fixed { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimplifiedConfig {
    pub clusters: usize,
    pub phase_lengths: PhaseLengths,
    /// `nu_l = scale / (gap_divisor * gap_base^l)`.
    pub gap_scale: GapScale,
    pub gap_divisor: f64,
    pub gap_base: f64,
    /// `lambda = lambda_scale * sqrt(phase_length / lambda_length)`.
    pub lambda_scale: f64,
    pub lambda_length: f64,
    /// Phases that may split user sets.
    pub clustering_phases: usize,
    /// Fraction of users that must approve an arm after the clustering phases.
    pub rho: f64,
    pub elbow_ratio: f64,
    pub objective_floor: f64,
    pub solver: SolverSettings,
}

impl Default for SimplifiedConfig {
    fn default() -> Self {
        SimplifiedConfig {
            clusters: 1,
            phase_lengths: PhaseLengths::Linear { first: 1500, step: 500 },
            gap_scale: GapScale::GroundTruth,
            gap_divisor: 6.0,
            gap_base: 8.0,
            lambda_scale: 5.0,
            lambda_length: 200.0,
            clustering_phases: 5,
            rho: 0.5,
            elbow_ratio: 0.6,
            objective_floor: 100.0,
            solver: SolverSettings::default(),
        }
    }
}

impl SimplifiedConfig {
    pub fn validate(&self, horizon: u64) -> Result<()> {
        if self.clusters == 0 {
            return Err(Error::config("clusters", "must be at least 1"));
        }
        if let PhaseLengths::Explicit { lengths } = &self.phase_lengths {
            if lengths.contains(&0) {
                return Err(Error::config("phase_lengths", "lengths must be positive"));
            }
            if lengths.iter().sum::<u64>() > horizon {
                return Err(Error::config("phase_lengths", "lengths exceed the horizon"));
            }
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::config("rho", "must lie in [0, 1]"));
        }
        if !(self.gap_divisor > 0.0 && self.gap_base > 0.0) {
            return Err(Error::config("gap", "divisor and base must be positive"));
        }
        if !(self.lambda_scale >= 0.0 && self.lambda_length > 0.0) {
            return Err(Error::config("lambda", "scale must be nonnegative and length positive"));
        }
        Ok(())
    }

    pub fn gap(&self, scale: f64, phase: usize) -> f64 {
        scale / (self.gap_divisor * self.gap_base.powi(phase as i32))
    }

    pub fn lambda(&self, length: u64) -> f64 {
        self.lambda_scale * (length as f64 / self.lambda_length).sqrt()
    }
}

/// Sets at the end of one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedPhase {
    pub phase: usize,
    pub length: u64,
    pub nu: f64,
    pub lambda: f64,
    pub user_sets: Vec<Vec<usize>>,
    pub arm_sets: Vec<Vec<usize>>,
    /// Sets whose robust rule approved no arm and kept the most approved ones.
    pub fallbacks: usize,
}

#[derive(Debug, Clone)]
pub struct SimplifiedRun {
    pub history: RunHistory,
    pub phases: Vec<SimplifiedPhase>,
    pub gap_scale: GapScale,
}

/// Arms within `nu` of the row maximum for at least one row of `est`
/// (columns aligned with `arms`).
pub fn union_active_arms(est: &Matrix, rows: &[usize], arms: &[usize], nu: f64) -> Vec<usize> {
    (0..arms.len())
        .filter(|&k| {
            rows.iter().any(|&i| {
                let best = est.row(i).max();
                best - est[(i, k)] <= nu
            })
        })
        .map(|k| arms[k])
        .collect()
}

/// Arms within `nu` of the row maximum for at least a `rho` fraction of
/// rows. If none qualifies the most approved arms are kept and the flag is
/// set.
pub fn robust_active_arms(est: &Matrix, arms: &[usize], nu: f64, rho: f64) -> (Vec<usize>, bool) {
    let n = est.nrows();
    let approvals: Vec<usize> = (0..arms.len())
        .map(|k| (0..n).filter(|&i| est.row(i).max() - est[(i, k)] <= nu).count())
        .collect();
    let kept: Vec<usize> = (0..arms.len())
        .filter(|&k| approvals[k] as f64 >= rho * n as f64)
        .map(|k| arms[k])
        .collect();
    if !kept.is_empty() {
        return (kept, false);
    }
    let top = approvals.iter().copied().max().unwrap_or(0);
    ((0..arms.len()).filter(|&k| approvals[k] == top).map(|k| arms[k]).collect(), true)
}

struct PhaseData {
    sums: Matrix,
    counts: Matrix,
}

/// Random pulls within active sets, one nuclear-norm solve per set at each
/// phase end, k-means splits during the first `clustering_phases` phases and
/// robust arm elimination afterwards.
pub fn run_simplified_lattice(instance: &Instance, config: &SimplifiedConfig, horizon: u64, seed: u64) -> Result<SimplifiedRun> {
    config.validate(horizon)?;
    let (n, m) = (instance.num_users(), instance.num_arms());
    let mut env = Environment::new(instance, horizon, seed);
    let mut policy = rng::stream(seed, rng::POLICY);
    let schedule = config.phase_lengths.schedule(horizon);
    let truth_scale = max_abs(instance.rewards());
    let mut observed_scale: f64 = 0.0;

    let mut sets: Vec<(Vec<usize>, Vec<usize>)> = vec![((0..n).collect(), (0..m).collect())];
    let mut set_of = vec![0usize; n];
    let mut phases = Vec::new();

    for (idx, &length) in schedule.iter().enumerate() {
        let phase = idx + 1;
        let mut data = PhaseData {
            sums: Matrix::zeros(n, m),
            counts: Matrix::zeros(n, m),
        };
        for _ in 0..length {
            let mut pulled = (0, 0);
            let step = env.step(|u| {
                let arms = &sets[set_of[u]].1;
                let a = arms[policy.gen_range(0..arms.len())];
                pulled = (u, a);
                a
            })?;
            data.sums[pulled] += step.reward;
            data.counts[pulled] += 1.0;
        }
        if env.is_done() && idx + 1 == schedule.len() {
            break;
        }

        for (s, c) in data.sums.iter().zip(data.counts.iter()) {
            if *c > 0.0 {
                observed_scale = observed_scale.max((s / c).abs());
            }
        }
        let scale = match config.gap_scale {
            GapScale::GroundTruth => truth_scale,
            GapScale::Observed => observed_scale,
            GapScale::Fixed { value } => value,
        };
        let nu = config.gap(scale, phase);
        let lambda = config.lambda(length);
        let mut fallbacks = 0;
        let mut next = Vec::with_capacity(sets.len());
        for (set_idx, (users, arms)) in sets.into_iter().enumerate() {
            let mut observed = Vec::new();
            for (i, &u) in users.iter().enumerate() {
                for (k, &a) in arms.iter().enumerate() {
                    let c = data.counts[(u, a)];
                    if c > 0.0 {
                        observed.push((i, k, data.sums[(u, a)] / c));
                    }
                }
            }
            if observed.is_empty() {
                next.push((users, arms));
                continue;
            }
            let est = solve_nuclear_norm(&observed, (users.len(), arms.len()), lambda, &config.solver).matrix;
            if phase <= config.clustering_phases {
                let rows: Vec<Vec<f64>> = (0..users.len()).map(|i| est.row(i).iter().copied().collect()).collect();
                let kseed = seed ^ ((phase as u64) << 40) ^ ((set_idx as u64) << 20);
                let elbow = kmeans_elbow(&rows, config.clusters, config.elbow_ratio, config.objective_floor, kseed);
                for label in 0..elbow.k {
                    let members: Vec<usize> = (0..users.len()).filter(|&i| elbow.labels[i] == label).collect();
                    if members.is_empty() {
                        continue;
                    }
                    let group_arms = union_active_arms(&est, &members, &arms, nu);
                    next.push((members.iter().map(|&i| users[i]).collect(), group_arms));
                }
            } else {
                let (kept, fell_back) = robust_active_arms(&est, &arms, nu, config.rho);
                fallbacks += usize::from(fell_back);
                next.push((users, kept));
            }
        }
        sets = next;
        for (k, (users, _)) in sets.iter().enumerate() {
            for &u in users {
                set_of[u] = k;
            }
        }
        phases.push(SimplifiedPhase {
            phase,
            length,
            nu,
            lambda,
            user_sets: sets.iter().map(|s| s.0.clone()).collect(),
            arm_sets: sets.iter().map(|s| s.1.clone()).collect(),
            fallbacks,
        });
    }

    Ok(SimplifiedRun {
        history: env.into_history(),
        phases,
        gap_scale: config.gap_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_schedule_fills_the_horizon() {
        let s = PhaseLengths::Linear { first: 1500, step: 500 }.schedule(6000);
        assert_eq!(s, vec![1500, 2000, 2500]);
        let s = PhaseLengths::Linear { first: 1500, step: 500 }.schedule(5000);
        assert_eq!(s, vec![1500, 2000, 1500]);
    }

    #[test]
    fn paper_defaults() {
        let c = SimplifiedConfig::default();
        assert!((c.lambda(1500) - 5.0 * 7.5f64.sqrt()).abs() < 1e-12);
        assert!((c.gap(3.0, 1) - 3.0 / 48.0).abs() < 1e-15);
        assert_eq!(c.clustering_phases, 5);
    }

    #[test]
    fn robust_rule_is_monotone_in_rho() {
        let est = Matrix::from_row_slice(3, 3, &[1.0, 0.95, 0.0, 0.9, 1.0, 0.0, 1.0, 0.0, 0.99]);
        let arms = [0, 1, 2];
        let (strict, _) = robust_active_arms(&est, &arms, 0.06, 1.0);
        let (loose, _) = robust_active_arms(&est, &arms, 0.06, 0.5);
        assert_eq!(loose, vec![0, 1]);
        assert!(strict.iter().all(|a| loose.contains(a)));
    }

    #[test]
    fn union_rule_keeps_each_members_best() {
        let est = Matrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(union_active_arms(&est, &[0, 1], &[4, 5, 6], 0.1), vec![4, 6]);
        assert_eq!(union_active_arms(&est, &[1], &[4, 5, 6], 0.1), vec![6]);
    }
}
