use super::{NoiseModel, RCS_SEPARATION};
use crate::error::{Error, Result};
use crate::linalg::{argmax, Matrix};

/// Ground truth of a latent-cluster bandit problem.
///
/// `rewards` is the `N x M` matrix of expected rewards; `cluster_rows` holds
/// one reference row per cluster. With `nu == 0` every user row equals its
/// cluster row exactly; with `nu > 0` rows inside a cluster may differ by up
/// to `nu` entrywise but share the best arm.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    rewards: Matrix,
    cluster_of: Vec<usize>,
    cluster_rows: Matrix,
    nu: f64,
    noise: NoiseModel,
    best_arm: Vec<usize>,
    gaps: Matrix,
}

impl Instance {
    pub fn new(
        rewards: Matrix,
        cluster_of: Vec<usize>,
        cluster_rows: Matrix,
        nu: f64,
        noise: NoiseModel,
    ) -> Result<Self> {
        let (n, m) = rewards.shape();
        let c = cluster_rows.nrows();
        if n == 0 || m == 0 || c == 0 {
            return Err(Error::InvalidDimensions(format!("{n} users, {m} arms, {c} clusters")));
        }
        if cluster_rows.ncols() != m {
            return Err(Error::InvalidDimensions(format!(
                "cluster rows have {} arms, rewards have {m}",
                cluster_rows.ncols()
            )));
        }
        if cluster_of.len() != n {
            return Err(Error::InvalidDimensions(format!(
                "cluster map covers {} users, rewards have {n}",
                cluster_of.len()
            )));
        }
        if let Some(&bad) = cluster_of.iter().find(|&&k| k >= c) {
            return Err(Error::InvalidDimensions(format!("cluster index {bad} >= {c}")));
        }
        if !(nu >= 0.0) {
            return Err(Error::InvalidDimensions(format!("nu must be nonnegative, got {nu}")));
        }

        let best_arm = (0..n)
            .map(|u| argmax(rewards.row(u).iter().copied().collect::<Vec<_>>().as_slice()))
            .collect();
        let gaps = Matrix::from_fn(c, m, |k, a| {
            let row = cluster_rows.row(k);
            row.max() - row[a]
        });
        Ok(Instance {
            rewards,
            cluster_of,
            cluster_rows,
            nu,
            noise,
            best_arm,
            gaps,
        })
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn num_users(&self) -> usize {
        self.rewards.nrows()
    }

    pub fn num_arms(&self) -> usize {
        self.rewards.ncols()
    }

    pub fn num_clusters(&self) -> usize {
        self.cluster_rows.nrows()
    }

    pub fn rewards(&self) -> &Matrix {
        &self.rewards
    }

    pub fn reward(&self, user: usize, arm: usize) -> f64 {
        self.rewards[(user, arm)]
    }

    pub fn cluster_rows(&self) -> &Matrix {
        &self.cluster_rows
    }

    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn best_arm(&self, user: usize) -> usize {
        self.best_arm[user]
    }

    pub fn best_arms(&self) -> &[usize] {
        &self.best_arm
    }

    /// Suboptimality of `arm` for cluster `cluster`, measured on its reference row.
    pub fn gap(&self, cluster: usize, arm: usize) -> f64 {
        self.gaps[(cluster, arm)]
    }

    pub fn gaps(&self) -> &Matrix {
        &self.gaps
    }

    /// Instantaneous regret of `user` pulling `arm`.
    pub fn user_gap(&self, user: usize, arm: usize) -> f64 {
        self.rewards[(user, self.best_arm[user])] - self.rewards[(user, arm)]
    }

    /// Largest regret a single round can incur for `user`.
    pub fn max_gap(&self, user: usize) -> f64 {
        let row = self.rewards.row(user);
        row.max() - row.min()
    }

    /// Users of each cluster, in increasing order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_clusters()];
        for (u, &k) in self.cluster_of.iter().enumerate() {
            out[k].push(u);
        }
        out
    }

    /// Largest over smallest cluster size, ignoring empty clusters.
    pub fn cluster_size_ratio(&self) -> f64 {
        let sizes: Vec<usize> = self.clusters().iter().map(Vec::len).filter(|&s| s > 0).collect();
        let max = *sizes.iter().max().unwrap_or(&1) as f64;
        let min = *sizes.iter().min().unwrap_or(&1) as f64;
        max / min
    }

    /// Every violated structural property, as human-readable messages.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let (n, m) = self.rewards.shape();
        for u in 0..n {
            let row: Vec<f64> = self.rewards.row(u).iter().copied().collect();
            if argmax(&row) != self.best_arm[u] {
                violations.push(format!("user {u}: stored best arm is not the argmax"));
            }
        }
        if self.gaps.iter().any(|&g| g < 0.0) {
            violations.push("negative gap".to_string());
        }

        if self.nu == 0.0 {
            for u in 0..n {
                let k = self.cluster_of[u];
                if self.rewards.row(u) != self.cluster_rows.row(k) {
                    violations.push(format!("user {u}: row differs from cluster {k} row"));
                }
            }
            return violations;
        }

        let threshold = RCS_SEPARATION * self.nu;
        for u in 0..n {
            for v in (u + 1)..n {
                let (bu, bv) = (self.best_arm[u], self.best_arm[v]);
                if self.cluster_of[u] == self.cluster_of[v] {
                    if bu != bv {
                        violations.push(format!("users {u},{v}: same cluster, different best arms"));
                    }
                    let dist = (0..m)
                        .map(|a| (self.rewards[(u, a)] - self.rewards[(v, a)]).abs())
                        .fold(0.0, f64::max);
                    if dist > self.nu {
                        violations.push(format!("users {u},{v}: same cluster, distance {dist} > nu"));
                    }
                } else {
                    let at_u = (self.rewards[(u, bu)] - self.rewards[(v, bu)]).abs();
                    let at_v = (self.rewards[(u, bv)] - self.rewards[(v, bv)]).abs();
                    if !(at_u > threshold || at_v > threshold) {
                        violations.push(format!(
                            "users {u},{v}: best-arm separation {} <= {threshold}",
                            at_u.max(at_v)
                        ));
                    }
                }
            }
        }
        violations
    }
}
