//! Spectral diagnostics for generated instances.
//!
//! Measures the quantities the regret guarantees are stated in: the
//! condition number of the cluster rows, the incoherence of both singular
//! factors, and the restricted minimum eigenvalues of column blocks of `V`
//! (subset strong smoothness) and of per-cluster row blocks of `U`.
//!
//! The subset smoothness constant is a minimum over all subsets of a given
//! size. Only a Monte-Carlo sample is evaluated, so `alpha_hat` is an upper
//! bound on the true constant.

use std::fmt;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::Instance;
use crate::error::{Error, Result};
use crate::linalg::{submatrix, thin_svd, two_inf_norm, Matrix};
use crate::rng::{self, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    /// `lambda_1 / lambda_r`.
    pub kappa: f64,
    /// `N ||U||_{2,inf}^2 / r`.
    pub mu_row: f64,
    /// `M ||V||_{2,inf}^2 / r`.
    pub mu_col: f64,
    /// Number of singular values kept.
    pub rank: usize,
}

/// Singular factors truncated at `rank_tol` times the top singular value.
pub fn truncated_svd(m: &Matrix, rank_tol: f64) -> Result<(Matrix, Vec<f64>, Matrix)> {
    if m.is_empty() || m.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroMatrix);
    }
    let (u, s, v) = thin_svd(m);
    let top = s[0];
    let r = s.iter().filter(|&&x| x > rank_tol * top).count().max(1);
    Ok((u.columns(0, r).into_owned(), s[..r].to_vec(), v.columns(0, r).into_owned()))
}

/// Condition number and incoherence of `m`.
pub fn incoherence_and_condition(m: &Matrix, rank_tol: f64) -> Result<Spectrum> {
    let (u, s, v) = truncated_svd(m, rank_tol)?;
    let r = s.len();
    let (n, cols) = m.shape();
    let un = two_inf_norm(&u);
    let vn = two_inf_norm(&v);
    Ok(Spectrum {
        kappa: s[0] / s[r - 1],
        mu_row: n as f64 * un * un / r as f64,
        mu_col: cols as f64 * vn * vn / r as f64,
        rank: r,
    })
}

/// Rows `idx` of `v` as a Gram matrix `V_S^T V_S`.
fn row_gram(v: &Matrix, idx: &[usize]) -> Matrix {
    let all: Vec<usize> = (0..v.ncols()).collect();
    let vs = submatrix(v, idx, &all);
    vs.transpose() * vs
}

fn min_eig(gram: &Matrix) -> f64 {
    crate::linalg::min_eigenvalue(gram).max(0.0)
}

/// Sampled subset size `ceil(gamma * c)`, clamped to `[1, M]`.
pub fn subset_size(gamma: f64, c: usize, num_rows: usize) -> usize {
    ((gamma * c as f64).ceil() as usize).clamp(1, num_rows.max(1))
}

/// Minimum of `lambda_min(V_S^T V_S) * M / |S|` over `num_subsets` random
/// subsets `S` of size `ceil(gamma * c)`.
///
/// Subsets are drawn sequentially from `rng`, so a run with more subsets
/// evaluates a superset of the subsets of a shorter run with the same
/// generator state.
pub fn subset_smoothness_estimate(v: &Matrix, gamma: f64, c: usize, num_subsets: usize, rng: &mut StreamRng) -> f64 {
    let m = v.nrows();
    let s = subset_size(gamma, c, m);
    let subsets: Vec<Vec<usize>> = (0..num_subsets).map(|_| index::sample(rng, m, s).into_vec()).collect();
    subsets
        .par_iter()
        .map(|idx| min_eig(&row_gram(v, idx)) * m as f64 / s as f64)
        .reduce(|| f64::INFINITY, f64::min)
}

/// Exact minimum over clusters of `lambda_min(U_S^T U_S) * C / tau`, where
/// `C` is the number of columns of `u`. Clusters whose block is numerically
/// singular contribute zero and a warning.
pub fn cluster_factor_smoothness(u: &Matrix, cluster_of: &[usize], tau: f64) -> (f64, Vec<String>) {
    let c = u.ncols();
    let clusters = cluster_of.iter().copied().max().map_or(0, |k| k + 1);
    let mut members = vec![Vec::new(); clusters];
    for (i, &k) in cluster_of.iter().enumerate() {
        members[k].push(i);
    }
    let mut warnings = Vec::new();
    let mut beta = f64::INFINITY;
    for (k, rows) in members.iter().enumerate() {
        if rows.is_empty() {
            continue;
        }
        let gram = row_gram(u, rows);
        let top = gram.symmetric_eigenvalues().iter().copied().fold(0.0, f64::max);
        let low = min_eig(&gram);
        let value = if rows.len() < c || low <= 1e-9 * top {
            warnings.push(format!(
                "cluster {k}: factor block is rank deficient (lambda_min = {low:.3e}, {} rows)",
                rows.len()
            ));
            0.0
        } else {
            low * c as f64 / tau
        };
        beta = beta.min(value);
    }
    if beta.is_infinite() {
        beta = 0.0;
    }
    (beta, warnings)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct CheckerConfig {
    pub rank_tol: f64,
    pub num_subsets: usize,
    /// Subset size multiplier. `None` means `16 ln M / C`, capped at `M / C`.
    pub gamma: Option<f64>,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            rank_tol: 1e-9,
            num_subsets: 200,
            gamma: None,
        }
    }
}

impl CheckerConfig {
    pub fn gamma_for(&self, num_arms: usize, clusters: usize) -> f64 {
        let cap = num_arms as f64 / clusters.max(1) as f64;
        self.gamma
            .unwrap_or_else(|| 16.0 * (num_arms.max(2) as f64).ln() / clusters.max(1) as f64)
            .min(cap)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub kappa: f64,
    pub mu_row: f64,
    pub mu_col: f64,
    /// Sampled minimum; an upper bound on the true smoothness constant.
    pub alpha_hat: f64,
    /// Per-cluster smoothness of the left factor of `P`, for `nu > 0` only.
    pub beta_hat: Option<f64>,
    pub gamma_used: f64,
    pub subsets_sampled: usize,
    pub rank: usize,
    /// Largest over smallest cluster size.
    pub tau: f64,
    pub warnings: Vec<String>,
}

/// Full report for an instance.
///
/// `kappa`, `mu_col` and `alpha_hat` are measured on the cluster rows `X`;
/// `mu_row` on the left factor of `P`. With `nu > 0` the left factor of `P`
/// truncated to `C` columns also yields `beta_hat`.
pub fn check_instance(instance: &Instance, config: &CheckerConfig, seed: u64) -> Result<AssumptionReport> {
    let x = instance.cluster_rows();
    let c = instance.num_clusters();
    let m = instance.num_arms();
    let spec_x = incoherence_and_condition(x, config.rank_tol)?;
    let spec_p = incoherence_and_condition(instance.rewards(), config.rank_tol)?;
    let (_, _, v) = truncated_svd(x, config.rank_tol)?;
    let gamma = config.gamma_for(m, c);
    let mut rng = rng::stream(seed, rng::CHECKER);
    let alpha_hat = subset_smoothness_estimate(&v, gamma, c, config.num_subsets, &mut rng);
    let tau = instance.cluster_size_ratio();

    let mut warnings = Vec::new();
    if spec_x.rank < c {
        warnings.push(format!("cluster rows have rank {} < C = {c}", spec_x.rank));
    }
    let beta_hat = if instance.nu() > 0.0 {
        let (u, _, _) = thin_svd(instance.rewards());
        let uc = u.columns(0, c.min(u.ncols())).into_owned();
        let (beta, w) = cluster_factor_smoothness(&uc, instance.cluster_of(), tau);
        warnings.extend(w);
        Some(beta)
    } else {
        None
    };
    Ok(AssumptionReport {
        kappa: spec_x.kappa,
        mu_row: spec_p.mu_row,
        mu_col: spec_x.mu_col,
        alpha_hat,
        beta_hat,
        gamma_used: gamma,
        subsets_sampled: config.num_subsets,
        rank: spec_x.rank,
        tau,
        warnings,
    })
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "assumption-report v1")?;
        writeln!(f, "rank {}", self.rank)?;
        writeln!(f, "kappa {:.6}", self.kappa)?;
        writeln!(f, "mu_row {:.6}", self.mu_row)?;
        writeln!(f, "mu_col {:.6}", self.mu_col)?;
        writeln!(f, "# upper bound: minimum over sampled subsets only")?;
        writeln!(f, "alpha_hat {:.6}", self.alpha_hat)?;
        match self.beta_hat {
            Some(b) => writeln!(f, "beta_hat {b:.6}")?,
            None => writeln!(f, "beta_hat n/a")?,
        }
        writeln!(f, "gamma {:.6}", self.gamma_used)?;
        writeln!(f, "subsets_sampled {}", self.subsets_sampled)?;
        writeln!(f, "tau {:.6}", self.tau)?;
        for w in &self.warnings {
            writeln!(f, "warning {w}")?;
        }
        Ok(())
    }
}

/// Measured and bounding values for one submatrix whose rows are a union
/// of whole clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct NiceSubmatrixCheck {
    pub kappa: f64,
    /// `kappa(X) * sqrt(tau)`.
    pub kappa_bound: f64,
    pub u_norm: f64,
    /// `sqrt(C tau / N')`.
    pub u_bound: f64,
    pub v_norm: f64,
    /// `sqrt(mu C / (alpha M'))` with `alpha` measured on this arm subset.
    pub v_bound: f64,
    /// The same bound with the report's `alpha_hat` plugged in.
    pub v_bound_reported: f64,
}

impl NiceSubmatrixCheck {
    pub fn kappa_holds(&self, tol: f64) -> bool {
        self.kappa <= self.kappa_bound + tol
    }

    pub fn incoherence_holds(&self, tol: f64) -> bool {
        self.u_norm <= self.u_bound + tol && self.v_norm <= self.v_bound + tol
    }
}

/// Evaluates the submatrix of `P` on the users of `clusters` and on `arms`.
///
/// The condition-number bound concerns the full arm set; restricting
/// columns can make two cluster rows nearly parallel, which no bound in
/// terms of `X` controls.
pub fn check_nice_submatrix(
    instance: &Instance,
    clusters: &[usize],
    arms: &[usize],
    report: &AssumptionReport,
    rank_tol: f64,
) -> Result<NiceSubmatrixCheck> {
    let c = instance.num_clusters();
    let m = instance.num_arms();
    let users: Vec<usize> = (0..instance.num_users())
        .filter(|&u| clusters.contains(&instance.cluster_of()[u]))
        .collect();
    let sub = submatrix(instance.rewards(), &users, arms);
    let spec = incoherence_and_condition(&sub, rank_tol)?;
    let (su, _, sv) = truncated_svd(&sub, rank_tol)?;

    let x = instance.cluster_rows();
    let (_, _, v) = truncated_svd(x, rank_tol)?;
    let vn = two_inf_norm(&v);
    let mu = m as f64 * vn * vn / c as f64;
    let alpha_sub = min_eig(&row_gram(&v, arms)) * m as f64 / arms.len() as f64;
    let n_sub = users.len() as f64;
    let m_sub = arms.len() as f64;
    Ok(NiceSubmatrixCheck {
        kappa: spec.kappa,
        kappa_bound: report.kappa * report.tau.sqrt(),
        u_norm: two_inf_norm(&su),
        u_bound: (c as f64 * report.tau / n_sub).sqrt(),
        v_norm: two_inf_norm(&sv),
        v_bound: (mu * c as f64 / (alpha_sub * m_sub)).sqrt(),
        v_bound_reported: (mu * c as f64 / (report.alpha_hat * m_sub)).sqrt(),
    })
}
