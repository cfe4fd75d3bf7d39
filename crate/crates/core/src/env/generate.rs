use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Instance, NoiseModel, RCS_SEPARATION};
use crate::error::{Error, Result};
use crate::linalg::{argmax, Matrix};
use crate::rng::{self, StreamRng};

const RCS_MAX_ATTEMPTS: usize = 1000;

/// Distribution of the entries of the cluster reward rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RowDistribution {
    Gaussian { mean: f64, std: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl RowDistribution {
    fn sample(&self, rng: &mut StreamRng) -> f64 {
        match *self {
            RowDistribution::Gaussian { mean, std } => {
                if std == 0.0 {
                    mean
                } else {
                    Normal::new(mean, std).expect("finite std").sample(rng)
                }
            }
            RowDistribution::Uniform { lo, hi } => {
                if lo >= hi {
                    lo
                } else {
                    rng.gen_range(lo..hi)
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            RowDistribution::Gaussian { mean, std } if mean.is_finite() && std >= 0.0 => Ok(()),
            RowDistribution::Uniform { lo, hi } if lo.is_finite() && hi.is_finite() && lo <= hi => Ok(()),
            other => Err(Error::config("distribution", format!("invalid parameters {other:?}"))),
        }
    }
}

fn check_dims(n: usize, m: usize, c: usize) -> Result<()> {
    if n == 0 || m == 0 || c == 0 {
        return Err(Error::InvalidDimensions(format!(
            "all dimensions must be positive (N={n}, M={m}, C={c})"
        )));
    }
    if c > n.min(m) {
        return Err(Error::InvalidDimensions(format!("C={c} exceeds min(N={n}, M={m})")));
    }
    Ok(())
}

fn sample_rows(c: usize, m: usize, dist: &RowDistribution, rng: &mut StreamRng) -> Matrix {
    let mut x = Matrix::zeros(c, m);
    for k in 0..c {
        for a in 0..m {
            x[(k, a)] = dist.sample(rng);
        }
    }
    x
}

fn expand(cluster_rows: &Matrix, cluster_of: &[usize]) -> Matrix {
    Matrix::from_fn(cluster_of.len(), cluster_rows.ncols(), |u, a| {
        cluster_rows[(cluster_of[u], a)]
    })
}

/// Cluster-structured instance: user `u` belongs to cluster `u mod C` and
/// its reward row is that cluster's row.
pub fn generate_cs_instance(
    n: usize,
    m: usize,
    c: usize,
    dist: RowDistribution,
    seed: u64,
) -> Result<Instance> {
    check_dims(n, m, c)?;
    dist.validate()?;
    let mut rng = rng::stream(seed, rng::INSTANCE);
    let x = sample_rows(c, m, &dist, &mut rng);
    let cluster_of: Vec<usize> = (0..n).map(|u| u % c).collect();
    let p = expand(&x, &cluster_of);
    Instance::new(p, cluster_of, x, 0.0, NoiseModel::none())
}

fn row_argmax(x: &Matrix, k: usize) -> usize {
    argmax(x.row(k).iter().copied().collect::<Vec<_>>().as_slice())
}

/// Cluster rows admissible for an RCS instance: every row's best arm beats
/// the runner-up by more than the perturbation half-width, and every pair of
/// clusters is separated at one of their best arms with enough margin that
/// perturbations cannot close the gap.
fn rcs_rows_ok(x: &Matrix, nu: f64, required: f64) -> bool {
    let (c, m) = x.shape();
    let best: Vec<usize> = (0..c).map(|k| row_argmax(x, k)).collect();
    for k in 0..c {
        let top = x[(k, best[k])];
        let runner_up = (0..m)
            .filter(|&a| a != best[k])
            .map(|a| x[(k, a)])
            .fold(f64::NEG_INFINITY, f64::max);
        if top - runner_up <= nu / 2.0 {
            return false;
        }
    }
    for k in 0..c {
        for l in (k + 1)..c {
            let at_k = (x[(k, best[k])] - x[(l, best[k])]).abs();
            let at_l = (x[(k, best[l])] - x[(l, best[l])]).abs();
            if !(at_k > required || at_l > required) {
                return false;
            }
        }
    }
    true
}

/// Relaxed cluster structure: each user's row is its cluster row plus an
/// independent uniform perturbation in `[-nu/2, nu/2]` on every non-best
/// arm. Cluster rows are rejection-sampled until the cross-cluster
/// separation holds. With `nu == 0` this is exactly [`generate_cs_instance`].
pub fn generate_rcs_instance(
    n: usize,
    m: usize,
    c: usize,
    nu: f64,
    dist: RowDistribution,
    seed: u64,
) -> Result<Instance> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::config("nu", format!("must be finite and nonnegative, got {nu}")));
    }
    if nu == 0.0 {
        return generate_cs_instance(n, m, c, dist, seed);
    }
    check_dims(n, m, c)?;
    dist.validate()?;
    let mut rng = rng::stream(seed, rng::INSTANCE);
    // A non-best entry of another cluster may move by nu/2 towards this
    // cluster's best-arm value.
    let required = RCS_SEPARATION * nu + nu / 2.0;

    let mut accepted = None;
    for _ in 0..RCS_MAX_ATTEMPTS {
        let x = sample_rows(c, m, &dist, &mut rng);
        if rcs_rows_ok(&x, nu, required) {
            accepted = Some(x);
            break;
        }
    }
    let x = accepted.ok_or(Error::SeparationUnsatisfiable {
        attempts: RCS_MAX_ATTEMPTS,
        required,
    })?;

    let cluster_of: Vec<usize> = (0..n).map(|u| u % c).collect();
    let best: Vec<usize> = (0..c).map(|k| row_argmax(&x, k)).collect();
    let mut p = expand(&x, &cluster_of);
    for u in 0..n {
        let k = cluster_of[u];
        for a in 0..m {
            if a != best[k] {
                p[(u, a)] += rng.gen_range(-nu / 2.0..=nu / 2.0);
            }
        }
    }
    Instance::new(p, cluster_of, x, nu, NoiseModel::none())
}

/// Lower-bound construction: every cluster row is `(1 - eps)/2` except
/// `(1 + eps)/2` at that cluster's optimal arm. Users are split evenly over
/// clusters (sizes differ by at most one) in a seeded random order, and
/// rewards are Bernoulli.
pub fn generate_hard_instance(
    n: usize,
    m: usize,
    c: usize,
    epsilon: f64,
    optimal_arms: &[usize],
    seed: u64,
) -> Result<Instance> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    if n == 0 || m == 0 || c == 0 || c > n {
        return Err(Error::InvalidDimensions(format!("N={n}, M={m}, C={c}")));
    }
    if optimal_arms.len() != c {
        return Err(Error::InvalidDimensions(format!(
            "{} optimal arms given for {c} clusters",
            optimal_arms.len()
        )));
    }
    if let Some(&a) = optimal_arms.iter().find(|&&a| a >= m) {
        return Err(Error::ArmOutOfRange { arm: a, num_arms: m });
    }
    let low = (1.0 - epsilon) / 2.0;
    let high = (1.0 + epsilon) / 2.0;
    let x = Matrix::from_fn(c, m, |k, a| if a == optimal_arms[k] { high } else { low });

    let mut cluster_of: Vec<usize> = (0..n).map(|u| u % c).collect();
    cluster_of.shuffle(&mut rng::stream(seed, rng::INSTANCE));
    let p = expand(&x, &cluster_of);
    Instance::new(p, cluster_of, x, 0.0, NoiseModel::bernoulli())
}
