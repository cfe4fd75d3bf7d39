use serde::{Deserialize, Serialize};

use crate::linalg::{singular_values, thin_svd, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Stop once the relative Frobenius change of the iterate drops below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-6,
            max_iters: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub matrix: Matrix,
    pub iterations: usize,
    /// Objective at the starting point followed by one value per iteration.
    pub objective: Vec<f64>,
    pub final_change: f64,
    /// `max_iters` was reached with relative change above `100 * tol`.
    pub no_convergence: bool,
}

impl SolveOutcome {
    pub fn final_objective(&self) -> f64 {
        *self.objective.last().expect("objective trace is never empty")
    }
}

fn data_term(q: &Matrix, observed: &[(usize, usize, f64)]) -> f64 {
    0.5 * observed.iter().map(|&(i, j, z)| (q[(i, j)] - z).powi(2)).sum::<f64>()
}

/// `1/2 sum_{(i,j) observed} (Q_ij - Z_ij)^2 + lambda ||Q||_*`.
pub fn nuclear_norm_objective(q: &Matrix, observed: &[(usize, usize, f64)], lambda: f64) -> f64 {
    let nuclear: f64 = singular_values(q).iter().sum();
    data_term(q, observed) + lambda * nuclear
}

/// Singular-value soft-thresholding; returns the result and its nuclear norm.
fn shrink(y: Matrix, lambda: f64) -> (Matrix, f64) {
    let (r, c) = y.shape();
    let (u, s, v) = thin_svd(&y);
    let kept: Vec<(usize, f64)> = s
        .iter()
        .enumerate()
        .filter_map(|(k, &s)| (s > lambda).then_some((k, s - lambda)))
        .collect();
    if kept.is_empty() {
        return (Matrix::zeros(r, c), 0.0);
    }
    let uk = Matrix::from_fn(r, kept.len(), |i, t| u[(i, kept[t].0)]);
    let vk = Matrix::from_fn(kept.len(), c, |t, j| v[(j, kept[t].0)] * kept[t].1);
    let nuclear = kept.iter().map(|&(_, s)| s).sum();
    (uk * vk, nuclear)
}

/// Minimizes `1/2 sum_{observed} (Q_ij - Z_ij)^2 + lambda ||Q||_*` over
/// `shape`-sized matrices.
///
/// Each proximal step fills the observed entries of the extrapolated point
/// with the data and soft-thresholds its singular values (unit step, the
/// inverse Lipschitz constant of the data term). Steps use monotone FISTA
/// momentum, so the objective never increases within a stage. Stages warm
/// start along a decreasing path of thresholds ending at `lambda`; the
/// reported objective trace covers the final stage only.
pub fn solve_nuclear_norm(
    observed: &[(usize, usize, f64)],
    shape: (usize, usize),
    lambda: f64,
    settings: &SolverSettings,
) -> SolveOutcome {
    let (r, c) = shape;
    let mut x = Matrix::zeros(r, c);
    if r == 0 || c == 0 {
        let objective = vec![data_term(&x, observed)];
        return SolveOutcome {
            matrix: x,
            iterations: 0,
            objective,
            final_change: 0.0,
            no_convergence: false,
        };
    }

    let mut data = Matrix::zeros(r, c);
    for &(i, j, z) in observed {
        data[(i, j)] = z;
    }
    let top = singular_values(&data).first().copied().unwrap_or(0.0);
    let mut stage = (0.5 * top).max(lambda);

    let mut iterations = 0;
    let mut x_nuclear = 0.0;
    loop {
        let last = stage <= lambda;
        let level = if last { lambda } else { stage };
        let tol = if last { settings.tol } else { settings.tol.max(1e-3) };
        let mut fx = data_term(&x, observed) + level * x_nuclear;
        let mut objective = vec![fx];
        let mut z = x.clone();
        let mut t = 1.0f64;
        let mut change = f64::INFINITY;
        while iterations < settings.max_iters {
            let mut y = z.clone();
            for &(i, j, v) in observed {
                y[(i, j)] = v;
            }
            let (u, nuclear) = shrink(y, level);
            iterations += 1;
            let scale = u.norm();
            change = if scale > 0.0 { (&u - &z).norm() / scale } else { (&u - &z).norm() };
            let fu = data_term(&u, observed) + level * nuclear;
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let prev = x.clone();
            if fu <= fx {
                x = u.clone();
                x_nuclear = nuclear;
                fx = fu;
            }
            z = &x + (&u - &x) * (t / t_next) + (&x - &prev) * ((t - 1.0) / t_next);
            t = t_next;
            if last {
                objective.push(fx);
            }
            if change < tol {
                break;
            }
        }
        if last || iterations >= settings.max_iters {
            if !last {
                // Budget ran out on an intermediate stage.
                objective = vec![data_term(&x, observed) + lambda * x_nuclear];
            }
            return SolveOutcome {
                matrix: x,
                iterations,
                objective,
                final_change: change,
                no_convergence: !last || change > 100.0 * settings.tol,
            };
        }
        stage *= 0.25;
        if stage <= (1e-4 * top).max(lambda) {
            stage = lambda;
        }
    }
}
