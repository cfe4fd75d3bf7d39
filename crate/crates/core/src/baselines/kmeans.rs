use rand::Rng;

use crate::rng::{self, StreamRng};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
    /// Sum of squared distances to the assigned centers.
    pub objective: f64,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn seed_centers(rows: &[Vec<f64>], k: usize, rng: &mut StreamRng) -> Vec<Vec<f64>> {
    let mut centers = vec![rows[rng.gen_range(0..rows.len())].clone()];
    let mut d: Vec<f64> = rows.iter().map(|r| dist2(r, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = rows.len() - 1;
            for (i, &w) in d.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.gen_range(0..rows.len())
        };
        centers.push(rows[next].clone());
        for (di, r) in d.iter_mut().zip(rows) {
            *di = di.min(dist2(r, centers.last().expect("just pushed")));
        }
    }
    centers
}

fn lloyd(rows: &[Vec<f64>], mut centers: Vec<Vec<f64>>, iters: usize) -> KMeansFit {
    let dim = rows[0].len();
    let k = centers.len();
    let mut labels = vec![usize::MAX; rows.len()];
    for _ in 0..iters {
        let mut changed = false;
        for (i, r) in rows.iter().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let dd = dist2(r, center);
                if dd < best_d {
                    best = c;
                    best_d = dd;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (r, &l) in rows.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(r) {
                *s += x;
            }
        }
        for c in 0..k {
            // Empty clusters keep their previous center.
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    let objective = rows.iter().zip(&labels).map(|(r, &l)| dist2(r, &centers[l])).sum();
    KMeansFit {
        labels,
        centers,
        objective,
    }
}

/// Lloyd's algorithm from k-means++ seeds; best of `restarts` runs.
pub fn kmeans(rows: &[Vec<f64>], k: usize, restarts: usize, iters: usize, rng: &mut StreamRng) -> KMeansFit {
    assert!(!rows.is_empty() && k >= 1);
    let k = k.min(rows.len());
    let mut best: Option<KMeansFit> = None;
    for _ in 0..restarts.max(1) {
        let fit = lloyd(rows, seed_centers(rows, k, rng), iters);
        if best.as_ref().is_none_or(|b| fit.objective < b.objective) {
            best = Some(fit);
        }
    }
    best.expect("at least one restart")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElbowResult {
    pub k: usize,
    pub labels: Vec<usize>,
    /// Objective for each k tried, starting at k = 1.
    pub objectives: Vec<f64>,
}

/// Grows `k` from 1 while the next objective is below `elbow_ratio` times
/// the current one, the current one exceeds `objective_floor`, and
/// `k < max_k`.
pub fn kmeans_elbow(rows: &[Vec<f64>], max_k: usize, elbow_ratio: f64, objective_floor: f64, seed: u64) -> ElbowResult {
    assert!(max_k >= 1);
    let mut rng = rng::stream(seed, rng::POLICY);
    let mut current = kmeans(rows, 1, 1, 100, &mut rng);
    let mut objectives = vec![current.objective];
    let mut k = 1;
    while k < max_k.min(rows.len()) && current.objective > objective_floor {
        let next = kmeans(rows, k + 1, 10, 100, &mut rng);
        objectives.push(next.objective);
        if next.objective / current.objective >= elbow_ratio {
            break;
        }
        current = next;
        k += 1;
    }
    ElbowResult {
        k,
        labels: current.labels,
        objectives,
    }
}
