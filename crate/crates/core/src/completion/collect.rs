use std::collections::HashMap;

use rand::Rng;

use super::Mask;
use crate::env::Environment;
use crate::error::Result;
use crate::rng::StreamRng;

/// Reward sums and counts for the entries of a mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationBuffer {
    mask: Mask,
    sums: Vec<Vec<f64>>,
    counts: Vec<Vec<u64>>,
    target: u64,
}

impl ObservationBuffer {
    fn new(mask: Mask, target: u64) -> Self {
        let sums = (0..mask.rows().len()).map(|i| vec![0.0; mask.selected(i).len()]).collect();
        let counts = (0..mask.rows().len()).map(|i| vec![0; mask.selected(i).len()]).collect();
        ObservationBuffer {
            mask,
            sums,
            counts,
            target,
        }
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    /// Observations required per entry.
    pub fn target_count(&self) -> u64 {
        self.target
    }

    /// Count of the `k`-th sampled entry of local row `i`.
    pub fn count(&self, i: usize, k: usize) -> u64 {
        self.counts[i][k]
    }

    pub fn total_observations(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Averages `(local_row, local_col, mean)` of entries that reached the
    /// target count.
    pub fn averaged(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.mask.len());
        for (i, cols) in (0..self.mask.rows().len()).map(|i| (i, self.mask.selected(i))) {
            for (k, &j) in cols.iter().enumerate() {
                if self.counts[i][k] == self.target {
                    out.push((i, j, self.sums[i][k] / self.target as f64));
                }
            }
        }
        out
    }

    /// Averages of every entry observed at least once, whatever its count.
    pub fn averaged_partial(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.mask.len());
        for (i, cols) in (0..self.mask.rows().len()).map(|i| (i, self.mask.selected(i))) {
            for (k, &j) in cols.iter().enumerate() {
                let c = self.counts[i][k];
                if c > 0 {
                    out.push((i, j, self.sums[i][k] / c as f64));
                }
            }
        }
        out
    }

    pub fn max_abs_average(&self) -> f64 {
        self.averaged().iter().fold(0.0, |acc, &(_, _, z)| acc.max(z.abs()))
    }
}

/// Arm recommended by a collector for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pull {
    pub arm: usize,
    /// Local `(row, k)` of the masked entry this pull observes, if any.
    slot: Option<(usize, usize)>,
}

impl Pull {
    /// Whether the reward feeds the estimate.
    pub fn is_counted(&self) -> bool {
        self.slot.is_some()
    }
}

/// Stateful collection of `b` rounds of observations of every masked entry.
///
/// In a pass, an arriving user with an unobserved masked entry pulls that
/// arm; otherwise it pulls a uniformly random arm of the column set outside
/// its masked entries (any column if its whole row is masked), and that
/// reward is discarded. A new pass starts once every masked entry has been
/// observed in the current one.
#[derive(Debug, Clone)]
pub struct DataCollector {
    buffer: ObservationBuffer,
    local_row: HashMap<usize, usize>,
    pass: u64,
    pending: Vec<Vec<usize>>,
    pending_total: usize,
}

impl DataCollector {
    pub fn new(mask: Mask, b: u64) -> Self {
        assert!(b >= 1, "variance reduction factor must be at least 1");
        let local_row = mask.rows().iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut c = DataCollector {
            buffer: ObservationBuffer::new(mask, b),
            local_row,
            pass: 0,
            pending: Vec::new(),
            pending_total: 0,
        };
        c.start_pass();
        c
    }

    fn start_pass(&mut self) {
        while self.pass < self.buffer.target {
            let mask = &self.buffer.mask;
            // Pop from the back so entries are visited in increasing column order.
            self.pending = (0..mask.rows().len())
                .map(|i| (0..mask.selected(i).len()).rev().collect())
                .collect();
            self.pending_total = mask.len();
            if self.pending_total > 0 {
                return;
            }
            self.pass = self.buffer.target;
        }
    }

    pub fn is_complete(&self) -> bool {
        self.pass >= self.buffer.target
    }

    /// Passes finished so far.
    pub fn passes_done(&self) -> u64 {
        self.pass
    }

    pub fn covers(&self, user: usize) -> bool {
        self.local_row.contains_key(&user)
    }

    pub fn buffer(&self) -> &ObservationBuffer {
        &self.buffer
    }

    pub fn into_buffer(self) -> ObservationBuffer {
        self.buffer
    }

    /// Arm for `user` this round, or `None` if the user is outside the row set.
    pub fn serve<R: Rng + ?Sized>(&mut self, user: usize, rng: &mut R) -> Option<Pull> {
        let &i = self.local_row.get(&user)?;
        if !self.is_complete() {
            if let Some(&k) = self.pending[i].last() {
                let j = self.buffer.mask.selected(i)[k];
                return Some(Pull {
                    arm: self.buffer.mask.cols()[j],
                    slot: Some((i, k)),
                });
            }
        }
        let cols = self.buffer.mask.cols();
        let masked = self.buffer.mask.selected(i);
        let arm = if masked.len() == cols.len() {
            cols[rng.gen_range(0..cols.len())]
        } else {
            // Draw a position among the unmasked columns; `masked` is sorted.
            let mut r = rng.gen_range(0..cols.len() - masked.len());
            for &j in masked {
                if j <= r {
                    r += 1;
                } else {
                    break;
                }
            }
            cols[r]
        };
        Some(Pull { arm, slot: None })
    }

    /// Registers the reward of a pull returned by [`serve`](Self::serve).
    pub fn record(&mut self, pull: &Pull, reward: f64) {
        let Some((i, k)) = pull.slot else { return };
        if self.is_complete() || self.pending[i].last() != Some(&k) {
            return;
        }
        self.pending[i].pop();
        self.pending_total -= 1;
        self.buffer.sums[i][k] += reward;
        self.buffer.counts[i][k] += 1;
        if self.pending_total == 0 {
            self.pass += 1;
            self.start_pass();
        }
    }
}

/// Result of driving a [`DataCollector`] against an environment.
#[derive(Debug, Clone)]
pub struct Collection {
    pub buffer: ObservationBuffer,
    pub rounds_used: u64,
    /// The round budget (or the environment horizon) ran out first.
    pub exhausted: bool,
}

/// Runs the collection for `mask` until every entry has `b` observations or
/// `budget` rounds have been spent. Users outside the mask's rows pull a
/// uniformly random arm of its columns.
pub fn collect_observations(
    env: &mut Environment<'_>,
    mask: Mask,
    b: u64,
    budget: u64,
    rng: &mut StreamRng,
) -> Result<Collection> {
    let mut collector = DataCollector::new(mask, b);
    let cols = collector.buffer().mask().cols().to_vec();
    let mut rounds = 0;
    while !collector.is_complete() {
        if rounds >= budget || env.is_done() {
            return Ok(Collection {
                buffer: collector.into_buffer(),
                rounds_used: rounds,
                exhausted: true,
            });
        }
        let mut pull = None;
        let step = env.step(|u| match collector.serve(u, rng) {
            Some(p) => {
                pull = Some(p);
                p.arm
            }
            None => cols[rng.gen_range(0..cols.len())],
        })?;
        if let Some(p) = pull {
            collector.record(&p, step.reward);
        }
        rounds += 1;
    }
    Ok(Collection {
        buffer: collector.into_buffer(),
        rounds_used: rounds,
        exhausted: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::sample_mask;
    use crate::env::{generate_cs_instance, Instance, NoiseModel, RowDistribution};
    use crate::linalg::Matrix;
    use crate::rng;

    fn gaussian_instance(n: usize, m: usize) -> Instance {
        generate_cs_instance(n, m, 1, RowDistribution::Gaussian { mean: 0.0, std: 1.0 }, 3).unwrap()
    }

    #[test]
    fn noiseless_single_observation_matches_truth() {
        let inst = gaussian_instance(4, 3);
        let rows: Vec<usize> = (0..4).collect();
        let cols: Vec<usize> = (0..3).collect();
        let selected = (0..4).map(|u| vec![u % 3]).collect();
        let mask = Mask::new(rows, cols, selected);
        let mut env = Environment::new(&inst, 10_000, 1);
        let out = collect_observations(&mut env, mask, 1, 10_000, &mut rng::stream(1, 50)).unwrap();
        assert!(!out.exhausted);
        for (i, j, z) in out.buffer.averaged() {
            assert_eq!(z, inst.reward(i, j));
        }
        assert_eq!(out.buffer.averaged().len(), 4);
    }

    #[test]
    fn zero_budget_is_exhausted_with_zero_counts() {
        let inst = gaussian_instance(3, 3);
        let idx: Vec<usize> = (0..3).collect();
        let mut env = Environment::new(&inst, 100, 1);
        let out = collect_observations(&mut env, Mask::full(idx.clone(), idx), 2, 0, &mut rng::stream(0, 50)).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.rounds_used, 0);
        assert_eq!(out.buffer.total_observations(), 0);
        assert!(out.buffer.averaged().is_empty());
    }

    #[test]
    fn averaging_divides_variance_by_b() {
        let p = Matrix::zeros(5, 5);
        let inst = Instance::new(p, vec![0; 5], Matrix::zeros(1, 5), 0.0, NoiseModel::gaussian(1.0)).unwrap();
        let idx: Vec<usize> = (0..5).collect();
        let mut values = Vec::new();
        for s in 0..200 {
            let mut env = Environment::new(&inst, 100_000, s);
            let out = collect_observations(
                &mut env,
                Mask::full(idx.clone(), idx.clone()),
                4,
                100_000,
                &mut rng::stream(s, 50),
            )
            .unwrap();
            values.extend(out.buffer.averaged().into_iter().map(|(_, _, z)| z));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(var > 0.25 / 1.5 && var < 0.25 * 1.5, "variance {var}");
    }

    #[test]
    fn filler_pulls_avoid_masked_entries() {
        let mask = sample_mask(&[0, 1], &[10, 11, 12, 13, 14], 0.5, &mut rng::stream(2, 2));
        let mut c = DataCollector::new(mask.clone(), 1);
        let mut r = rng::stream(0, 0);
        // Drain row 0.
        while let Some(p) = c.serve(0, &mut r).filter(Pull::is_counted) {
            c.record(&p, 0.0);
        }
        let masked: Vec<usize> = mask.selected(0).iter().map(|&j| mask.cols()[j]).collect();
        for _ in 0..200 {
            let p = c.serve(0, &mut r).unwrap();
            assert!(!p.is_counted());
            if masked.len() < 5 {
                assert!(!masked.contains(&p.arm), "{} in {masked:?}", p.arm);
            }
            assert!((10..15).contains(&p.arm));
        }
        assert!(c.serve(7, &mut r).is_none());
    }

    #[test]
    fn passes_are_sequential() {
        let mask = Mask::full(vec![0], vec![0, 1]);
        let mut c = DataCollector::new(mask, 3);
        let mut r = rng::stream(0, 0);
        for pass in 0..3 {
            assert_eq!(c.passes_done(), pass);
            for _ in 0..2 {
                let p = c.serve(0, &mut r).unwrap();
                c.record(&p, 1.0);
            }
        }
        assert!(c.is_complete());
        assert_eq!(c.buffer().averaged(), vec![(0, 0, 1.0), (0, 1, 1.0)]);
    }
}
