use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use super::{sample_mask, solve_nuclear_norm, DataCollector, OracleParams, Pull, SolverSettings};
use crate::env::Environment;
use crate::error::{Error, Result};
use crate::linalg::{entrywise_median, max_abs, Matrix};
use crate::rng::{self, StreamRng, ORACLE_BLOCK};

/// Estimate of the rewards of `rows x cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmatrixEstimate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub values: Matrix,
    /// Target error the oracle was configured for.
    pub claimed_error: f64,
    pub repetitions: usize,
    pub rounds_used: u64,
}

impl SubmatrixEstimate {
    /// Estimated row of the `i`-th user, aligned with `cols`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.values.row(i).iter().copied().collect()
    }
}

/// Per-block solver statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagnostic {
    pub repetition: usize,
    pub block: usize,
    pub rows: usize,
    pub cols: usize,
    pub iterations: usize,
    pub objective: f64,
    pub no_convergence: bool,
    /// Max entrywise error of the block against supplied ground truth.
    pub entrywise_error: Option<f64>,
}

pub fn write_diagnostics_csv<W: Write>(w: &mut W, diags: &[BlockDiagnostic]) -> Result<()> {
    writeln!(w, "repetition,block,rows,cols,iterations,final_objective,no_convergence,entrywise_error")?;
    for d in diags {
        let err = d.entrywise_error.map(crate::env::io::fmt_f64).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            d.repetition,
            d.block,
            d.rows,
            d.cols,
            d.iterations,
            crate::env::io::fmt_f64(d.objective),
            d.no_convergence,
            err
        )?;
    }
    Ok(())
}

/// Stateful matrix-completion oracle for the submatrix `rows x cols`.
///
/// Stream ids: repetition `k` draws its mask and column partition from
/// `stream_base + k`; filler arms come from `stream_base + ORACLE_BLOCK - 1`.
pub struct LowRankEstimator {
    rows: Vec<usize>,
    cols: Vec<usize>,
    params: OracleParams,
    solver: SolverSettings,
    seed: u64,
    stream_base: u64,
    current: Option<(DataCollector, StreamRng)>,
    filler: StreamRng,
    estimates: Vec<Matrix>,
    diagnostics: Vec<BlockDiagnostic>,
    streams_used: Vec<u64>,
    ground_truth: Option<Matrix>,
    rounds: u64,
    max_abs_observation: f64,
}

impl LowRankEstimator {
    pub fn new(
        rows: Vec<usize>,
        cols: Vec<usize>,
        params: OracleParams,
        solver: SolverSettings,
        seed: u64,
        stream_base: u64,
    ) -> Self {
        assert!(!rows.is_empty() && !cols.is_empty(), "empty submatrix");
        assert!(params.f >= 1 && (params.f as u64) < ORACLE_BLOCK - 1);
        let mut est = LowRankEstimator {
            rows,
            cols,
            params,
            solver,
            seed,
            stream_base,
            current: None,
            filler: rng::stream(seed, stream_base + ORACLE_BLOCK - 1),
            estimates: Vec::new(),
            diagnostics: Vec::new(),
            streams_used: Vec::new(),
            ground_truth: None,
            rounds: 0,
            max_abs_observation: 0.0,
        };
        est.start_repetition();
        est
    }

    /// Attach the true submatrix so block diagnostics report errors.
    pub fn with_ground_truth(mut self, truth: Matrix) -> Self {
        assert_eq!(truth.shape(), (self.rows.len(), self.cols.len()));
        self.ground_truth = Some(truth);
        self
    }

    fn start_repetition(&mut self) {
        let id = self.stream_base + self.estimates.len() as u64;
        let mut r = rng::stream(self.seed, id);
        self.streams_used.push(id);
        let mask = sample_mask(&self.rows, &self.cols, self.params.p, &mut r);
        self.current = Some((DataCollector::new(mask, self.params.b), r));
        self.finish_if_collected();
    }

    fn finish_if_collected(&mut self) {
        let done = matches!(&self.current, Some((c, _)) if c.is_complete());
        if done {
            let (collector, mut r) = self.current.take().expect("checked above");
            let buffer = collector.into_buffer();
            self.max_abs_observation = self.max_abs_observation.max(buffer.max_abs_average());
            let estimate = self.solve_repetition(&buffer.averaged(), &mut r);
            self.estimates.push(estimate);
            if self.estimates.len() < self.params.f {
                self.start_repetition();
            }
        }
    }

    /// Partitions the longer side into `ceil(long / short)` random blocks
    /// and solves each roughly square block independently.
    fn solve_repetition(&mut self, observed: &[(usize, usize, f64)], r: &mut StreamRng) -> Matrix {
        let (nr, nc) = (self.rows.len(), self.cols.len());
        let transpose = nr > nc;
        let (short, long) = if transpose { (nc, nr) } else { (nr, nc) };
        let k = long.div_ceil(short);
        let assignment: Vec<usize> = (0..long).map(|_| r.gen_range(0..k)).collect();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (idx, &q) in assignment.iter().enumerate() {
            blocks[q].push(idx);
        }
        blocks.retain(|b| !b.is_empty());

        // Position of each long-side index within its block.
        let mut position = vec![(0usize, 0usize); long];
        for (q, b) in blocks.iter().enumerate() {
            for (pos, &idx) in b.iter().enumerate() {
                position[idx] = (q, pos);
            }
        }
        let mut per_block: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); blocks.len()];
        for &(i, j, z) in observed {
            let (s, l) = if transpose { (j, i) } else { (i, j) };
            let (q, pos) = position[l];
            per_block[q].push((s, pos, z));
        }

        let lambda = self.params.lambda;
        let solver = self.solver;
        let solved: Vec<_> = blocks
            .par_iter()
            .zip(per_block.par_iter())
            .map(|(b, obs)| solve_nuclear_norm(obs, (short, b.len()), lambda, &solver))
            .collect();

        let repetition = self.estimates.len();
        let mut full = Matrix::zeros(nr, nc);
        for (q, (b, out)) in blocks.iter().zip(solved).enumerate() {
            for (pos, &idx) in b.iter().enumerate() {
                for s in 0..short {
                    let v = out.matrix[(s, pos)];
                    if transpose {
                        full[(idx, s)] = v;
                    } else {
                        full[(s, idx)] = v;
                    }
                }
            }
            let entrywise_error = self.ground_truth.as_ref().map(|truth| {
                let mut worst: f64 = 0.0;
                for &idx in b {
                    for s in 0..short {
                        let (i, j) = if transpose { (idx, s) } else { (s, idx) };
                        worst = worst.max((full[(i, j)] - truth[(i, j)]).abs());
                    }
                }
                worst
            });
            self.diagnostics.push(BlockDiagnostic {
                repetition,
                block: q,
                rows: if transpose { b.len() } else { short },
                cols: if transpose { short } else { b.len() },
                iterations: out.iterations,
                objective: out.final_objective(),
                no_convergence: out.no_convergence,
                entrywise_error,
            });
        }
        full
    }

    /// Closes the running repetition on the data collected so far, each
    /// entry averaged over however many observations it has. Does nothing
    /// if no repetition is running or nothing was observed.
    pub fn finish_partial(&mut self) {
        let observed = match &self.current {
            Some((c, _)) => c.buffer().averaged_partial(),
            None => return,
        };
        if observed.is_empty() {
            return;
        }
        let (_, mut r) = self.current.take().expect("checked above");
        let max_obs = observed.iter().fold(0.0, |acc: f64, &(_, _, z)| acc.max(z.abs()));
        self.max_abs_observation = self.max_abs_observation.max(max_obs);
        let estimate = self.solve_repetition(&observed, &mut r);
        self.estimates.push(estimate);
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn params(&self) -> &OracleParams {
        &self.params
    }

    /// True while more data is needed.
    pub fn is_waiting(&self) -> bool {
        self.current.is_some()
    }

    pub fn covers(&self, user: usize) -> bool {
        self.current.as_ref().is_some_and(|(c, _)| c.covers(user))
    }

    pub fn completed_repetitions(&self) -> usize {
        self.estimates.len()
    }

    pub fn rounds_used(&self) -> u64 {
        self.rounds
    }

    /// Stream ids of the masks drawn so far, one per repetition.
    pub fn streams_used(&self) -> &[u64] {
        &self.streams_used
    }

    pub fn diagnostics(&self) -> &[BlockDiagnostic] {
        &self.diagnostics
    }

    /// Largest absolute averaged observation seen in completed repetitions.
    pub fn max_abs_observation(&self) -> f64 {
        self.max_abs_observation
    }

    /// Arm to pull for `user` this round, if this oracle is collecting data
    /// from that user.
    pub fn serve(&mut self, user: usize) -> Option<Pull> {
        let (collector, _) = self.current.as_mut()?;
        let pull = collector.serve(user, &mut self.filler)?;
        self.rounds += 1;
        Some(pull)
    }

    pub fn record(&mut self, pull: &Pull, reward: f64) {
        if let Some((collector, _)) = self.current.as_mut() {
            collector.record(pull, reward);
            self.finish_if_collected();
        }
    }

    /// Entrywise median over the completed repetitions.
    pub fn estimate(&self) -> Result<SubmatrixEstimate> {
        if self.estimates.is_empty() {
            return Err(Error::InsufficientBudget(format!(
                "no repetition completed for a {}x{} submatrix",
                self.rows.len(),
                self.cols.len()
            )));
        }
        Ok(SubmatrixEstimate {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            values: entrywise_median(&self.estimates),
            claimed_error: self.params.zeta,
            repetitions: self.estimates.len(),
            rounds_used: self.rounds,
        })
    }

    /// The individual repetition estimates.
    pub fn repetition_estimates(&self) -> &[Matrix] {
        &self.estimates
    }

    /// Max entrywise error of the current median against ground truth.
    pub fn error_against(&self, truth: &Matrix) -> Option<f64> {
        self.estimate().ok().map(|e| max_abs(&(e.values - truth)))
    }
}

/// Runs the oracle standalone against `env` for at most `budget` rounds.
/// Users outside `rows` pull a uniformly random arm of `cols`. If the
/// budget runs out, the median is taken over the completed repetitions.
#[allow(clippy::too_many_arguments)]
pub fn low_rank_matrix_estimate(
    env: &mut Environment<'_>,
    rows: &[usize],
    cols: &[usize],
    params: &OracleParams,
    solver: &SolverSettings,
    budget: u64,
    seed: u64,
    stream_base: u64,
) -> Result<SubmatrixEstimate> {
    let mut est = LowRankEstimator::new(rows.to_vec(), cols.to_vec(), *params, *solver, seed, stream_base);
    let mut outsider = rng::stream(seed, stream_base + ORACLE_BLOCK - 2);
    let mut spent = 0u64;
    while est.is_waiting() && spent < budget && !env.is_done() {
        let mut pull = None;
        let step = env.step(|u| match est.serve(u) {
            Some(p) => {
                pull = Some(p);
                p.arm
            }
            None => cols[outsider.gen_range(0..cols.len())],
        })?;
        if let Some(p) = pull {
            est.record(&p, step.reward);
        }
        spent += 1;
    }
    let mut out = est.estimate()?;
    out.rounds_used = spent;
    Ok(out)
}
