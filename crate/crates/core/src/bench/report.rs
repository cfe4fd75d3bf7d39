use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::svg::render_regret_svg;
use crate::checker::AssumptionReport;
use crate::env::io::fmt_f64;
use crate::env::RunHistory;
use crate::error::{Error, Result};
use crate::lattice::{write_phase_trace_csv, PhaseTrace, PHASE_TRACE_HEADER};

pub const REGRET_HEADER: [&str; 6] = ["run_id", "algorithm", "seed", "t", "instant_regret", "cum_regret"];
pub const SUMMARY_HEADER: [&str; 4] = ["algorithm", "checkpoint_t", "mean", "stderr"];

/// `count` logarithmically spaced rounds in `[1, horizon]`, deduplicated,
/// always ending at `horizon`.
pub fn checkpoint_grid(horizon: u64, count: usize) -> Vec<u64> {
    let mut grid = Vec::with_capacity(count + 1);
    if count >= 2 {
        let top = (horizon as f64).ln();
        for i in 0..count {
            let t = (top * i as f64 / (count - 1) as f64).exp().round() as u64;
            grid.push(t.clamp(1, horizon));
        }
    }
    grid.push(horizon);
    grid.dedup();
    grid
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Least-squares slope of `ln y` against `ln x` over points with both
/// coordinates positive.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Rounds played so far.
    pub t: u64,
    /// Regret of round `t`.
    pub instant_regret: f64,
    pub cum_regret: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub run_id: usize,
    pub algorithm: String,
    pub seed: u64,
    pub final_regret: f64,
    /// Checkpoint samples, or every round with full history.
    pub samples: Vec<Sample>,
    pub trace: Option<PhaseTrace>,
}

impl RunSummary {
    pub fn from_history(
        run_id: usize,
        algorithm: String,
        seed: u64,
        history: &RunHistory,
        grid: &[u64],
        full: bool,
        trace: Option<PhaseTrace>,
    ) -> Self {
        let records = history.records();
        let sample = |t: u64| {
            let r = &records[t as usize - 1];
            Sample {
                t,
                instant_regret: r.regret,
                cum_regret: r.cumulative_regret,
            }
        };
        let samples = if full {
            (1..=records.len() as u64).map(sample).collect()
        } else {
            grid.iter().copied().filter(|&t| t as usize <= records.len()).map(sample).collect()
        };
        RunSummary {
            run_id,
            algorithm,
            seed,
            final_regret: history.cumulative_regret(),
            samples,
            trace,
        }
    }

    pub fn cum_at(&self, t: u64) -> Option<f64> {
        self.samples
            .binary_search_by_key(&t, |s| s.t)
            .ok()
            .map(|i| self.samples[i].cum_regret)
    }
}

/// Mean cumulative regret of one algorithm over its seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub algorithm: String,
    pub t: Vec<u64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl Curve {
    /// Log-log slope of the mean curve over the last decade of rounds.
    pub fn tail_slope(&self) -> Option<f64> {
        let horizon = *self.t.last()? as f64;
        let pts: Vec<(f64, f64)> = self
            .t
            .iter()
            .zip(&self.mean)
            .filter(|(&t, _)| t as f64 >= horizon / 10.0)
            .map(|(&t, &m)| (t as f64, m))
            .collect();
        loglog_slope(&pts)
    }

    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub horizon: u64,
    pub checkpoints: Vec<u64>,
    pub runs: Vec<RunSummary>,
    pub curves: Vec<Curve>,
    pub assumptions: Option<AssumptionReport>,
}

impl Report {
    pub fn empty(horizon: u64) -> Self {
        Report {
            horizon,
            checkpoints: Vec::new(),
            runs: Vec::new(),
            curves: Vec::new(),
            assumptions: None,
        }
    }

    /// Builds curves for `labels` in order. Runs are sorted by id first.
    pub fn aggregate(
        horizon: u64,
        checkpoints: Vec<u64>,
        labels: &[String],
        mut runs: Vec<RunSummary>,
        assumptions: Option<AssumptionReport>,
    ) -> Self {
        runs.sort_by_key(|r| r.run_id);
        let curves = labels
            .iter()
            .map(|label| {
                let mine: Vec<&RunSummary> = runs.iter().filter(|r| &r.algorithm == label).collect();
                let mut curve = Curve {
                    algorithm: label.clone(),
                    t: Vec::new(),
                    mean: Vec::new(),
                    stderr: Vec::new(),
                };
                for &t in &checkpoints {
                    let values: Vec<f64> = mine.iter().filter_map(|r| r.cum_at(t)).collect();
                    if values.len() == mine.len() && !values.is_empty() {
                        let (m, s) = mean_stderr(&values);
                        curve.t.push(t);
                        curve.mean.push(m);
                        curve.stderr.push(s);
                    }
                }
                curve
            })
            .collect();
        Report {
            horizon,
            checkpoints,
            runs,
            curves,
            assumptions,
        }
    }

    pub fn curve(&self, algorithm: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.algorithm == algorithm)
    }

    /// Final cumulative regrets of one algorithm, in run order.
    pub fn final_regrets(&self, algorithm: &str) -> Vec<f64> {
        self.runs
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .map(|r| r.final_regret)
            .collect()
    }

    pub fn summary_rows(&self) -> Vec<SummaryRow> {
        self.curves
            .iter()
            .flat_map(|c| {
                (0..c.t.len()).map(move |i| SummaryRow {
                    algorithm: c.algorithm.clone(),
                    checkpoint_t: c.t[i],
                    mean: c.mean[i],
                    stderr: c.stderr[i],
                })
            })
            .collect()
    }

    /// One line per algorithm: final mean, stderr and tail slope.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for c in &self.curves {
            let i = c.t.len().saturating_sub(1);
            let slope = c.tail_slope().map_or("n/a".to_string(), |s| format!("{s:.3}"));
            out.push_str(&format!(
                "{:<20} final regret {:>12.2} +- {:<10.2} tail slope {slope}\n",
                c.algorithm,
                c.mean.get(i).copied().unwrap_or(0.0),
                c.stderr.get(i).copied().unwrap_or(0.0)
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretRow {
    pub run_id: usize,
    pub algorithm: String,
    pub seed: u64,
    pub t: u64,
    pub instant_regret: f64,
    pub cum_regret: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub checkpoint_t: u64,
    pub mean: f64,
    pub stderr: f64,
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    if e.is_io_error() {
        if let csv::ErrorKind::Io(io) = e.into_kind() {
            return Error::Io(io);
        }
        unreachable!("is_io_error implies an io kind");
    }
    Error::parse(line, e.to_string())
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    let line = record.position().map_or(0, |p| p.line() as usize);
    record
        .get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("bad `{name}` field")))
}

pub fn read_regret_csv(path: &Path) -> Result<Vec<RegretRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_error)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let r = record.map_err(csv_error)?;
        rows.push(RegretRow {
            run_id: field(&r, 0, "run_id")?,
            algorithm: field(&r, 1, "algorithm")?,
            seed: field(&r, 2, "seed")?,
            t: field(&r, 3, "t")?,
            instant_regret: field(&r, 4, "instant_regret")?,
            cum_regret: field(&r, 5, "cum_regret")?,
        });
    }
    Ok(rows)
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_error)?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let r = record.map_err(csv_error)?;
        rows.push(SummaryRow {
            algorithm: field(&r, 0, "algorithm")?,
            checkpoint_t: field(&r, 1, "checkpoint_t")?,
            mean: field(&r, 2, "mean")?,
            stderr: field(&r, 3, "stderr")?,
        });
    }
    Ok(rows)
}

/// Recomputes summary rows from raw regret rows on `grid`, keeping
/// algorithms in order of first appearance.
pub fn summarize_regret_rows(rows: &[RegretRow], grid: &[u64]) -> Vec<SummaryRow> {
    let mut labels: Vec<&str> = Vec::new();
    for r in rows {
        if !labels.contains(&r.algorithm.as_str()) {
            labels.push(&r.algorithm);
        }
    }
    let index: HashMap<(usize, u64), f64> = rows.iter().map(|r| ((r.run_id, r.t), r.cum_regret)).collect();
    let mut out = Vec::new();
    for label in labels {
        let mut run_ids: Vec<usize> = rows.iter().filter(|r| r.algorithm == label).map(|r| r.run_id).collect();
        run_ids.sort_unstable();
        run_ids.dedup();
        for &t in grid {
            let values: Vec<f64> = run_ids
                .iter()
                .filter_map(|&id| index.get(&(id, t)).copied())
                .collect();
            if values.len() == run_ids.len() && !values.is_empty() {
                let (mean, stderr) = mean_stderr(&values);
                out.push(SummaryRow {
                    algorithm: label.to_string(),
                    checkpoint_t: t,
                    mean,
                    stderr,
                });
            }
        }
    }
    out
}

/// Regroups summary rows into curves, in order of first appearance.
pub fn curves_from_summary(rows: &[SummaryRow]) -> Vec<Curve> {
    let mut curves: Vec<Curve> = Vec::new();
    for r in rows {
        let i = match curves.iter().position(|c| c.algorithm == r.algorithm) {
            Some(i) => i,
            None => {
                curves.push(Curve {
                    algorithm: r.algorithm.clone(),
                    t: Vec::new(),
                    mean: Vec::new(),
                    stderr: Vec::new(),
                });
                curves.len() - 1
            }
        };
        curves[i].t.push(r.checkpoint_t);
        curves[i].mean.push(r.mean);
        curves[i].stderr.push(r.stderr);
    }
    curves
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

fn io_of(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::parse(0, format!("{other:?}")),
    }
}

pub fn write_regret_csv(path: &Path, runs: &[RunSummary]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(REGRET_HEADER).map_err(io_of)?;
    for run in runs {
        for s in &run.samples {
            w.write_record([
                run.run_id.to_string(),
                run.algorithm.clone(),
                run.seed.to_string(),
                s.t.to_string(),
                fmt_f64(s.instant_regret),
                fmt_f64(s.cum_regret),
            ])
            .map_err(io_of)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(SUMMARY_HEADER).map_err(io_of)?;
    for r in rows {
        w.write_record([r.algorithm.clone(), r.checkpoint_t.to_string(), fmt_f64(r.mean), fmt_f64(r.stderr)])
            .map_err(io_of)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes regret.csv, summary.csv, phase_trace.csv, regret.svg (only when
/// there is at least one run) and assumptions.txt (only when checked).
/// Returns the paths written.
pub fn emit_report(report: &Report, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let regret = out_dir.join("regret.csv");
    write_regret_csv(&regret, &report.runs)?;
    written.push(regret);

    let summary = out_dir.join("summary.csv");
    write_summary_csv(&summary, &report.summary_rows())?;
    written.push(summary);

    let traces = out_dir.join("phase_trace.csv");
    let mut w = BufWriter::new(File::create(&traces)?);
    writeln!(w, "{PHASE_TRACE_HEADER}")?;
    for run in &report.runs {
        if let Some(trace) = &run.trace {
            write_phase_trace_csv(&mut w, (run.run_id, &run.algorithm, run.seed), trace)?;
        }
    }
    w.flush()?;
    written.push(traces);

    if !report.runs.is_empty() {
        let svg = out_dir.join("regret.svg");
        fs::write(&svg, render_regret_svg(&report.curves, report.horizon))?;
        written.push(svg);
    }
    if let Some(a) = &report.assumptions {
        let path = out_dir.join("assumptions.txt");
        fs::write(&path, a.to_string())?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_sorted_and_ends_at_horizon() {
        let g = checkpoint_grid(60000, 100);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g[0], 1);
        assert_eq!(*g.last().unwrap(), 60000);
        assert!(g.len() <= 101);
        assert_eq!(checkpoint_grid(5, 100), vec![1, 2, 3, 4, 5]);
        assert_eq!(checkpoint_grid(7, 0), vec![7]);
    }

    #[test]
    fn stderr_matches_hand_computation() {
        // mean 2, sample variance ((1)^2 + 0 + 1) / 2 = 1, stderr 1/sqrt(3)
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr(&[4.0]), (4.0, 0.0));
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x: &f64| (x, 3.0 * x.sqrt())).collect();
        assert!((loglog_slope(&pts).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(1.0, 1.0)]), None);
    }
}
