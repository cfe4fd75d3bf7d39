use std::path::Path;

use super::config::ExperimentConfig;
use super::report::{csv_error, loglog_slope, mean_stderr};
use super::run::run_experiment_on;
use crate::env::io::fmt_f64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPoint {
    pub algorithm: String,
    pub horizon: u64,
    /// Final regrets in seed order.
    pub finals: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
}

impl ScalingReport {
    /// Least-squares log-log slope of mean final regret against horizon.
    pub fn slope(&self, algorithm: &str) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| p.algorithm == algorithm)
            .map(|p| (p.horizon as f64, p.mean))
            .collect();
        loglog_slope(&pts)
    }

    pub fn algorithms(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.points {
            if !out.contains(&p.algorithm) {
                out.push(p.algorithm.clone());
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
        let io = csv_error;
        w.write_record(["algorithm", "horizon", "mean_final_regret", "stderr", "runs"]).map_err(io)?;
        for p in &self.points {
            w.write_record([
                p.algorithm.clone(),
                p.horizon.to_string(),
                fmt_f64(p.mean),
                fmt_f64(p.stderr),
                p.finals.len().to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `config` once per horizon on the same instance and records the
/// final regret of every run.
pub fn run_scaling_study(config: &ExperimentConfig, horizons: &[u64]) -> Result<ScalingReport> {
    if horizons.is_empty() {
        return Err(Error::config("scaling.horizons", "need at least one horizon"));
    }
    let instance = config.instance.build()?;
    let mut points = Vec::new();
    for &horizon in horizons {
        let mut c = config.clone();
        c.horizon = horizon;
        c.checkpoints = 0;
        c.full_history = false;
        c.check = false;
        let report = run_experiment_on(&c, &instance)?;
        for entry in &config.algorithms {
            let finals = report.final_regrets(entry.label());
            let (mean, stderr) = mean_stderr(&finals);
            points.push(ScalingPoint {
                algorithm: entry.label().to_string(),
                horizon,
                finals,
                mean,
                stderr,
            });
        }
    }
    Ok(ScalingReport { points })
}
