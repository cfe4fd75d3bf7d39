use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig};
use super::report::{checkpoint_grid, Report, RunSummary};
use crate::baselines::{run_explore_then_commit, run_per_user_ucb, run_simplified_lattice};
use crate::checker::{check_instance, CheckerConfig};
use crate::env::{Instance, RunHistory};
use crate::error::Result;
use crate::lattice::{run_lattice, PhaseTrace};
use crate::lattice_rcs::run_lattice_rcs;

/// One run of `algorithm`. LATTICE variants also return their phase trace.
pub fn run_algorithm(algorithm: &Algorithm, instance: &Instance, horizon: u64, seed: u64) -> Result<(RunHistory, Option<PhaseTrace>)> {
    Ok(match algorithm {
        Algorithm::Lattice(c) => {
            let run = run_lattice(instance, c, horizon, seed)?;
            (run.history, Some(run.trace))
        }
        Algorithm::LatticeRcs(c) => {
            let run = run_lattice_rcs(instance, c, horizon, seed)?;
            (run.history, Some(run.trace))
        }
        Algorithm::Ucb(c) => (run_per_user_ucb(instance, horizon, c.sigma, seed)?, None),
        Algorithm::Etc(c) => (run_explore_then_commit(instance, horizon, c, seed)?, None),
        Algorithm::SimplifiedLattice(c) => (run_simplified_lattice(instance, c, horizon, seed)?.history, None),
    })
}

/// Runs every (algorithm, seed) cell on the shared instance.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    let instance = config.instance.build()?;
    run_experiment_on(config, &instance)
}

/// [`run_experiment`] with an already built instance.
pub fn run_experiment_on(config: &ExperimentConfig, instance: &Instance) -> Result<Report> {
    let algorithms = config.validate()?;
    let grid = checkpoint_grid(config.horizon, config.checkpoints);
    let cells: Vec<(usize, usize, u64)> = algorithms
        .iter()
        .enumerate()
        .flat_map(|(a, _)| config.seeds.iter().map(move |&s| (a, s)))
        .enumerate()
        .map(|(id, (a, s))| (id, a, s))
        .collect();

    let runs: Vec<RunSummary> = cells
        .par_iter()
        .map(|&(run_id, a, seed)| {
            let label = config.algorithms[a].label().to_string();
            log::info!("run {run_id}: {label} seed {seed}");
            let (history, trace) = run_algorithm(&algorithms[a], instance, config.horizon, seed)?;
            Ok(RunSummary::from_history(run_id, label, seed, &history, &grid, config.full_history, trace))
        })
        .collect::<Result<_>>()?;

    let assumptions = if config.check {
        Some(check_instance(instance, &CheckerConfig::default(), config.instance.seed())?)
    } else {
        None
    };
    let labels: Vec<String> = config.algorithms.iter().map(|e| e.label().to_string()).collect();
    Ok(Report::aggregate(config.horizon, grid, &labels, runs, assumptions))
}
