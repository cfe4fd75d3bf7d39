use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::env::io::fmt_f64;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Sets refined through the user graph.
    Joint,
    /// Partition frozen; arm sets shrink by intersection.
    Clusterwise,
    /// No oracle ran; every set is on per-user UCB.
    Ucb,
    /// No oracle ran because the horizon was nearly spent.
    Greedy,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Joint => "joint",
            Mode::Clusterwise => "clusterwise",
            Mode::Ucb => "ucb",
            Mode::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State at the end of one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecord {
    pub phase: usize,
    pub delta: f64,
    pub mode: Mode,
    /// User sets after the phase's refinement; a partition of all users.
    pub user_sets: Vec<Vec<usize>>,
    /// Active arms of each set, sorted.
    pub arm_sets: Vec<Vec<usize>>,
    /// Whether each set's users are on per-user UCB.
    pub on_ucb: Vec<bool>,
    pub start_round: u64,
    pub end_round: u64,
    pub oracle_rounds: u64,
    pub ucb_rounds: u64,
    pub filler_rounds: u64,
    pub greedy_rounds: u64,
    pub oracles: usize,
    pub oracle_error: Option<f64>,
    /// False when the horizon ended before the phase's oracles finished.
    pub complete: bool,
}

impl PhaseRecord {
    pub fn rounds_used(&self) -> u64 {
        self.end_round - self.start_round
    }

    pub fn set_of(&self, user: usize) -> usize {
        self.user_sets
            .iter()
            .position(|s| s.contains(&user))
            .expect("user sets cover every user")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhaseTrace {
    pub records: Vec<PhaseRecord>,
}

impl PhaseTrace {
    pub fn total_rounds(&self) -> u64 {
        self.records.iter().map(PhaseRecord::rounds_used).sum()
    }

    /// First phase whose refinement was cluster-wise.
    pub fn clusterwise_from(&self) -> Option<usize> {
        self.records.iter().find(|r| r.mode == Mode::Clusterwise).map(|r| r.phase)
    }
}

fn join(sizes: impl Iterator<Item = usize>) -> String {
    sizes.map(|s| s.to_string()).collect::<Vec<_>>().join(";")
}

pub const PHASE_TRACE_HEADER: &str = "run_id,algorithm,seed,phase,delta,mode,num_sets,set_sizes,arm_set_sizes,start_round,rounds_used,oracle_rounds,ucb_rounds,filler_rounds,greedy_rounds,oracle_error,complete";

/// Writes one CSV row per phase. `run` is `(run_id, algorithm, seed)`.
pub fn write_phase_trace_csv<W: Write>(w: &mut W, run: (usize, &str, u64), trace: &PhaseTrace) -> Result<()> {
    for r in &trace.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            run.0,
            run.1,
            run.2,
            r.phase,
            fmt_f64(r.delta),
            r.mode,
            r.user_sets.len(),
            join(r.user_sets.iter().map(Vec::len)),
            join(r.arm_sets.iter().map(Vec::len)),
            r.start_round,
            r.rounds_used(),
            r.oracle_rounds,
            r.ucb_rounds,
            r.filler_rounds,
            r.greedy_rounds,
            r.oracle_error.map(fmt_f64).unwrap_or_default(),
            r.complete
        )?;
    }
    Ok(())
}
