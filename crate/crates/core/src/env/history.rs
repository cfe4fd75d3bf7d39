/// One round of interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub t: u64,
    pub user: usize,
    pub arm: usize,
    pub reward: f64,
    /// `P[u, best(u)] - P[u, arm]`, never negative.
    pub regret: f64,
    pub cumulative_regret: f64,
}

/// Per-round log of a run together with its running regret.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunHistory {
    records: Vec<Record>,
}

impl RunHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        RunHistory {
            records: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, user: usize, arm: usize, reward: f64, regret: f64) -> Record {
        debug_assert!(regret >= 0.0);
        let t = self.records.len() as u64;
        let record = Record {
            t,
            user,
            arm,
            reward,
            regret,
            cumulative_regret: self.cumulative_regret() + regret,
        };
        self.records.push(record);
        record
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn cumulative_regret(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.cumulative_regret)
    }

    /// Cumulative regret after the first `rounds` rounds.
    pub fn cumulative_at(&self, rounds: usize) -> f64 {
        if rounds == 0 {
            0.0
        } else {
            self.records[rounds.min(self.records.len()) - 1].cumulative_regret
        }
    }

    /// Regret accrued in rounds `[from, to)`.
    pub fn regret_between(&self, from: usize, to: usize) -> f64 {
        self.cumulative_at(to) - self.cumulative_at(from)
    }
}
