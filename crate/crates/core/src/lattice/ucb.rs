/// Per-user UCB over a fixed arm list.
#[derive(Debug, Clone, PartialEq)]
pub struct UcbArmState {
    arms: Vec<usize>,
    counts: Vec<u64>,
    means: Vec<f64>,
    sigma: f64,
    log_horizon: f64,
}

impl UcbArmState {
    pub fn new(arms: Vec<usize>, sigma: f64, horizon: u64) -> Self {
        Self::with_log_horizon(arms, sigma, (horizon.max(2) as f64).ln())
    }

    pub fn with_log_horizon(arms: Vec<usize>, sigma: f64, log_horizon: f64) -> Self {
        assert!(!arms.is_empty(), "UCB needs at least one arm");
        let k = arms.len();
        UcbArmState {
            arms,
            counts: vec![0; k],
            means: vec![0.0; k],
            sigma,
            log_horizon,
        }
    }

    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    pub fn count(&self, k: usize) -> u64 {
        self.counts[k]
    }

    pub fn mean(&self, k: usize) -> f64 {
        self.means[k]
    }

    /// Local index of the arm with the largest index, ties to the lowest.
    pub fn select(&self) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for k in 0..self.arms.len() {
            let v = ucb_index(self, k);
            if v > best_val {
                best = k;
                best_val = v;
                if v == f64::INFINITY {
                    break;
                }
            }
        }
        best
    }

    pub fn update(&mut self, k: usize, reward: f64) {
        self.counts[k] += 1;
        self.means[k] += (reward - self.means[k]) / self.counts[k] as f64;
    }
}

/// `mean + sigma sqrt(6 log T / t)`, or infinity for an unplayed arm.
pub fn ucb_index(state: &UcbArmState, k: usize) -> f64 {
    let t = state.counts[k];
    if t == 0 {
        return f64::INFINITY;
    }
    state.means[k] + state.sigma * (6.0 * state.log_horizon / t as f64).sqrt()
}
