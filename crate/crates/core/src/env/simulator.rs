use rand::Rng;

use super::{Instance, NoiseModel, Record, RunHistory};
use crate::error::{Error, Result};
use crate::rng::{self, StreamRng};

/// Outcome of one round.
pub type Step = Record;

/// Simulates the interaction: every round a user is drawn uniformly, the
/// policy picks an arm, and a noisy reward is returned.
///
/// User arrivals and noise draw from separate streams of the run seed, so
/// two policies run with the same seed see the same user sequence.
pub struct Environment<'a> {
    instance: &'a Instance,
    noise: NoiseModel,
    horizon: u64,
    users: StreamRng,
    noise_rng: StreamRng,
    history: RunHistory,
}

impl<'a> Environment<'a> {
    /// Environment using the instance's own noise model.
    pub fn new(instance: &'a Instance, horizon: u64, seed: u64) -> Self {
        Self::with_noise(instance, instance.noise(), horizon, seed)
    }

    pub fn with_noise(instance: &'a Instance, noise: NoiseModel, horizon: u64, seed: u64) -> Self {
        Environment {
            instance,
            noise,
            horizon,
            users: rng::stream(seed, rng::USERS),
            noise_rng: rng::stream(seed, rng::NOISE),
            history: RunHistory::with_capacity(horizon.min(1 << 22) as usize),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Rounds played so far.
    pub fn round(&self) -> u64 {
        self.history.len() as u64
    }

    pub fn remaining(&self) -> u64 {
        self.horizon - self.round()
    }

    pub fn is_done(&self) -> bool {
        self.round() >= self.horizon
    }

    pub fn history(&self) -> &RunHistory {
        &self.history
    }

    pub fn into_history(self) -> RunHistory {
        self.history
    }

    /// Plays one round: samples a user, asks `choose` for an arm and records
    /// the noisy reward and the regret of the choice.
    pub fn step(&mut self, choose: impl FnOnce(usize) -> usize) -> Result<Step> {
        if self.is_done() {
            return Err(Error::HorizonReached(self.horizon));
        }
        let user = self.users.gen_range(0..self.instance.num_users());
        let arm = choose(user);
        let num_arms = self.instance.num_arms();
        if arm >= num_arms {
            return Err(Error::ArmOutOfRange { arm, num_arms });
        }
        let mean = self.instance.reward(user, arm);
        let reward = self.noise.sample(mean, &mut self.noise_rng);
        let regret = self.instance.user_gap(user, arm);
        Ok(self.history.push(user, arm, reward, regret))
    }
}
