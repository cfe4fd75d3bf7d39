use crate::env::{Environment, Instance, RunHistory};
use crate::error::Result;
use crate::lattice::UcbArmState;

/// Every user runs its own UCB over all arms.
pub fn run_per_user_ucb(instance: &Instance, horizon: u64, sigma: f64, seed: u64) -> Result<RunHistory> {
    let arms: Vec<usize> = (0..instance.num_arms()).collect();
    let mut states = vec![UcbArmState::new(arms, sigma, horizon); instance.num_users()];
    let mut env = Environment::new(instance, horizon, seed);
    while !env.is_done() {
        let mut pulled = (0, 0);
        let step = env.step(|u| {
            let k = states[u].select();
            pulled = (u, k);
            k
        })?;
        states[pulled.0].update(pulled.1, step.reward);
    }
    Ok(env.into_history())
}
