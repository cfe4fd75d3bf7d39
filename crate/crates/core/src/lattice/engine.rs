use rand::Rng;

use super::{good_arm_set, build_user_graph, refine_partition, CPrime, GoodArmSet, LatticeConfig, LatticeRun};
use super::{Mode, PhaseRecord, PhaseTrace, UcbArmState};
use crate::completion::{derive_oracle_params, LowRankEstimator, Pull};
use crate::env::{Environment, Instance};
use crate::error::Result;
use crate::lattice_rcs::intersect_active_arms;
use crate::linalg::{max_abs, submatrix};
use crate::rng::{self, OracleStreams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Refinement {
    Cs,
    Rcs { nu: f64, edge_slack: f64 },
}

struct UserSet {
    users: Vec<usize>,
    arms: Vec<usize>,
    ucb: bool,
}

enum Action {
    Oracle(usize, Pull),
    Ucb(usize, usize),
    Filler,
    Greedy,
}

fn log_arms(m: usize) -> f64 {
    (m.max(2) as f64).ln()
}

pub(crate) fn run_engine(
    instance: &Instance,
    config: &LatticeConfig,
    refinement: Refinement,
    horizon: u64,
    seed: u64,
) -> Result<LatticeRun> {
    config.validate()?;
    let n = instance.num_users();
    let m = instance.num_arms();
    let c = config.clusters;
    let mut env = Environment::new(instance, horizon, seed);
    let mut policy = rng::stream(seed, rng::POLICY);
    let mut streams = OracleStreams::new(seed);
    let threshold = config.arm_threshold(m);
    let sigma_term = config.sigma * config.mu.sqrt() / log_arms(m);

    let mut sets = vec![UserSet {
        users: (0..n).collect(),
        arms: (0..m).collect(),
        ucb: false,
    }];
    let mut set_of = vec![0usize; n];
    let mut ucb: Vec<Option<UcbArmState>> = vec![None; n];
    let mut latest: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut c_prime = match config.c_prime {
        CPrime::Fixed { value } => value,
        CPrime::Auto { c: scale } if sigma_term > 0.0 => scale / c as f64 * sigma_term,
        CPrime::Auto { c: scale } => scale / c as f64,
    };
    let mut clusterwise = false;
    let mut fallbacks = 0;
    let mut trace = PhaseTrace::default();
    let mut ell = 1usize;

    while !env.is_done() {
        let mut delta = c_prime * 0.5f64.powi(ell as i32);
        for s in sets.iter_mut().filter(|s| !s.ucb && (s.arms.len() as f64) < threshold) {
            s.ucb = true;
            for &u in &s.users {
                ucb[u] = Some(UcbArmState::new(s.arms.clone(), config.sigma, horizon));
            }
        }
        let greedy = (env.remaining() as f64) < config.greedy_tail * horizon as f64;
        let mut oracles: Vec<Option<LowRankEstimator>> = sets
            .iter()
            .map(|s| {
                if s.ucb || greedy {
                    return None;
                }
                let params = derive_oracle_params(
                    s.users.len(),
                    s.arms.len(),
                    c,
                    config.mu,
                    config.sigma,
                    delta,
                    horizon,
                    &config.oracle,
                );
                Some(LowRankEstimator::new(
                    s.users.clone(),
                    s.arms.clone(),
                    params,
                    config.solver,
                    seed,
                    streams.allocate(),
                ))
            })
            .collect();
        let num_oracles = oracles.iter().flatten().count();

        let start = env.round();
        let mut counts = [0u64; 4];
        loop {
            if env.is_done() || (num_oracles > 0 && oracles.iter().flatten().all(|o| !o.is_waiting())) {
                break;
            }
            let mut action = Action::Filler;
            let step = env.step(|u| {
                if let Some(state) = &ucb[u] {
                    let k = state.select();
                    action = Action::Ucb(u, k);
                    return state.arms()[k];
                }
                let s = set_of[u];
                if let Some(o) = oracles[s].as_mut().filter(|o| o.is_waiting()) {
                    if let Some(pull) = o.serve(u) {
                        action = Action::Oracle(s, pull);
                        return pull.arm;
                    }
                }
                let arms = &sets[s].arms;
                if greedy && !latest[u].is_empty() {
                    action = Action::Greedy;
                    return latest[u]
                        .iter()
                        .filter(|(a, _)| arms.contains(a))
                        .fold(None::<(usize, f64)>, |best, &(a, v)| match best {
                            Some((_, bv)) if bv >= v => best,
                            _ => Some((a, v)),
                        })
                        .map_or(arms[0], |(a, _)| a);
                }
                arms[policy.gen_range(0..arms.len())]
            })?;
            match action {
                Action::Oracle(s, pull) => {
                    oracles[s].as_mut().expect("oracle served").record(&pull, step.reward);
                    counts[0] += 1;
                }
                Action::Ucb(u, k) => {
                    ucb[u].as_mut().expect("ucb user").update(k, step.reward);
                    counts[1] += 1;
                }
                Action::Filler => counts[2] += 1,
                Action::Greedy => counts[3] += 1,
            }
        }

        let complete = num_oracles == 0 || oracles.iter().flatten().all(|o| !o.is_waiting());
        let mut mode = if num_oracles == 0 {
            if greedy {
                Mode::Greedy
            } else {
                Mode::Ucb
            }
        } else if clusterwise {
            Mode::Clusterwise
        } else {
            Mode::Joint
        };
        let mut oracle_error = None;

        if num_oracles > 0 && complete {
            if ell == 1 {
                if let CPrime::Auto { c: scale } = config.c_prime {
                    let observed = oracles.iter().flatten().map(|o| o.max_abs_observation()).fold(0.0, f64::max);
                    let scale_est = if sigma_term > 0.0 { observed.min(sigma_term) } else { observed };
                    if scale_est > 0.0 {
                        c_prime = scale / c as f64 * scale_est;
                        delta = c_prime * 0.5;
                    }
                }
            }
            let (joint_slack, switch) = match refinement {
                Refinement::Cs => (2.0, false),
                Refinement::Rcs { nu, edge_slack } => (edge_slack, clusterwise || !(delta >= 2.0 * nu && sets.len() < c)),
            };
            if switch {
                clusterwise = true;
                mode = Mode::Clusterwise;
            }

            let mut next = Vec::with_capacity(sets.len());
            for (s, oracle) in sets.into_iter().zip(oracles.iter()) {
                let Some(oracle) = oracle else {
                    next.push(s);
                    continue;
                };
                let est = oracle.estimate()?;
                if config.track_oracle_error {
                    let truth = submatrix(instance.rewards(), &s.users, &s.arms);
                    let err = max_abs(&(&est.values - truth));
                    oracle_error = Some(oracle_error.map_or(err, |e: f64| e.max(err)));
                }
                let rows: Vec<Vec<f64>> = (0..s.users.len()).map(|i| est.row(i)).collect();
                let good: Vec<GoodArmSet> = s
                    .users
                    .iter()
                    .zip(&rows)
                    .map(|(&u, row)| good_arm_set(u, &s.arms, row, delta))
                    .collect();
                for (&u, row) in s.users.iter().zip(&rows) {
                    latest[u] = s.arms.iter().copied().zip(row.iter().copied()).collect();
                }
                if clusterwise {
                    let (arms, fell_back) = intersect_active_arms(&good);
                    if fell_back {
                        fallbacks += 1;
                        log::warn!("empty good-arm intersection in phase {ell}; using the union");
                    }
                    next.push(UserSet {
                        users: s.users,
                        arms,
                        ucb: false,
                    });
                } else {
                    let graph = build_user_graph(&s.users, &rows, &good, delta, joint_slack);
                    for (users, arms) in refine_partition(&graph, &good) {
                        next.push(UserSet { users, arms, ucb: false });
                    }
                }
            }
            sets = next;
            for (k, s) in sets.iter().enumerate() {
                for &u in &s.users {
                    set_of[u] = k;
                }
            }
        }

        trace.records.push(PhaseRecord {
            phase: ell,
            delta,
            mode,
            user_sets: sets.iter().map(|s| s.users.clone()).collect(),
            arm_sets: sets.iter().map(|s| s.arms.clone()).collect(),
            on_ucb: sets.iter().map(|s| s.ucb).collect(),
            start_round: start,
            end_round: env.round(),
            oracle_rounds: counts[0],
            ucb_rounds: counts[1],
            filler_rounds: counts[2],
            greedy_rounds: counts[3],
            oracles: num_oracles,
            oracle_error,
            complete,
        });
        ell += 1;
    }

    Ok(LatticeRun {
        history: env.into_history(),
        trace,
        intersection_fallbacks: fallbacks,
    })
}
