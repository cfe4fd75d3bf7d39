//! Checks shared by the property suites and the acceptance run. Each one
//! returns `Err` with a description of the first violation.
#![allow(dead_code)]

use std::collections::BTreeSet;

use latent_bandits::baselines::SimplifiedRun;
use latent_bandits::bench::{
    emit_report, read_regret_csv, read_summary_csv, run_experiment, summarize_regret_rows, Algorithm,
    ExperimentConfig, InstanceSpec, UcbConfig,
};
use latent_bandits::checker::{check_instance, check_nice_submatrix, subset_smoothness_estimate, CheckerConfig};
use latent_bandits::completion::{solve_nuclear_norm, SolverSettings};
use latent_bandits::env::{Instance, NoiseModel, RowDistribution, RunHistory};
use latent_bandits::lattice::{
    build_user_graph, good_arm_set, refine_partition, ucb_index, GoodArmSet, LatticeConfig, LatticeRun, Mode,
    PhaseTrace, UcbArmState,
};
use latent_bandits::lattice_rcs::intersect_active_arms;
use latent_bandits::linalg::{entrywise_median, Matrix};
use latent_bandits::rng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub const GAUSS: RowDistribution = RowDistribution::Gaussian { mean: 0.0, std: 1.0 };

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn small_lattice(clusters: usize, sigma: f64) -> LatticeConfig {
    LatticeConfig::desk_scale(clusters, sigma)
}

// ---------------------------------------------------------------- env

pub fn check_regret_ledger(h: &RunHistory, horizon: u64) -> Check {
    ensure(h.len() as u64 == horizon, || format!("{} records for horizon {horizon}", h.len()))?;
    let mut prev = 0.0;
    for (i, r) in h.records().iter().enumerate() {
        ensure(r.t == i as u64, || format!("record {i} has t = {}", r.t))?;
        ensure(r.regret >= 0.0, || format!("negative regret {} at round {}", r.regret, r.t))?;
        ensure(r.cumulative_regret >= prev, || format!("cumulative regret decreased at round {}", r.t))?;
        prev = r.cumulative_regret;
    }
    Ok(())
}

// ---------------------------------------------------------------- completion

/// Random partially observed low-rank problem; returns the violation, if
/// any, of per-iteration objective monotonicity.
pub fn check_objective_monotone(seed: u64, rows: usize, cols: usize, rank: usize, p: f64, noise: f64, lambda: f64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Matrix::from_fn(rows, rank, |_, _| rng.gen_range(-1.0..1.0));
    let b = Matrix::from_fn(rank, cols, |_, _| rng.gen_range(-1.0..1.0));
    let truth = a * b;
    let mut observed = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(p) {
                observed.push((i, j, truth[(i, j)] + noise * rng.gen_range(-1.0..1.0)));
            }
        }
    }
    let out = solve_nuclear_norm(&observed, (rows, cols), lambda, &SolverSettings::default());
    for (k, w) in out.objective.windows(2).enumerate() {
        ensure(w[1] <= w[0], || format!("objective rose at iteration {}: {} -> {}", k + 1, w[0], w[1]))?;
    }
    Ok(())
}

/// Corrupts fewer than half of `f` estimates at one entry and checks the
/// median stays within the span of the clean values there.
pub fn check_median_robust(seed: u64, f: usize, corrupt: usize, magnitude: f64) -> Check {
    assert!(2 * corrupt < f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, c) = (3, 4);
    let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..c));
    let mut mats: Vec<Matrix> = (0..f).map(|_| Matrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))).collect();
    let clean: Vec<f64> = mats[corrupt..].iter().map(|m| m[(i, j)]).collect();
    for (k, m) in mats.iter_mut().take(corrupt).enumerate() {
        m[(i, j)] = if k % 2 == 0 { magnitude } else { -magnitude };
    }
    let med = entrywise_median(&mats)[(i, j)];
    let lo = clean.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = clean.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    ensure(lo <= med && med <= hi, || format!("median {med} outside clean span [{lo}, {hi}]"))
}

// ---------------------------------------------------------------- lattice

pub fn check_partition(sets: &[Vec<usize>], n: usize) -> Check {
    let mut seen = vec![false; n];
    for s in sets {
        ensure(!s.is_empty(), || "empty user set".to_string())?;
        for &u in s {
            ensure(u < n, || format!("user {u} out of range"))?;
            ensure(!seen[u], || format!("user {u} appears twice"))?;
            seen[u] = true;
        }
    }
    ensure(seen.iter().all(|&s| s), || "some user is in no set".to_string())
}

pub fn check_trace_partitions(trace: &PhaseTrace, n: usize) -> Check {
    for r in &trace.records {
        check_partition(&r.user_sets, n).map_err(|e| format!("phase {}: {e}", r.phase))?;
        ensure(r.arm_sets.len() == r.user_sets.len(), || format!("phase {}: arm/user set count", r.phase))?;
    }
    Ok(())
}

pub fn check_round_accounting(run: &LatticeRun, horizon: u64) -> Check {
    ensure(run.history.len() as u64 == horizon, || format!("history has {} rounds", run.history.len()))?;
    ensure(run.trace.total_rounds() == horizon, || {
        format!("phases account for {} of {horizon} rounds", run.trace.total_rounds())
    })?;
    let mut start = 0;
    for r in &run.trace.records {
        ensure(r.start_round == start, || format!("phase {} starts at {} not {start}", r.phase, r.start_round))?;
        let parts = r.oracle_rounds + r.ucb_rounds + r.filler_rounds + r.greedy_rounds;
        ensure(parts == r.rounds_used(), || {
            format!("phase {}: {parts} categorized of {} rounds", r.phase, r.rounds_used())
        })?;
        start = r.end_round;
    }
    Ok(())
}

/// With exact rewards, the worst suboptimality a user can suffer inside its
/// set never increases from one phase to the next.
pub fn check_set_quality_monotone(run: &LatticeRun, inst: &Instance) -> Check {
    let quality = |sets: &[Vec<usize>], arms: &[Vec<usize>], idx: usize| {
        let mut q: f64 = 0.0;
        for &u in &sets[idx] {
            for &k in &arms[idx] {
                q = q.max(inst.user_gap(u, k));
            }
        }
        q
    };
    for w in run.trace.records.windows(2) {
        for u in 0..inst.num_users() {
            let (a, b) = (w[0].set_of(u), w[1].set_of(u));
            let qa = quality(&w[0].user_sets, &w[0].arm_sets, a);
            let qb = quality(&w[1].user_sets, &w[1].arm_sets, b);
            ensure(qb <= qa + 1e-12, || format!("user {u}: set quality {qa} -> {qb} at phase {}", w[1].phase))?;
        }
    }
    Ok(())
}

fn brute_good(arms: &[usize], row: &[f64], delta: f64) -> Vec<usize> {
    let mut best = f64::NEG_INFINITY;
    for &v in row {
        if v > best {
            best = v;
        }
    }
    let mut out = Vec::new();
    for (k, &arm) in arms.iter().enumerate() {
        if row[k] >= best - 2.0 * delta {
            out.push(arm);
        }
    }
    out
}

fn brute_components(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<BTreeSet<usize>> {
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            for b in 0..n {
                if a != b && edge(a.min(b), a.max(b)) && label[b] > label[a] {
                    label[b] = label[a];
                    changed = true;
                }
            }
        }
    }
    let mut groups: Vec<BTreeSet<usize>> = Vec::new();
    for l in BTreeSet::from_iter(label.iter().copied()) {
        groups.push((0..n).filter(|&i| label[i] == l).collect());
    }
    groups
}

/// Random estimate table over a few users and arms, with values on a
/// coarse grid so that ties and boundary cases occur.
pub fn random_table(seed: u64, users: usize, arms: usize) -> (Vec<usize>, Vec<usize>, Vec<Vec<f64>>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let user_ids: Vec<usize> = (0..users).map(|i| 3 * i + rng.gen_range(0..3)).collect();
    let arm_ids: Vec<usize> = (0..arms).map(|k| 2 * k + rng.gen_range(0..2)).collect();
    let rows: Vec<Vec<f64>> = (0..users)
        .map(|_| (0..arms).map(|_| rng.gen_range(0..9) as f64 * 0.125).collect())
        .collect();
    let delta = rng.gen_range(1..5) as f64 * 0.0625;
    (user_ids, arm_ids, rows, delta)
}

pub fn check_good_arms_and_graph(seed: u64, users: usize, arms: usize, slack: f64) -> Check {
    let (uid, aid, rows, delta) = random_table(seed, users, arms);
    let good: Vec<GoodArmSet> = (0..users).map(|i| good_arm_set(uid[i], &aid, &rows[i], delta)).collect();
    for i in 0..users {
        let want = brute_good(&aid, &rows[i], delta);
        ensure(good[i].arms == want, || format!("user {}: good arms {:?} vs {:?}", uid[i], good[i].arms, want))?;
    }
    let edge = |a: usize, b: usize| {
        let close = (0..arms).all(|k| (rows[a][k] - rows[b][k]).abs() <= slack * delta);
        let shared = good[a].arms.iter().any(|x| good[b].arms.contains(x));
        close && shared
    };
    let graph = build_user_graph(&uid, &rows, &good, delta, slack);
    for a in 0..users {
        for b in a + 1..users {
            ensure(graph.has_edge(uid[a], uid[b]) == edge(a, b), || {
                format!("edge ({}, {}) disagrees with the rule", uid[a], uid[b])
            })?;
        }
    }
    let mut want: Vec<(Vec<usize>, Vec<usize>)> = brute_components(users, edge)
        .into_iter()
        .map(|c| {
            let mut us: Vec<usize> = c.iter().map(|&i| uid[i]).collect();
            us.sort_unstable();
            let arms: BTreeSet<usize> = c.iter().flat_map(|&i| good[i].arms.iter().copied()).collect();
            (us, arms.into_iter().collect())
        })
        .collect();
    want.sort_by_key(|(us, _)| us[0]);
    let got = refine_partition(&graph, &good);
    ensure(got == want, || format!("components {got:?} vs {want:?}"))
}

pub fn check_intersection(seed: u64, users: usize, arms: usize) -> Check {
    let (uid, aid, rows, delta) = random_table(seed, users, arms);
    let good: Vec<GoodArmSet> = (0..users).map(|i| good_arm_set(uid[i], &aid, &rows[i], delta)).collect();
    let all: BTreeSet<usize> = aid.iter().copied().collect();
    let inter: BTreeSet<usize> = all.iter().copied().filter(|a| good.iter().all(|g| g.arms.contains(a))).collect();
    let union: BTreeSet<usize> = good.iter().flat_map(|g| g.arms.iter().copied()).collect();
    let (got, fallback) = intersect_active_arms(&good);
    let want: Vec<usize> = if inter.is_empty() { union.into_iter().collect() } else { inter.iter().copied().collect() };
    ensure(got == want && fallback == inter.is_empty(), || format!("intersection {got:?}/{fallback} vs {want:?}"))
}

/// Plays a random reward sequence through [`UcbArmState`] and compares the
/// index and selection with direct evaluation of the formula.
pub fn check_ucb_index(seed: u64, arms: usize, steps: usize, sigma: f64, horizon: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = UcbArmState::new((0..arms).map(|k| 10 + k).collect(), sigma, horizon);
    let mut sums = vec![0.0; arms];
    let mut counts = vec![0u64; arms];
    let log_t = (horizon.max(2) as f64).ln();
    for _ in 0..steps {
        let idx: Vec<f64> = (0..arms)
            .map(|k| {
                if counts[k] == 0 {
                    f64::INFINITY
                } else {
                    sums[k] / counts[k] as f64 + sigma * (6.0 * log_t / counts[k] as f64).sqrt()
                }
            })
            .collect();
        for (k, &want) in idx.iter().enumerate() {
            let got = ucb_index(&state, k);
            let ok = if want.is_infinite() { got.is_infinite() } else { (got - want).abs() <= 1e-12 * want.abs().max(1.0) };
            ensure(ok, || format!("index of arm {k}: {got} vs {}", want))?;
        }
        let top = idx.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let want = idx.iter().position(|&v| v == top).unwrap();
        let k = state.select();
        ensure(k == want, || format!("selected {k}, brute force chose {want}"))?;
        let reward = rng.gen_range(-1.0..1.0);
        state.update(k, reward);
        sums[k] += reward;
        counts[k] += 1;
    }
    Ok(())
}

// ---------------------------------------------------------------- lattice_rcs

/// Once cluster-wise mode starts the partition is frozen, and without
/// fallbacks every set's arms shrink under inclusion.
pub fn check_rcs_modes(run: &LatticeRun) -> Check {
    let Some(first) = run.trace.records.iter().position(|r| r.mode == Mode::Clusterwise) else {
        return Ok(());
    };
    let recs = &run.trace.records[first..];
    for w in recs.windows(2) {
        ensure(w[1].mode != Mode::Joint, || format!("joint mode after cluster-wise at phase {}", w[1].phase))?;
        ensure(w[1].user_sets == w[0].user_sets, || format!("partition changed at phase {}", w[1].phase))?;
        if run.intersection_fallbacks == 0 && w[1].mode == Mode::Clusterwise {
            for (a, b) in w[0].arm_sets.iter().zip(&w[1].arm_sets) {
                ensure(b.iter().all(|k| a.contains(k)), || format!("arm set grew at phase {}", w[1].phase))?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- baselines

/// Each user tries every arm once before repeating any.
pub fn check_ucb_round_robin(h: &RunHistory, users: usize, arms: usize) -> Check {
    let mut seen: Vec<Vec<bool>> = vec![vec![false; arms]; users];
    let mut pulls = vec![0usize; users];
    for r in h.records() {
        if pulls[r.user] < arms {
            ensure(!seen[r.user][r.arm], || format!("user {} repeated arm {} early", r.user, r.arm))?;
            seen[r.user][r.arm] = true;
        }
        pulls[r.user] += 1;
    }
    Ok(())
}

pub fn check_simplified_phases(run: &SimplifiedRun, users: usize, clustering_phases: usize) -> Check {
    for (i, p) in run.phases.iter().enumerate() {
        check_partition(&p.user_sets, users).map_err(|e| format!("phase {}: {e}", p.phase))?;
        if i == 0 {
            continue;
        }
        let prev = &run.phases[i - 1];
        if p.phase > clustering_phases {
            ensure(p.user_sets == prev.user_sets, || format!("partition refined at phase {}", p.phase))?;
        }
        if p.user_sets == prev.user_sets {
            for (a, b) in prev.arm_sets.iter().zip(&p.arm_sets) {
                ensure(b.iter().all(|k| a.contains(k)), || format!("arm set grew at phase {}", p.phase))?;
            }
        }
    }
    Ok(())
}

/// Arms chosen before the commit point must not depend on the rewards:
/// two instances of the same shape give the same exploration sequence.
pub fn check_etc_oblivious(a: &RunHistory, b: &RunHistory, commit: usize) -> Check {
    for (ra, rb) in a.records()[..commit].iter().zip(&b.records()[..commit]) {
        ensure(ra.user == rb.user && ra.arm == rb.arm, || format!("exploration differs at round {}", ra.t))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- checker

/// Lemma-style bounds on nice submatrices of `inst`. The condition number
/// is checked on the full arm set, the incoherence bounds on `arms`.
pub fn check_nice_bounds(inst: &Instance, clusters: &[usize], arms: &[usize], seed: u64) -> Check {
    let report = check_instance(inst, &CheckerConfig::default(), seed).map_err(|e| e.to_string())?;
    let all: Vec<usize> = (0..inst.num_arms()).collect();
    let full = check_nice_submatrix(inst, clusters, &all, &report, 1e-9).map_err(|e| e.to_string())?;
    ensure(full.kappa_holds(1e-6), || format!("kappa {} above {}", full.kappa, full.kappa_bound))?;
    let sub = check_nice_submatrix(inst, clusters, arms, &report, 1e-9).map_err(|e| e.to_string())?;
    ensure(sub.u_norm <= sub.u_bound + 1e-6, || format!("U norm {} above {}", sub.u_norm, sub.u_bound))?;
    ensure(sub.v_norm <= sub.v_bound + 1e-6, || format!("V norm {} above {}", sub.v_norm, sub.v_bound))
}

/// The estimate from the first `k` subsets can only drop as `k` grows,
/// because draws are sequential from the same stream.
pub fn check_alpha_nested(v: &Matrix, gamma: f64, c: usize, seed: u64, counts: &[usize]) -> Check {
    let mut prev = f64::INFINITY;
    for &k in counts {
        let mut r = rng::stream(seed, rng::CHECKER);
        let a = subset_smoothness_estimate(v, gamma, c, k, &mut r);
        ensure(a <= prev, || format!("alpha rose from {prev} to {a} at {k} subsets"))?;
        prev = a;
    }
    Ok(())
}

// ---------------------------------------------------------------- bench

pub fn tiny_experiment(seeds: Vec<u64>, full_history: bool) -> ExperimentConfig {
    let instance = InstanceSpec::Cs {
        users: 8,
        arms: 6,
        clusters: 2,
        rows: GAUSS,
        noise: NoiseModel::gaussian(0.3),
        seed: 5,
    };
    let algs = [Algorithm::Lattice(small_lattice(2, 0.3)), Algorithm::Ucb(UcbConfig { sigma: 0.3 })];
    let mut c = ExperimentConfig::new(instance, &algs, 600, seeds);
    c.full_history = full_history;
    c.checkpoints = 20;
    c
}

/// Writes the report, reads `regret.csv` back, recomputes the checkpoint
/// means and compares them with `summary.csv` exactly. Also parses the SVG.
pub fn check_report_round_trip(config: &ExperimentConfig) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = run_experiment(config).map_err(|e| e.to_string())?;
    emit_report(&report, dir.path()).map_err(|e| e.to_string())?;
    let rows = read_regret_csv(&dir.path().join("regret.csv")).map_err(|e| e.to_string())?;
    let recomputed = summarize_regret_rows(&rows, &report.checkpoints);
    let written = read_summary_csv(&dir.path().join("summary.csv")).map_err(|e| e.to_string())?;
    ensure(recomputed == written, || "summary.csv differs from means recomputed from regret.csv".into())?;
    ensure(written == report.summary_rows(), || "summary.csv differs from the in-memory report".into())?;
    let svg = std::fs::read_to_string(dir.path().join("regret.svg")).map_err(|e| e.to_string())?;
    roxmltree::Document::parse(&svg).map_err(|e| format!("svg: {e}"))?;
    Ok(())
}

pub fn check_config_round_trip(config: &ExperimentConfig) -> Check {
    let once = config.to_toml_string();
    let parsed = ExperimentConfig::from_toml_str(&once).map_err(|e| e.to_string())?;
    let twice = parsed.to_toml_string();
    ensure(once == twice, || format!("not a fixed point:\n{once}\n---\n{twice}"))?;
    ensure(&parsed == config, || "parsed config differs".into())
}

pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases: n,
        failure_persistence: None,
        ..Default::default()
    }
}
