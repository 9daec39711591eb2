//! Comparison learners: classical UCB over all `k^N` assignments,
//! combinatorial UCB over (unit, local configuration) base arms, network
//! explore-then-commit, and sequential action elimination.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{checked_pow, BanditInstance, LocalConfigs, RegretMeter, RunReport};
use crate::error::{Error, Result};
use crate::graph::{greedy_square_coloring, InterferenceGraph};
use crate::oracle::{Oracle, OracleMode, ScoreTables, DEFAULT_BUDGET};
use crate::pucb::{build_init_schedule, Confidence, CountTable};

/// Assignment `index` of `[k]^N` in lexicographic order (unit 0 is the most
/// significant digit).
pub fn assignment_at(index: usize, n_units: usize, k: usize) -> Vec<usize> {
    let mut arms = vec![0; n_units];
    let mut rest = index;
    for slot in arms.iter_mut().rev() {
        *slot = rest % k;
        rest /= k;
    }
    arms
}

fn arm_space(inst: &BanditInstance, budget: u64) -> Result<usize> {
    match checked_pow(inst.k(), inst.n_units()) {
        Some(s) if s as u64 <= budget => Ok(s),
        _ => Err(Error::TooLarge {
            space: format!("{}^{}", inst.k(), inst.n_units()),
            budget,
        }),
    }
}

fn mean_reward(rewards: &[f64]) -> f64 {
    rewards.iter().sum::<f64>() / rewards.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalUcbConfig {
    pub horizon: usize,
    #[serde(default)]
    pub confidence: Confidence,
    #[serde(default = "default_budget")]
    pub arm_budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

/// UCB over every full assignment, on the per-round average reward. The
/// theoretical δ uses the graph-free count `k^N` of configurations.
pub fn run_classical_ucb<R: Rng + ?Sized>(
    inst: &BanditInstance,
    cfg: &ClassicalUcbConfig,
    rng: &mut R,
) -> Result<RunReport> {
    let n_arms = arm_space(inst, cfg.arm_budget)?;
    let n = inst.n_units();
    let log_term = cfg.confidence.log_term(n, cfg.horizon, &[n_arms])?;
    let mut counts = vec![0u64; n_arms];
    let mut sums = vec![0.0f64; n_arms];
    let mut meter = RegretMeter::new(inst, cfg.horizon)?;
    let mut rewards = Vec::with_capacity(n);
    let mut arms = Vec::new();
    for t in 0..cfg.horizon {
        let arm = if t < n_arms {
            t
        } else {
            let mut best = 0;
            let mut best_score = f64::NEG_INFINITY;
            for a in 0..n_arms {
                let c = counts[a] as f64;
                let score = sums[a] / c + (2.0 * log_term / (n as f64 * c)).sqrt();
                if score > best_score {
                    best_score = score;
                    best = a;
                }
            }
            best
        };
        arms = assignment_at(arm, n, inst.k());
        inst.sample_into(&arms, rng, &mut rewards);
        counts[arm] += 1;
        sums[arm] += mean_reward(&rewards);
        meter.record(&arms);
    }
    Ok(RunReport {
        trace: meter.finish(),
        warmup_rounds: n_arms.min(cfg.horizon),
        oracle: None,
        final_assignment: arms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CucbConfig {
    pub horizon: usize,
    #[serde(default)]
    pub oracle: OracleMode,
}

/// Per-unit tables `μ̂_i(c) + sqrt(3 ln t / (2 n_i(c)))` with no sharing
/// across units.
pub fn cucb_score_tables(
    state: &CountTable,
    configs: &LocalConfigs,
    round: usize,
) -> Result<ScoreTables> {
    let log_t = (round.max(1) as f64).ln();
    let mut tables = ScoreTables::zeros(configs);
    for i in 0..configs.n_units() {
        for (code, slot) in tables.unit_mut(i).iter_mut().enumerate() {
            let n = state.count(i, code);
            if n == 0 {
                return Err(Error::Unexplored { class: i, code });
            }
            *slot = state.sum(i, code) / n as f64 + (3.0 * log_t / (2.0 * n as f64)).sqrt();
        }
    }
    Ok(tables)
}

/// Combinatorial UCB with (unit, local configuration) base arms, using the
/// same initialization schedule as PUCB-I.
pub fn run_cucb<R: Rng + ?Sized>(
    inst: &BanditInstance,
    g_known: &InterferenceGraph,
    cfg: &CucbConfig,
    rng: &mut R,
) -> Result<RunReport> {
    if g_known.n_units() != inst.n_units() {
        return Err(Error::ConfigInvalid(
            "believed graph has the wrong number of units".into(),
        ));
    }
    let oracle = Oracle::new(g_known, inst.k(), cfg.oracle)?;
    oracle.planned_path()?;
    let configs = oracle.configs();
    let schedule = build_init_schedule(g_known, &greedy_square_coloring(g_known), inst.k())?;
    if cfg.horizon < schedule.len() {
        return Err(Error::HorizonTooShort {
            horizon: cfg.horizon,
            required: schedule.len(),
        });
    }
    let mut state = CountTable::new(configs);
    let mut meter = RegretMeter::new(inst, cfg.horizon)?;
    let mut rewards = Vec::with_capacity(inst.n_units());
    let mut last = Vec::new();
    for arms in schedule.assignments() {
        inst.sample_into(arms, rng, &mut rewards);
        state.record(configs, arms, &rewards);
        meter.record(arms);
        last.clone_from(arms);
    }
    let mut path = None;
    for round in schedule.len()..cfg.horizon {
        let tables = cucb_score_tables(&state, configs, round)?;
        let choice = oracle.maximize(&tables, rng)?;
        path = Some(choice.path);
        inst.sample_into(&choice.assignment, rng, &mut rewards);
        state.record(configs, &choice.assignment, &rewards);
        meter.record(&choice.assignment);
        last = choice.assignment;
    }
    Ok(RunReport {
        trace: meter.finish(),
        warmup_rounds: schedule.len(),
        oracle: path,
        final_assignment: last,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtcConfig {
    pub horizon: usize,
    /// Uniform-exploration rounds; defaults to
    /// `ceil(T^(2/3) · (k^(Δ+1))^(1/3))`, capped at `T`.
    #[serde(default)]
    pub explore_rounds: Option<usize>,
    #[serde(default)]
    pub oracle: OracleMode,
}

impl EtcConfig {
    pub fn explore_rounds_for(&self, g_known: &InterferenceGraph, k: usize) -> usize {
        let rounds = self.explore_rounds.unwrap_or_else(|| {
            let configs = (k as f64).powi(g_known.max_degree() as i32 + 1);
            ((self.horizon as f64).powf(2.0 / 3.0) * configs.cbrt()).ceil() as usize
        });
        rounds.min(self.horizon)
    }
}

/// Sample means per local configuration, 0 where unobserved. With one
/// indicator per local configuration these are the least-squares
/// coefficients.
pub fn etc_estimates(state: &CountTable, configs: &LocalConfigs) -> ScoreTables {
    let mut tables = ScoreTables::zeros(configs);
    for i in 0..configs.n_units() {
        for (code, slot) in tables.unit_mut(i).iter_mut().enumerate() {
            *slot = state.mean(i, code).unwrap_or(0.0);
        }
    }
    tables
}

/// Uniformly random assignments for the exploration phase, then the
/// oracle's maximizer of the estimated means for the rest of the horizon.
pub fn run_network_etc<R: Rng + ?Sized>(
    inst: &BanditInstance,
    g_known: &InterferenceGraph,
    cfg: &EtcConfig,
    rng: &mut R,
) -> Result<RunReport> {
    if g_known.n_units() != inst.n_units() {
        return Err(Error::ConfigInvalid(
            "believed graph has the wrong number of units".into(),
        ));
    }
    let k = inst.k();
    let explore = cfg.explore_rounds_for(g_known, k);
    let oracle = Oracle::new(g_known, k, cfg.oracle)?;
    let configs = oracle.configs();
    let mut state = CountTable::new(configs);
    let mut meter = RegretMeter::new(inst, cfg.horizon)?;
    let mut rewards = Vec::with_capacity(inst.n_units());
    let mut arms = vec![0; inst.n_units()];
    for _ in 0..explore {
        for a in arms.iter_mut() {
            *a = rng.gen_range(0..k);
        }
        inst.sample_into(&arms, rng, &mut rewards);
        state.record(configs, &arms, &rewards);
        meter.record(&arms);
    }
    let mut path = None;
    if explore < cfg.horizon {
        let commit = oracle.maximize(&etc_estimates(&state, configs), rng)?;
        path = Some(commit.path);
        arms = commit.assignment;
        for _ in explore..cfg.horizon {
            meter.record(&arms);
        }
    }
    Ok(RunReport {
        trace: meter.finish(),
        warmup_rounds: explore,
        oracle: path,
        final_assignment: arms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaeConfig {
    pub horizon: usize,
    #[serde(default = "default_budget")]
    pub arm_budget: u64,
}

/// Elimination radius after `epoch` pulls of every active assignment:
/// `sqrt(2 log(2 k^N T) / (N · epoch))`.
pub fn sae_radius(n_units: usize, n_arms: usize, horizon: usize, epoch: usize) -> f64 {
    (2.0 * (2.0 * n_arms as f64 * horizon as f64).ln() / (n_units as f64 * epoch as f64)).sqrt()
}

/// Sequential action elimination over all `k^N` assignments: each epoch
/// pulls every active assignment once, then drops those whose upper bound
/// falls below the best lower bound.
pub fn run_sae<R: Rng + ?Sized>(
    inst: &BanditInstance,
    cfg: &SaeConfig,
    rng: &mut R,
) -> Result<RunReport> {
    let n_arms = arm_space(inst, cfg.arm_budget)?;
    let n = inst.n_units();
    let k = inst.k();
    let mut active: Vec<usize> = (0..n_arms).collect();
    let mut sums = vec![0.0f64; n_arms];
    let mut meter = RegretMeter::new(inst, cfg.horizon)?;
    let mut rewards = Vec::with_capacity(n);
    let mut arms = Vec::new();
    let mut played = 0;
    let mut epoch = 0;
    let mut first_epoch_len = 0;

    'epochs: while played < cfg.horizon {
        if active.len() == 1 {
            arms = assignment_at(active[0], n, k);
            while played < cfg.horizon {
                inst.sample_into(&arms, rng, &mut rewards);
                meter.record(&arms);
                played += 1;
            }
            break;
        }
        epoch += 1;
        for &a in &active {
            if played == cfg.horizon {
                break 'epochs;
            }
            arms = assignment_at(a, n, k);
            inst.sample_into(&arms, rng, &mut rewards);
            sums[a] += mean_reward(&rewards);
            meter.record(&arms);
            played += 1;
        }
        if epoch == 1 {
            first_epoch_len = played;
        }
        let radius = sae_radius(n, n_arms, cfg.horizon, epoch);
        let e = epoch as f64;
        let best_lower = active
            .iter()
            .map(|&a| sums[a] / e - radius)
            .fold(f64::NEG_INFINITY, f64::max);
        active.retain(|&a| sums[a] / e + radius >= best_lower);
    }
    Ok(RunReport {
        trace: meter.finish(),
        warmup_rounds: first_epoch_len,
        oracle: None,
        final_assignment: arms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::MeanTable;
    use crate::graph::random_bounded_degree_graph;
    use crate::graph::tests::path;
    use crate::instances::random_instance;
    use crate::oracle::brute_force_argmax;
    use crate::pucb::PucbLearner;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EXACT: OracleMode = OracleMode::Exact {
        budget: DEFAULT_BUDGET,
    };

    fn flat(g: &InterferenceGraph) -> BanditInstance {
        let configs = LocalConfigs::new(g, 2).unwrap();
        let means = MeanTable(configs.table_lens().iter().map(|&l| vec![0.4; l]).collect());
        BanditInstance::new(g.clone(), 2, means).unwrap()
    }

    /// Unit `i`'s mean depends only on its own arm, so any graph over the
    /// same units yields the same per-unit means.
    fn own_arm_instance(g: &InterferenceGraph, values: &[[f64; 2]]) -> BanditInstance {
        let configs = LocalConfigs::new(g, 2).unwrap();
        let means = (0..g.n_units())
            .map(|i| {
                (0..configs.table_len(i))
                    .map(|c| values[i][c % 2])
                    .collect()
            })
            .collect();
        BanditInstance::new(g.clone(), 2, MeanTable(means)).unwrap()
    }

    fn assert_trace_invariants(report: &RunReport, horizon: usize) {
        let t = &report.trace;
        assert_eq!(t.len(), horizon);
        assert!(t.instantaneous().iter().all(|&r| r >= 0.0));
        assert!(t.cumulative().windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn lexicographic_indexing() {
        assert_eq!(assignment_at(0, 3, 2), vec![0, 0, 0]);
        assert_eq!(assignment_at(1, 3, 2), vec![0, 0, 1]);
        assert_eq!(assignment_at(6, 3, 2), vec![1, 1, 0]);
        assert_eq!(assignment_at(5, 2, 3), vec![1, 2]);
    }

    #[test]
    fn classical_ucb_examples() {
        let single = BanditInstance::new(
            InterferenceGraph::new(1, &[]).unwrap(),
            2,
            MeanTable(vec![vec![0.2, 0.8]]),
        )
        .unwrap()
        .with_noise_sd(0.0)
        .unwrap();
        let cfg = ClassicalUcbConfig {
            horizon: 30,
            confidence: Confidence::Practical,
            arm_budget: DEFAULT_BUDGET,
        };
        let r = run_classical_ucb(&single, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(&r.trace.instantaneous()[..2], &[0.8 - 0.2, 0.0]);
        assert_trace_invariants(&r, 30);

        let g = path(3);
        let zero = run_classical_ucb(&flat(&g), &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(zero.trace.final_regret(), 0.0);

        // Forced exploration pulls each of the 8 assignments once, in order.
        let inst = random_instance(&g, 2, 5).unwrap();
        let (_, opt) = inst.optimum().unwrap();
        let r = run_classical_ucb(&inst, &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        for (t, &regret) in r.trace.instantaneous()[..8].iter().enumerate() {
            let expected =
                (opt - inst.expected_total_reward(&assignment_at(t, 3, 2)).unwrap()) / 3.0;
            assert_eq!(regret, expected);
        }
        assert_eq!(r.warmup_rounds, 8);

        let big = random_instance(&random_bounded_degree_graph(21, 3, 0).unwrap(), 2, 0).unwrap();
        assert!(matches!(
            run_classical_ucb(&big, &cfg, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn cucb_examples() {
        let g = path(3);
        let cfg = CucbConfig {
            horizon: 100,
            oracle: EXACT,
        };
        let zero = run_cucb(&flat(&g), &g, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(zero.trace.final_regret(), 0.0);

        let single = BanditInstance::new(
            InterferenceGraph::new(1, &[]).unwrap(),
            2,
            MeanTable(vec![vec![0.25, 0.75]]),
        )
        .unwrap()
        .with_noise_sd(0.0)
        .unwrap();
        let r = run_cucb(
            &single,
            single.graph(),
            &cfg,
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        // Reference: two-armed UCB with radius sqrt(3 ln t / (2n)) after
        // one pull of each arm.
        let (means, mut n, mut expected) = ([0.25, 0.75], [1.0f64, 1.0], vec![0.5, 0.0]);
        for t in 2..100 {
            let score = |a: usize| means[a] + (3.0 * (t as f64).ln() / (2.0 * n[a])).sqrt();
            let arm = if score(1) > score(0) { 1 } else { 0 };
            n[arm] += 1.0;
            expected.push(if arm == 0 { 0.5 } else { 0.0 });
        }
        assert_eq!(r.trace.instantaneous(), expected.as_slice());

        let inst = random_instance(&g, 2, 2).unwrap();
        assert_trace_invariants(
            &run_cucb(&inst, &g, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap(),
            100,
        );
    }

    #[test]
    fn cucb_pays_a_bonus_per_unit() {
        // On K_3 all units share one class: PUCB spreads a single
        // sqrt(m)-scaled bonus, CUCB charges each unit its own.
        let g = InterferenceGraph::complete(3).unwrap();
        let inst = random_instance(&g, 2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut learner = PucbLearner::new(&g, 2, 0.75 * 8f64.ln(), EXACT).unwrap();
        let configs = learner.configs().clone();
        let mut state = CountTable::new(&configs);
        for idx in 0..8 {
            let arms = assignment_at(idx, 3, 2);
            let rewards = inst.sample_rewards(&arms, &mut rng).unwrap();
            learner.observe(&arms, &rewards).unwrap();
            state.record(&configs, &arms, &rewards);
        }
        let pucb = learner.score_tables().unwrap().clone();
        let cucb = cucb_score_tables(&state, &configs, 8).unwrap();
        assert_ne!(pucb, cucb);
        let bonus_total = |t: &ScoreTables| -> f64 {
            (0..3)
                .map(|i| t.unit(i)[0] - state.mean(i, 0).unwrap())
                .sum()
        };
        // Same log term: total bonus is sqrt(m) times smaller for PUCB.
        let ratio = bonus_total(&cucb) / bonus_total(&pucb);
        assert!((ratio - 3f64.sqrt()).abs() < 1e-9, "ratio {ratio}");
    }

    #[test]
    fn etc_examples() {
        let g = path(3);
        let inst = random_instance(&g, 2, 3).unwrap();
        let all_explore = EtcConfig {
            horizon: 50,
            explore_rounds: Some(50),
            oracle: EXACT,
        };
        let r =
            run_network_etc(&inst, &g, &all_explore, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(r.oracle, None);
        assert_trace_invariants(&r, 50);

        let exact = inst.clone().with_noise_sd(0.0).unwrap();
        let cfg = EtcConfig {
            horizon: 400,
            explore_rounds: Some(300),
            oracle: EXACT,
        };
        let r = run_network_etc(&exact, &g, &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        let (best, _) = exact.optimum().unwrap();
        assert_eq!(r.final_assignment, best);
        assert!(r.trace.instantaneous()[300..].iter().all(|&x| x == 0.0));

        let default = EtcConfig {
            horizon: 10240,
            explore_rounds: None,
            oracle: EXACT,
        };
        let g10 = random_bounded_degree_graph(10, 3, 0).unwrap();
        assert_eq!(g10.max_degree(), 3);
        // Smallest T1 with T1³ ≥ T² · 2^(Δ+1).
        let target = 10240u128 * 10240 * 16;
        let t1 = (1u128..).find(|t| t * t * t >= target).unwrap() as usize;
        assert_eq!(t1, 1189);
        assert_eq!(default.explore_rounds_for(&g10, 2), t1);
    }

    #[test]
    fn etc_commits_to_argmax_of_estimates() {
        let g = random_bounded_degree_graph(6, 3, 4).unwrap();
        let inst = random_instance(&g, 2, 4).unwrap();
        let cfg = EtcConfig {
            horizon: 300,
            explore_rounds: Some(120),
            oracle: EXACT,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = run_network_etc(&inst, &g, &cfg, &mut rng).unwrap();

        // Replay the exploration draws to rebuild the estimates.
        let mut replay = ChaCha8Rng::seed_from_u64(9);
        let configs = LocalConfigs::new(&g, 2).unwrap();
        let mut state = CountTable::new(&configs);
        for _ in 0..120 {
            let arms: Vec<usize> = (0..6).map(|_| replay.gen_range(0..2)).collect();
            let rewards = inst.sample_rewards(&arms, &mut replay).unwrap();
            state.record(&configs, &arms, &rewards);
        }
        let estimates = etc_estimates(&state, &configs);
        assert_eq!(
            r.final_assignment,
            brute_force_argmax(&g, 2, &estimates, DEFAULT_BUDGET)
                .unwrap()
                .assignment
        );
    }

    #[test]
    fn etc_uniform_exploration_spreads_samples() {
        let g = path(3);
        let configs = LocalConfigs::new(&g, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut state = CountTable::new(&configs);
        let rounds = 80_000;
        for _ in 0..rounds {
            let arms: Vec<usize> = (0..3).map(|_| rng.gen_range(0..2)).collect();
            state.record(&configs, &arms, &[0.0; 3]);
        }
        for i in 0..3 {
            let expected = rounds as f64 / configs.table_len(i) as f64;
            for &c in state.counts(i) {
                assert!((c as f64 - expected).abs() < 5.0 * expected.sqrt());
            }
        }
    }

    #[test]
    fn sae_examples() {
        let g = path(3);
        let cfg = SaeConfig {
            horizon: 64,
            arm_budget: DEFAULT_BUDGET,
        };
        let zero = run_sae(&flat(&g), &cfg, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(zero.trace.final_regret(), 0.0);
        // Nothing is eliminated, so play keeps cycling through all 8.
        assert_eq!(zero.final_assignment, assignment_at(7, 3, 2));

        let single = BanditInstance::new(
            InterferenceGraph::new(1, &[]).unwrap(),
            2,
            MeanTable(vec![vec![0.0, 1.0]]),
        )
        .unwrap()
        .with_noise_sd(0.0)
        .unwrap();
        let horizon = 200;
        // First epoch whose doubled radius is below the unit gap.
        let decisive = (1..)
            .find(|&e| 2.0 * sae_radius(1, 2, horizon, e) < 1.0)
            .unwrap();
        let r = run_sae(
            &single,
            &SaeConfig {
                horizon,
                arm_budget: DEFAULT_BUDGET,
            },
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        assert_eq!(r.trace.final_regret(), decisive as f64);
        assert!(r.trace.instantaneous()[2 * decisive..]
            .iter()
            .all(|&x| x == 0.0));
        assert_eq!(r.final_assignment, vec![1]);
    }

    #[test]
    fn sae_with_one_arm_left_plays_it() {
        let single = BanditInstance::new(
            InterferenceGraph::new(1, &[]).unwrap(),
            2,
            MeanTable(vec![vec![0.0, 1.0]]),
        )
        .unwrap()
        .with_noise_sd(0.0)
        .unwrap();
        let r = run_sae(
            &single,
            &SaeConfig {
                horizon: 1000,
                arm_budget: DEFAULT_BUDGET,
            },
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        assert!(r.trace.instantaneous()[900..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn graph_blind_baselines_ignore_topology() {
        let values = [[0.1, 0.9], [0.6, 0.3], [0.5, 0.55]];
        let a = own_arm_instance(&path(3), &values);
        let b = own_arm_instance(&InterferenceGraph::complete(3).unwrap(), &values);
        let ucb = ClassicalUcbConfig {
            horizon: 300,
            confidence: Confidence::Theoretical,
            arm_budget: DEFAULT_BUDGET,
        };
        assert_eq!(
            run_classical_ucb(&a, &ucb, &mut ChaCha8Rng::seed_from_u64(4)).unwrap(),
            run_classical_ucb(&b, &ucb, &mut ChaCha8Rng::seed_from_u64(4)).unwrap()
        );
        let sae = SaeConfig {
            horizon: 300,
            arm_budget: DEFAULT_BUDGET,
        };
        assert_eq!(
            run_sae(&a, &sae, &mut ChaCha8Rng::seed_from_u64(4)).unwrap(),
            run_sae(&b, &sae, &mut ChaCha8Rng::seed_from_u64(4)).unwrap()
        );
    }

    #[test]
    fn baselines_are_reproducible_and_well_formed() {
        let g = random_bounded_degree_graph(5, 3, 1).unwrap();
        let inst = random_instance(&g, 2, 1).unwrap();
        let horizon = 400;
        let runs: Vec<Box<dyn Fn(u64) -> RunReport>> = vec![
            Box::new(|s| {
                let cfg = ClassicalUcbConfig {
                    horizon,
                    confidence: Confidence::Practical,
                    arm_budget: DEFAULT_BUDGET,
                };
                run_classical_ucb(&inst, &cfg, &mut ChaCha8Rng::seed_from_u64(s)).unwrap()
            }),
            Box::new(|s| {
                run_cucb(
                    &inst,
                    &g,
                    &CucbConfig {
                        horizon,
                        oracle: EXACT,
                    },
                    &mut ChaCha8Rng::seed_from_u64(s),
                )
                .unwrap()
            }),
            Box::new(|s| {
                let cfg = EtcConfig {
                    horizon,
                    explore_rounds: None,
                    oracle: EXACT,
                };
                run_network_etc(&inst, &g, &cfg, &mut ChaCha8Rng::seed_from_u64(s)).unwrap()
            }),
            Box::new(|s| {
                run_sae(
                    &inst,
                    &SaeConfig {
                        horizon,
                        arm_budget: DEFAULT_BUDGET,
                    },
                    &mut ChaCha8Rng::seed_from_u64(s),
                )
                .unwrap()
            }),
        ];
        for run in &runs {
            let first = run(11);
            assert_trace_invariants(&first, horizon);
            assert_eq!(first, run(11));
        }
    }
}
