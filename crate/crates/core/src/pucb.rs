//! Partitioned UCB with interference (PUCB-I) and its unknown-graph
//! variant (PUCB-UI).
//!
//! The learner keeps one count/sum table per unit over that unit's local
//! configurations. Units with identical closed neighborhoods form a class
//! `P_j`; their counts coincide, so each class gets a single confidence
//! bonus `sqrt(2 log(2/δ) m_j / n)`. Selection hands the oracle per-unit
//! tables in which each member carries `1/m_j` of its class bonus, which
//! makes the oracle objective equal to the sum of class UCBs.

use std::ops::Range;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{checked_pow, BanditInstance, LocalConfigs, RegretMeter, RunReport};
use crate::error::{Error, Result};
use crate::graph::{
    greedy_square_coloring, is_doubly_independent, neighborhood_partition, InterferenceGraph,
    NeighborhoodPartition, SquareColoring,
};
use crate::oracle::{Oracle, OracleMode, OraclePath, ScoreTables};

/// Pull counts and reward sums per unit and local configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    counts: Vec<Vec<u64>>,
    sums: Vec<Vec<f64>>,
}

impl CountTable {
    pub fn new(configs: &LocalConfigs) -> Self {
        CountTable {
            counts: configs.table_lens().iter().map(|&l| vec![0; l]).collect(),
            sums: configs.table_lens().iter().map(|&l| vec![0.0; l]).collect(),
        }
    }

    pub fn counts(&self, unit: usize) -> &[u64] {
        &self.counts[unit]
    }

    pub fn count(&self, unit: usize, code: usize) -> u64 {
        self.counts[unit][code]
    }

    pub fn sum(&self, unit: usize, code: usize) -> f64 {
        self.sums[unit][code]
    }

    /// Empirical mean, `None` if never observed.
    pub fn mean(&self, unit: usize, code: usize) -> Option<f64> {
        match self.counts[unit][code] {
            0 => None,
            n => Some(self.sums[unit][code] / n as f64),
        }
    }

    pub fn total(&self, unit: usize) -> u64 {
        self.counts[unit].iter().sum()
    }

    pub(crate) fn record(&mut self, configs: &LocalConfigs, assignment: &[usize], rewards: &[f64]) {
        for (i, &y) in rewards.iter().enumerate() {
            let code = configs.code(i, assignment);
            self.counts[i][code] += 1;
            self.sums[i][code] += y;
        }
    }
}

/// Records one round for every unit.
pub fn update_counts(
    state: &mut CountTable,
    configs: &LocalConfigs,
    assignment: &[usize],
    rewards: &[f64],
) -> Result<()> {
    configs.validate(assignment)?;
    if rewards.len() != configs.n_units() {
        return Err(Error::LengthMismatch {
            got: rewards.len(),
            expected: configs.n_units(),
        });
    }
    state.record(configs, assignment, rewards);
    Ok(())
}

/// Forced-exploration rounds, one block per color class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitSchedule {
    assignments: Vec<Vec<usize>>,
    blocks: Vec<Range<usize>>,
}

impl InitSchedule {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    /// Round ranges of each color class's block.
    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }
}

/// For color class `S_l` with max degree `n_l`, emits `k^(n_l+1)` rounds.
/// Round `r` of the block is written base `k` as `(g_0, g_1, ...)`; each
/// `i ∈ S_l` gets `g_0` and its neighbors (ascending) get `g_1..g_{d_i}`.
/// Everybody else plays arm 0. Unit `i` therefore sees local code
/// `r mod k^(d_i+1)`, i.e. every code exactly `k^(n_l − d_i)` times.
pub fn build_init_schedule(
    g: &InterferenceGraph,
    coloring: &SquareColoring,
    k: usize,
) -> Result<InitSchedule> {
    let n = g.n_units();
    let mut seen = vec![false; n];
    for class in coloring.classes() {
        for &u in class {
            if u >= n || seen[u] {
                return Err(Error::ColoringInvalid(format!(
                    "unit {u} is out of range or colored twice"
                )));
            }
            seen[u] = true;
        }
        if !is_doubly_independent(g, class)? {
            return Err(Error::ColoringInvalid(format!(
                "class {class:?} is not doubly independent"
            )));
        }
    }
    if let Some(u) = seen.iter().position(|&s| !s) {
        return Err(Error::ColoringInvalid(format!("unit {u} has no color")));
    }

    let mut assignments = Vec::new();
    let mut blocks = Vec::with_capacity(coloring.n_colors());
    for (class, &max_degree) in coloring.classes().iter().zip(coloring.max_degrees()) {
        let rounds = checked_pow(k, max_degree + 1).ok_or_else(|| Error::TooLarge {
            space: format!("{k}^{}", max_degree + 1),
            budget: usize::MAX as u64,
        })?;
        let start = assignments.len();
        for r in 0..rounds {
            let mut arms = vec![0usize; n];
            for &i in class {
                let mut digits = r;
                for u in g.closed_neighborhood(i) {
                    arms[u] = digits % k;
                    digits /= k;
                }
            }
            assignments.push(arms);
        }
        blocks.push(start..assignments.len());
    }
    Ok(InitSchedule {
        assignments,
        blocks,
    })
}

/// How the confidence parameter δ is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Confidence {
    /// `δ = (T² N Σ_j k^(D_j+1))⁻¹`.
    #[default]
    Theoretical,
    /// `log(2/δ) = (N/5) log 50`.
    Practical,
    Fixed {
        delta: f64,
    },
}

impl Confidence {
    /// `log(2/δ)` for a learner over `n_units` units, horizon `horizon`, and
    /// per-class table sizes `class_table_lens` (`k^(D_j+1)` for each class).
    pub fn log_term(
        self,
        n_units: usize,
        horizon: usize,
        class_table_lens: &[usize],
    ) -> Result<f64> {
        match self {
            Confidence::Theoretical => {
                let configs: f64 = class_table_lens.iter().map(|&l| l as f64).sum();
                Ok(2f64.ln()
                    + 2.0 * (horizon.max(1) as f64).ln()
                    + (n_units as f64).ln()
                    + configs.ln())
            }
            Confidence::Practical => Ok(n_units as f64 / 5.0 * 50f64.ln()),
            Confidence::Fixed { delta } => {
                if delta > 0.0 && delta <= 2.0 {
                    Ok((2.0 / delta).ln())
                } else {
                    Err(Error::ConfigInvalid(format!(
                        "delta {delta} outside (0, 2]"
                    )))
                }
            }
        }
    }
}

pub fn delta_from_log_term(log_term: f64) -> f64 {
    2.0 * (-log_term).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PucbConfig {
    pub horizon: usize,
    /// Explicit δ; overrides `use_practical_delta`.
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub use_practical_delta: bool,
    #[serde(default)]
    pub oracle: OracleMode,
}

impl PucbConfig {
    pub fn new(horizon: usize) -> Self {
        PucbConfig {
            horizon,
            delta: None,
            use_practical_delta: false,
            oracle: OracleMode::default(),
        }
    }

    pub fn confidence(&self) -> Confidence {
        match (self.delta, self.use_practical_delta) {
            (Some(delta), _) => Confidence::Fixed { delta },
            (None, true) => Confidence::Practical,
            (None, false) => Confidence::Theoretical,
        }
    }
}

/// `Σ_{i∈P_j} μ̂_i + sqrt(2 log(2/δ) m_j / n_{P_j})` for the configuration
/// `code`, expressed in the encoding of the class's first member.
pub fn partition_ucb(
    state: &CountTable,
    configs: &LocalConfigs,
    partition: &NeighborhoodPartition,
    j: usize,
    code: usize,
    delta: f64,
) -> Result<f64> {
    let log_term = Confidence::Fixed { delta }.log_term(0, 0, &[])?;
    class_ucb(state, configs, partition, j, code, log_term)
}

fn class_ucb(
    state: &CountTable,
    configs: &LocalConfigs,
    partition: &NeighborhoodPartition,
    j: usize,
    code: usize,
    log_term: f64,
) -> Result<f64> {
    let members = partition.class(j);
    let rep = members[0];
    let local = configs.decode(rep, code);
    let hood = configs.neighborhood(rep);
    let arm_of = |u: usize| {
        local[hood
            .iter()
            .position(|&v| v == u)
            .expect("shared neighborhood")]
    };
    let mut total = 0.0;
    let mut shared = None;
    for &i in members {
        let member_code = configs
            .neighborhood(i)
            .iter()
            .rev()
            .fold(0, |acc, &u| acc * configs.k() + arm_of(u));
        let mean = state
            .mean(i, member_code)
            .ok_or(Error::Unexplored { class: j, code })?;
        total += mean;
        shared.get_or_insert(state.count(i, member_code));
    }
    let n = shared.expect("classes are nonempty") as f64;
    Ok(total + (2.0 * log_term * members.len() as f64 / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub assignment: Vec<usize>,
    /// Oracle objective at `assignment`: the sum of class UCBs.
    pub objective: f64,
    pub path: OraclePath,
}

/// Learner state for PUCB-I over a believed graph.
#[derive(Debug, Clone)]
pub struct PucbLearner {
    partition: NeighborhoodPartition,
    counts: CountTable,
    log_term: f64,
    oracle: Oracle,
    tables: ScoreTables,
}

impl PucbLearner {
    pub fn new(
        g_known: &InterferenceGraph,
        k: usize,
        log_term: f64,
        oracle_mode: OracleMode,
    ) -> Result<Self> {
        if !(log_term >= 0.0 && log_term.is_finite()) {
            return Err(Error::ConfigInvalid(format!(
                "log(2/delta) = {log_term} must be finite and >= 0"
            )));
        }
        let oracle = Oracle::new(g_known, k, oracle_mode)?;
        oracle.planned_path()?;
        Ok(PucbLearner {
            partition: neighborhood_partition(g_known),
            counts: CountTable::new(oracle.configs()),
            tables: ScoreTables::zeros(oracle.configs()),
            log_term,
            oracle,
        })
    }

    pub fn partition(&self) -> &NeighborhoodPartition {
        &self.partition
    }

    pub fn counts(&self) -> &CountTable {
        &self.counts
    }

    pub fn configs(&self) -> &LocalConfigs {
        self.oracle.configs()
    }

    pub fn log_term(&self) -> f64 {
        self.log_term
    }

    pub fn observe(&mut self, assignment: &[usize], rewards: &[f64]) -> Result<()> {
        update_counts(&mut self.counts, self.oracle.configs(), assignment, rewards)
    }

    /// UCB of class `j` at configuration `code` (first-member encoding).
    pub fn class_ucb(&self, j: usize, code: usize) -> Result<f64> {
        class_ucb(
            &self.counts,
            self.oracle.configs(),
            &self.partition,
            j,
            code,
            self.log_term,
        )
    }

    /// `Σ_j UCB_{P_j}` at a full assignment, evaluated class by class.
    pub fn ucb_objective(&self, assignment: &[usize]) -> Result<f64> {
        let configs = self.oracle.configs();
        configs.validate(assignment)?;
        let mut total = 0.0;
        for j in 0..self.partition.len() {
            let rep = self.partition.class(j)[0];
            total += self.class_ucb(j, configs.code(rep, assignment))?;
        }
        Ok(total)
    }

    /// Per-unit tables `μ̂_i(c) + bonus_j(c)/m_j`.
    pub fn score_tables(&mut self) -> Result<&ScoreTables> {
        let configs = self.oracle.configs();
        for j in 0..self.partition.len() {
            let m = self.partition.size(j) as f64;
            for &i in self.partition.class(j) {
                let row = self.tables.unit_mut(i);
                for (code, slot) in row.iter_mut().enumerate() {
                    let n = self.counts.count(i, code);
                    if n == 0 {
                        let rep = self.partition.class(j)[0];
                        let local: Vec<usize> = configs.decode(i, code);
                        let mut full = vec![0; configs.n_units()];
                        for (&u, &a) in configs.neighborhood(i).iter().zip(&local) {
                            full[u] = a;
                        }
                        return Err(Error::Unexplored {
                            class: j,
                            code: configs.code(rep, &full),
                        });
                    }
                    let mean = self.counts.sum(i, code) / n as f64;
                    *slot = mean + (2.0 * self.log_term * m / n as f64).sqrt() / m;
                }
            }
        }
        Ok(&self.tables)
    }

    pub fn select<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Selection> {
        self.score_tables()?;
        let out = self.oracle.maximize(&self.tables, rng)?;
        Ok(Selection {
            assignment: out.assignment,
            objective: out.value,
            path: out.path,
        })
    }
}

/// One selection step from an explicit state.
pub fn select_treatment<R: Rng + ?Sized>(
    state: &CountTable,
    g_known: &InterferenceGraph,
    k: usize,
    delta: f64,
    oracle_mode: OracleMode,
    rng: &mut R,
) -> Result<Selection> {
    let log_term = Confidence::Fixed { delta }.log_term(0, 0, &[])?;
    let mut learner = PucbLearner::new(g_known, k, log_term, oracle_mode)?;
    if learner
        .counts
        .counts
        .iter()
        .map(Vec::len)
        .ne(state.counts.iter().map(Vec::len))
    {
        return Err(Error::ConfigInvalid(
            "count table does not match the graph".into(),
        ));
    }
    learner.counts = state.clone();
    learner.select(rng)
}

/// Plays the initialization schedule, then the partitioned-UCB rule, for
/// `cfg.horizon` rounds. `g_known` is the graph the learner believes.
pub fn run_pucbi<R: Rng + ?Sized>(
    inst: &BanditInstance,
    g_known: &InterferenceGraph,
    cfg: &PucbConfig,
    rng: &mut R,
) -> Result<RunReport> {
    if g_known.n_units() != inst.n_units() {
        return Err(Error::ConfigInvalid(
            "believed graph has the wrong number of units".into(),
        ));
    }
    let k = inst.k();
    let partition = neighborhood_partition(g_known);
    let class_lens: Vec<usize> = partition
        .common_degrees()
        .iter()
        .map(|&d| checked_pow(k, d + 1).unwrap_or(usize::MAX))
        .collect();
    let log_term = cfg
        .confidence()
        .log_term(inst.n_units(), cfg.horizon, &class_lens)?;
    let mut learner = PucbLearner::new(g_known, k, log_term, cfg.oracle)?;
    let schedule = build_init_schedule(g_known, &greedy_square_coloring(g_known), k)?;
    if cfg.horizon < schedule.len() {
        return Err(Error::HorizonTooShort {
            horizon: cfg.horizon,
            required: schedule.len(),
        });
    }

    let mut meter = RegretMeter::new(inst, cfg.horizon)?;
    let mut rewards = Vec::with_capacity(inst.n_units());
    for arms in schedule.assignments() {
        inst.sample_into(arms, rng, &mut rewards);
        learner
            .counts
            .record(learner.oracle.configs(), arms, &rewards);
        meter.record(arms);
    }
    let mut path = None;
    let mut last = schedule.assignments().last().cloned().unwrap_or_default();
    for _ in schedule.len()..cfg.horizon {
        let choice = learner.select(rng)?;
        path = Some(choice.path);
        inst.sample_into(&choice.assignment, rng, &mut rewards);
        learner
            .counts
            .record(learner.oracle.configs(), &choice.assignment, &rewards);
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

/// PUCB-I run under the belief that the graph is complete. The learner's
/// state then has a single class holding all `k^N` assignments.
pub fn run_pucbui<R: Rng + ?Sized>(
    inst: &BanditInstance,
    cfg: &PucbConfig,
    rng: &mut R,
) -> Result<RunReport> {
    let budget = match cfg.oracle {
        OracleMode::Exact { budget } | OracleMode::Auto { budget, .. } => budget,
        OracleMode::LocalSearch { .. } => crate::oracle::DEFAULT_BUDGET,
    };
    let space = checked_pow(inst.k(), inst.n_units()).map(|s| s as u64);
    if !matches!(space, Some(s) if s <= budget) {
        return Err(Error::TooLarge {
            space: format!("{}^{}", inst.k(), inst.n_units()),
            budget,
        });
    }
    run_pucbi(
        inst,
        &InterferenceGraph::complete(inst.n_units())?,
        cfg,
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::MeanTable;
    use crate::graph::random_bounded_degree_graph;
    use crate::graph::tests::{eight_units, path};
    use crate::instances::random_instance;
    use crate::oracle::DEFAULT_BUDGET;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EXACT: OracleMode = OracleMode::Exact {
        budget: DEFAULT_BUDGET,
    };

    fn single(means: [f64; 2]) -> BanditInstance {
        BanditInstance::new(
            InterferenceGraph::new(1, &[]).unwrap(),
            2,
            MeanTable(vec![means.to_vec()]),
        )
        .unwrap()
    }

    #[test]
    fn schedule_examples() {
        let one = InterferenceGraph::new(1, &[]).unwrap();
        let s = build_init_schedule(&one, &greedy_square_coloring(&one), 3).unwrap();
        assert_eq!(s.assignments(), &[vec![0], vec![1], vec![2]]);

        let p = path(3);
        let s = build_init_schedule(&p, &greedy_square_coloring(&p), 2).unwrap();
        assert_eq!(s.len(), 16);
        assert_eq!(s.blocks(), &[0..4, 4..12, 12..16]);
        let configs = LocalConfigs::new(&p, 2).unwrap();
        let mut seen = [0; 8];
        for arms in &s.assignments()[4..12] {
            seen[configs.code(1, arms)] += 1;
        }
        assert_eq!(seen, [1; 8]);
    }

    #[test]
    fn schedule_rejects_bad_colorings() {
        let p = path(3);
        let bad = SquareColoring::from_classes(&p, vec![vec![0, 2], vec![1]]).unwrap();
        assert!(matches!(
            build_init_schedule(&p, &bad, 2),
            Err(Error::ColoringInvalid(_))
        ));
        let missing = SquareColoring::from_classes(&p, vec![vec![0], vec![1]]).unwrap();
        assert!(matches!(
            build_init_schedule(&p, &missing, 2),
            Err(Error::ColoringInvalid(_))
        ));
    }

    #[test]
    fn update_examples() {
        let g = InterferenceGraph::new(1, &[]).unwrap();
        let configs = LocalConfigs::new(&g, 2).unwrap();
        let mut state = CountTable::new(&configs);
        update_counts(&mut state, &configs, &[1], &[0.5]).unwrap();
        update_counts(&mut state, &configs, &[1], &[0.5]).unwrap();
        assert_eq!(state.counts(0), &[0, 2]);
        assert_eq!((state.sum(0, 0), state.sum(0, 1)), (0.0, 1.0));
        assert!(update_counts(&mut state, &configs, &[2], &[0.5]).is_err());
        assert!(update_counts(&mut state, &configs, &[1], &[0.5, 1.0]).is_err());
    }

    #[test]
    fn full_schedule_covers_every_code() {
        let g = eight_units();
        let configs = LocalConfigs::new(&g, 2).unwrap();
        let s = build_init_schedule(&g, &greedy_square_coloring(&g), 2).unwrap();
        let mut state = CountTable::new(&configs);
        for arms in s.assignments() {
            update_counts(&mut state, &configs, arms, &[0.0; 8]).unwrap();
        }
        for i in 0..8 {
            assert!(state.counts(i).iter().all(|&c| c >= 1));
            assert_eq!(state.total(i), s.len() as u64);
        }
    }

    #[test]
    fn ucb_arithmetic() {
        let g = InterferenceGraph::new(1, &[]).unwrap();
        let configs = LocalConfigs::new(&g, 2).unwrap();
        let partition = neighborhood_partition(&g);
        let mut state = CountTable::new(&configs);
        update_counts(&mut state, &configs, &[0], &[0.6]).unwrap();
        assert_eq!(
            partition_ucb(&state, &configs, &partition, 0, 0, 2.0).unwrap(),
            0.6
        );
        let e2 = 2.0 / std::f64::consts::E.powi(2);
        assert!(
            (partition_ucb(&state, &configs, &partition, 0, 0, e2).unwrap() - 2.6).abs() < 1e-12
        );
        assert!(matches!(
            partition_ucb(&state, &configs, &partition, 0, 1, e2),
            Err(Error::Unexplored { class: 0, code: 1 })
        ));

        let mut zeros = CountTable::new(&configs);
        for _ in 0..4 {
            update_counts(&mut zeros, &configs, &[1], &[0.0]).unwrap();
        }
        assert!(
            (partition_ucb(&zeros, &configs, &partition, 0, 1, e2).unwrap() - 1.0).abs() < 1e-12
        );
    }

    #[test]
    fn class_counts_stay_identical() {
        let g = eight_units();
        let partition = neighborhood_partition(&g);
        let inst = random_instance(&g, 2, 9).unwrap();
        let mut learner = PucbLearner::new(&g, 2, 1.0, EXACT).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let configs = learner.configs().clone();
        for _ in 0..200 {
            let arms: Vec<usize> = (0..8).map(|_| rng.gen_range(0..2)).collect();
            let rewards = inst.sample_rewards(&arms, &mut rng).unwrap();
            learner.observe(&arms, &rewards).unwrap();
        }
        for class in partition.classes() {
            let rep = class[0];
            for &i in &class[1..] {
                for code in 0..configs.table_len(rep) {
                    let local = configs.decode(rep, code);
                    let mut full = vec![0; 8];
                    for (&u, &a) in configs.neighborhood(rep).iter().zip(&local) {
                        full[u] = a;
                    }
                    assert_eq!(
                        learner.counts().count(rep, code),
                        learner.counts().count(i, configs.code(i, &full))
                    );
                }
            }
        }
    }

    #[test]
    fn selection_examples() {
        let g = InterferenceGraph::new(1, &[]).unwrap();
        let configs = LocalConfigs::new(&g, 2).unwrap();
        let mut state = CountTable::new(&configs);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        update_counts(&mut state, &configs, &[0], &[0.0]).unwrap();
        update_counts(&mut state, &configs, &[1], &[0.0]).unwrap();
        let tie = select_treatment(&state, &g, 2, 0.1, EXACT, &mut rng).unwrap();
        assert_eq!(tie.assignment, vec![0]);

        update_counts(&mut state, &configs, &[0], &[1.8]).unwrap();
        update_counts(&mut state, &configs, &[1], &[0.2]).unwrap();
        assert_eq!(
            select_treatment(&state, &g, 2, 0.1, EXACT, &mut rng)
                .unwrap()
                .assignment,
            vec![0]
        );

        let empty = CountTable::new(&configs);
        assert!(matches!(
            select_treatment(&empty, &g, 2, 0.1, EXACT, &mut rng),
            Err(Error::Unexplored { .. })
        ));
    }

    #[test]
    fn selection_matches_direct_class_sum() {
        for seed in 0..10 {
            let g = random_bounded_degree_graph(4, 3, seed).unwrap();
            let inst = random_instance(&g, 2, seed).unwrap();
            let mut learner = PucbLearner::new(&g, 2, 2.0, EXACT).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for idx in 0..16usize {
                let arms: Vec<usize> = (0..4).map(|u| (idx >> u) & 1).collect();
                for _ in 0..=(seed as usize % 3) {
                    learner
                        .observe(&arms, &inst.sample_rewards(&arms, &mut rng).unwrap())
                        .unwrap();
                }
            }
            let choice = learner.select(&mut rng).unwrap();
            let mut best = (vec![], f64::NEG_INFINITY);
            for idx in 0..16usize {
                let arms: Vec<usize> = (0..4).map(|u| (idx >> (3 - u)) & 1).collect();
                let v = learner.ucb_objective(&arms).unwrap();
                if v > best.1 + 1e-12 {
                    best = (arms, v);
                }
            }
            assert_eq!(choice.assignment, best.0);
            assert!((choice.objective - best.1).abs() < 1e-9 * 4.0);
        }
    }

    #[test]
    fn deterministic_single_unit_run() {
        let inst = single([0.0, 1.0]).with_noise_sd(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let greedy = PucbConfig {
            delta: Some(2.0),
            ..PucbConfig::new(50)
        };
        let report = run_pucbi(&inst, inst.graph(), &greedy, &mut rng).unwrap();
        assert_eq!(report.warmup_rounds, 2);
        assert_eq!(&report.trace.instantaneous()[..3], &[1.0, 0.0, 0.0]);
        assert_eq!(report.trace.final_regret(), 1.0);

        // Theoretical δ against a hand-rolled two-armed UCB.
        let report = run_pucbi(&inst, inst.graph(), &PucbConfig::new(50), &mut rng).unwrap();
        let log_term = 2f64.ln() + 2.0 * 50f64.ln() + 2f64.ln();
        let (mut n, mut expected) = ([1.0f64, 1.0], vec![1.0, 0.0]);
        for _ in 2..50 {
            let score = |a: usize| a as f64 + (2.0 * log_term / n[a]).sqrt();
            let arm = if score(1) > score(0) { 1 } else { 0 };
            n[arm] += 1.0;
            expected.push(if arm == 0 { 1.0 } else { 0.0 });
        }
        assert_eq!(report.trace.instantaneous(), expected.as_slice());
        assert!(report.trace.final_regret() > 1.0);
    }

    #[test]
    fn zero_gap_has_no_regret() {
        let g = path(4);
        let configs = LocalConfigs::new(&g, 2).unwrap();
        let means = MeanTable(configs.table_lens().iter().map(|&l| vec![0.5; l]).collect());
        let inst = BanditInstance::new(g.clone(), 2, means).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let report = run_pucbi(&inst, &g, &PucbConfig::new(200), &mut rng).unwrap();
        assert!(report.trace.cumulative().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn horizon_must_cover_schedule() {
        let inst = random_instance(&path(3), 2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            run_pucbi(&inst, inst.graph(), &PucbConfig::new(15), &mut rng),
            Err(Error::HorizonTooShort {
                horizon: 15,
                required: 16
            })
        ));
    }

    #[test]
    fn unknown_graph_variant() {
        let k3 = InterferenceGraph::complete(3).unwrap();
        let inst = random_instance(&k3, 2, 4).unwrap();
        let cfg = PucbConfig::new(300);
        let a = run_pucbi(&inst, &k3, &cfg, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let b = run_pucbui(&inst, &cfg, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        assert_eq!(a, b);

        let big = random_instance(&random_bounded_degree_graph(22, 3, 0).unwrap(), 2, 0).unwrap();
        assert!(matches!(
            run_pucbui(&big, &cfg, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn unknown_graph_variant_on_single_unit_is_plain_ucb() {
        // K_1 is the true graph, so both variants coincide.
        let inst = single([0.3, 0.6]);
        let cfg = PucbConfig {
            use_practical_delta: true,
            ..PucbConfig::new(100)
        };
        let a = run_pucbi(&inst, inst.graph(), &cfg, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let b = run_pucbui(&inst, &cfg, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn confidence_terms() {
        assert!(
            (Confidence::Practical.log_term(10, 0, &[]).unwrap() - 2.0 * 50f64.ln()).abs() < 1e-12
        );
        let lt = Confidence::Theoretical.log_term(2, 10, &[4, 8]).unwrap();
        assert!((delta_from_log_term(lt) - 1.0 / (100.0 * 2.0 * 12.0)).abs() < 1e-15);
        assert!(Confidence::Fixed { delta: 3.0 }
            .log_term(1, 1, &[])
            .is_err());
        assert_eq!(
            Confidence::Fixed { delta: 2.0 }
                .log_term(1, 1, &[])
                .unwrap(),
            0.0
        );
    }
}
