//! Experiment configuration, multi-seed parallel execution, aggregation of
//! regret curves, and CSV/JSON output.
//!
//! Run `r` uses seed `run_seed(base_seed, r)`. The instance (graph and
//! means) is derived from that seed, or from run 0's seed for every run
//! when `fixed_instance` is set. The algorithm at position `a` of the
//! configured list draws from stream `a + 1` of the run seed, so its trace
//! depends on its position in the list but not on the other algorithms.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{
    run_classical_ucb, run_cucb, run_network_etc, run_sae, ClassicalUcbConfig, CucbConfig,
    EtcConfig, SaeConfig,
};
use crate::env::{checked_pow, BanditInstance, RegretTrace, RunReport};
use crate::error::{Error, Result};
use crate::graph::{
    clique_sparse_graph, greedy_square_coloring, is_doubly_independent, neighborhood_partition,
    random_bounded_degree_graph, InterferenceGraph,
};
use crate::instances::{random_instance, theorem2_base_instance};
use crate::oracle::{OracleMode, OraclePath, DEFAULT_BUDGET};
use crate::pucb::{run_pucbi, run_pucbui, Confidence, PucbConfig};
use crate::rng::{run_seed, stream, Stream};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    File {
        path: PathBuf,
    },
    Inline {
        graph: InterferenceGraph,
    },
    Complete {
        n_units: usize,
    },
    BoundedDegree {
        n_units: usize,
        max_degree: usize,
    },
    CliqueSparse {
        cluster_sizes: Vec<usize>,
        cross_edges: usize,
    },
}

impl GraphSpec {
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            GraphSpec::BoundedDegree { .. } | GraphSpec::CliqueSparse { .. }
        )
    }

    pub fn build(&self, seed: u64) -> Result<InterferenceGraph> {
        match self {
            GraphSpec::File { path } => Ok(serde_json::from_str(&fs::read_to_string(path)?)?),
            GraphSpec::Inline { graph } => Ok(graph.clone()),
            GraphSpec::Complete { n_units } => InterferenceGraph::complete(*n_units),
            GraphSpec::BoundedDegree {
                n_units,
                max_degree,
            } => random_bounded_degree_graph(*n_units, *max_degree, seed),
            GraphSpec::CliqueSparse {
                cluster_sizes,
                cross_edges,
            } => clique_sparse_graph(cluster_sizes, *cross_edges, seed),
        }
    }

    /// The same family with `n_units` units.
    pub fn with_n_units(&self, n_units: usize) -> Result<GraphSpec> {
        match self {
            GraphSpec::Complete { .. } => Ok(GraphSpec::Complete { n_units }),
            GraphSpec::BoundedDegree { max_degree, .. } => Ok(GraphSpec::BoundedDegree {
                n_units,
                max_degree: *max_degree,
            }),
            other => Err(Error::ConfigInvalid(format!(
                "graph spec {other:?} has no unit-count parameter to sweep"
            ))),
        }
    }
}

/// How mean tables are generated for each run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeanGenerator {
    #[default]
    Uniform,
    Theorem2Base {
        epsilon_scale: f64,
    },
}

impl MeanGenerator {
    pub fn build(
        &self,
        g: &InterferenceGraph,
        k: usize,
        horizon: usize,
        seed: u64,
    ) -> Result<BanditInstance> {
        match *self {
            MeanGenerator::Uniform => random_instance(g, k, seed),
            MeanGenerator::Theorem2Base { epsilon_scale } => {
                theorem2_base_instance(g, k, horizon, epsilon_scale)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum AlgorithmSpec {
    PucbI {
        #[serde(default)]
        confidence: Confidence,
    },
    PucbUi {
        #[serde(default)]
        confidence: Confidence,
    },
    ClassicalUcb {
        #[serde(default)]
        confidence: Confidence,
    },
    Cucb,
    NetworkEtc {
        #[serde(default)]
        explore_rounds: Option<usize>,
    },
    Sae,
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::PucbI { .. } => "pucb_i",
            AlgorithmSpec::PucbUi { .. } => "pucb_ui",
            AlgorithmSpec::ClassicalUcb { .. } => "classical_ucb",
            AlgorithmSpec::Cucb => "cucb",
            AlgorithmSpec::NetworkEtc { .. } => "network_etc",
            AlgorithmSpec::Sae => "sae",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmEntry {
    #[serde(flatten)]
    pub spec: AlgorithmSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl AlgorithmEntry {
    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.spec.name().to_string())
    }
}

impl From<AlgorithmSpec> for AlgorithmEntry {
    fn from(spec: AlgorithmSpec) -> Self {
        AlgorithmEntry { spec, label: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub k: usize,
    pub horizon: usize,
    pub algorithms: Vec<AlgorithmEntry>,
    #[serde(default = "one")]
    pub n_runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub means: MeanGenerator,
    #[serde(default = "unit_noise")]
    pub noise_sd: f64,
    /// Reuse run 0's instance in every run.
    #[serde(default)]
    pub fixed_instance: bool,
    #[serde(default)]
    pub oracle: OracleMode,
    /// Largest `k^N` the assignment-enumerating baselines accept.
    #[serde(default = "default_budget")]
    pub arm_budget: u64,
    /// Worker threads; defaults to the machine's parallelism.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn one() -> usize {
    1
}

fn unit_noise() -> f64 {
    1.0
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

impl ExperimentConfig {
    pub fn new(
        graph: GraphSpec,
        k: usize,
        horizon: usize,
        algorithms: Vec<AlgorithmEntry>,
    ) -> Self {
        ExperimentConfig {
            graph,
            k,
            horizon,
            algorithms,
            n_runs: 1,
            base_seed: 0,
            means: MeanGenerator::default(),
            noise_sd: 1.0,
            fixed_instance: false,
            oracle: OracleMode::default(),
            arm_budget: DEFAULT_BUDGET,
            workers: None,
            output_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.n_runs == 0 {
            return bad("n_runs must be at least 1".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1".into());
        }
        if self.k < 2 {
            return bad(format!("k = {} (need at least two arms)", self.k));
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms listed".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return bad(format!("noise_sd {}", self.noise_sd));
        }
        let mut labels: Vec<String> = self.algorithms.iter().map(AlgorithmEntry::label).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("duplicate algorithm label {:?}", w[0]));
        }
        Ok(())
    }

    /// SHA-256 of the config's JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(&fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Structural quantities checked and recorded before a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n_units: usize,
    pub n_edges: usize,
    pub max_degree: usize,
    /// `M`, the number of neighborhood-equivalence classes.
    pub n_classes: usize,
    /// `L`, the number of greedy square-coloring classes.
    pub n_colors: usize,
    /// `T₀ = Σ_l k^(n_l+1)`; absent if it overflows.
    pub warmup_rounds: Option<usize>,
}

/// Verifies the partition and coloring invariants of `g`, then reports its
/// statistics for `k` arms.
pub fn graph_gate(g: &InterferenceGraph, k: usize) -> Result<GraphStats> {
    let partition = neighborhood_partition(g);
    let mut seen = vec![false; g.n_units()];
    let sorted_hood = |i: usize| {
        let mut hood = g.closed_neighborhood(i);
        hood.sort_unstable();
        hood
    };
    for class in partition.classes() {
        let hood = sorted_hood(class[0]);
        for &i in class {
            if sorted_hood(i) != hood || std::mem::replace(&mut seen[i], true) {
                return Err(Error::ConfigInvalid(format!(
                    "partition check failed at unit {i}"
                )));
            }
        }
    }
    if seen.contains(&false) {
        return Err(Error::ConfigInvalid(
            "partition does not cover every unit".into(),
        ));
    }
    let coloring = greedy_square_coloring(g);
    let delta = g.max_degree();
    if coloring.n_colors() > delta * delta + 1 {
        return Err(Error::ConfigInvalid(format!(
            "{} colors exceeds Δ² + 1 = {}",
            coloring.n_colors(),
            delta * delta + 1
        )));
    }
    for class in coloring.classes() {
        if !is_doubly_independent(g, class)? {
            return Err(Error::ConfigInvalid(format!(
                "color class {class:?} is not doubly independent"
            )));
        }
    }
    let warmup_rounds = coloring
        .max_degrees()
        .iter()
        .try_fold(0usize, |acc, &d| acc.checked_add(checked_pow(k, d + 1)?));
    Ok(GraphStats {
        n_units: g.n_units(),
        n_edges: g.n_edges(),
        max_degree: delta,
        n_classes: partition.len(),
        n_colors: coloring.n_colors(),
        warmup_rounds,
    })
}

/// Builds the instance for run `run` of `cfg`.
pub fn build_instance(cfg: &ExperimentConfig, run: usize) -> Result<BanditInstance> {
    let seed = run_seed(cfg.base_seed, if cfg.fixed_instance { 0 } else { run });
    let g = cfg.graph.build(run_seed(seed, 1))?;
    cfg.means
        .build(&g, cfg.k, cfg.horizon, seed)?
        .with_noise_sd(cfg.noise_sd)
}

/// Runs one algorithm on `inst` with its own stream of the run seed.
pub fn run_algorithm(
    cfg: &ExperimentConfig,
    position: usize,
    inst: &BanditInstance,
    run: usize,
) -> Result<RunReport> {
    let mut rng = stream(run_seed(cfg.base_seed, run), Stream::Algorithm(position));
    let horizon = cfg.horizon;
    let oracle = cfg.oracle;
    let pucb = |confidence: Confidence| {
        let mut p = PucbConfig::new(horizon);
        p.oracle = oracle;
        match confidence {
            Confidence::Theoretical => {}
            Confidence::Practical => p.use_practical_delta = true,
            Confidence::Fixed { delta } => p.delta = Some(delta),
        }
        p
    };
    match cfg.algorithms[position].spec {
        AlgorithmSpec::PucbI { confidence } => {
            run_pucbi(inst, inst.graph(), &pucb(confidence), &mut rng)
        }
        AlgorithmSpec::PucbUi { confidence } => {
            let mut p = pucb(confidence);
            if let OracleMode::Auto { .. } | OracleMode::LocalSearch { .. } = p.oracle {
                p.oracle = OracleMode::Exact {
                    budget: cfg.arm_budget,
                };
            }
            run_pucbui(inst, &p, &mut rng)
        }
        AlgorithmSpec::ClassicalUcb { confidence } => run_classical_ucb(
            inst,
            &ClassicalUcbConfig {
                horizon,
                confidence,
                arm_budget: cfg.arm_budget,
            },
            &mut rng,
        ),
        AlgorithmSpec::Cucb => run_cucb(
            inst,
            inst.graph(),
            &CucbConfig { horizon, oracle },
            &mut rng,
        ),
        AlgorithmSpec::NetworkEtc { explore_rounds } => run_network_etc(
            inst,
            inst.graph(),
            &EtcConfig {
                horizon,
                explore_rounds,
                oracle,
            },
            &mut rng,
        ),
        AlgorithmSpec::Sae => run_sae(
            inst,
            &SaeConfig {
                horizon,
                arm_budget: cfg.arm_budget,
            },
            &mut rng,
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub algorithm: String,
    pub final_regret: f64,
    pub warmup_rounds: usize,
    pub oracle: Option<OraclePath>,
    pub final_assignment: Vec<usize>,
    pub trace: RegretTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub run: usize,
    pub algorithm: String,
    pub reason: String,
}

/// Pointwise statistics of the cumulative-regret curves of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub n_runs: usize,
    pub mean: Vec<f64>,
    /// Sample standard deviation; 0 for a single run.
    pub std: Vec<f64>,
    pub final_mean: f64,
    pub final_std: f64,
    pub final_stderr: f64,
    pub oracle_paths: Vec<OraclePath>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub config: ExperimentConfig,
    pub graphs: Vec<GraphStats>,
    pub summaries: Vec<AlgorithmSummary>,
    pub runs: Vec<RunRecord>,
    pub skipped: Vec<Skipped>,
}

impl AggregateResult {
    pub fn summary(&self, algorithm: &str) -> Option<&AlgorithmSummary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }
}

/// Mean and sample standard deviation, in input order.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(algorithm: &str, records: &[&RunRecord]) -> AlgorithmSummary {
    let horizon = records.first().map_or(0, |r| r.trace.len());
    let mut mean = Vec::with_capacity(horizon);
    let mut std = Vec::with_capacity(horizon);
    let mut column = Vec::with_capacity(records.len());
    for t in 0..horizon {
        column.clear();
        column.extend(records.iter().map(|r| r.trace.cumulative()[t]));
        let (m, s) = mean_std(&column);
        mean.push(m);
        std.push(s);
    }
    let finals: Vec<f64> = records.iter().map(|r| r.final_regret).collect();
    let (final_mean, final_std) = if finals.is_empty() {
        (0.0, 0.0)
    } else {
        mean_std(&finals)
    };
    let mut oracle_paths: Vec<OraclePath> = Vec::new();
    for path in records.iter().filter_map(|r| r.oracle) {
        if !oracle_paths.contains(&path) {
            oracle_paths.push(path);
        }
    }
    AlgorithmSummary {
        algorithm: algorithm.to_string(),
        n_runs: records.len(),
        mean,
        std,
        final_mean,
        final_std,
        final_stderr: if finals.is_empty() {
            0.0
        } else {
            final_std / (finals.len() as f64).sqrt()
        },
        oracle_paths,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<AggregateResult> {
    cfg.validate()?;
    let workers = cfg
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::ConfigInvalid(format!("worker pool: {e}")))?;

    pool.install(|| {
        let n_instances = if cfg.fixed_instance { 1 } else { cfg.n_runs };
        let instances: Vec<BanditInstance> = (0..n_instances)
            .into_par_iter()
            .map(|run| {
                let inst = build_instance(cfg, run)?;
                inst.optimum()?;
                Ok(inst)
            })
            .collect::<Result<_>>()?;
        let graphs: Vec<GraphStats> = instances
            .iter()
            .map(|inst| graph_gate(inst.graph(), cfg.k))
            .collect::<Result<_>>()?;

        let tasks: Vec<(usize, usize)> = (0..cfg.n_runs)
            .flat_map(|run| (0..cfg.algorithms.len()).map(move |a| (run, a)))
            .collect();
        let outcomes: Vec<Result<RunReport>> = tasks
            .par_iter()
            .map(|&(run, a)| {
                let inst = &instances[if cfg.fixed_instance { 0 } else { run }];
                run_algorithm(cfg, a, inst, run)
            })
            .collect();

        let mut runs = Vec::new();
        let mut skipped = Vec::new();
        for (&(run, a), outcome) in tasks.iter().zip(outcomes) {
            let algorithm = cfg.algorithms[a].label();
            match outcome {
                Ok(report) => runs.push(RunRecord {
                    run,
                    seed: run_seed(cfg.base_seed, run),
                    algorithm,
                    final_regret: report.trace.final_regret(),
                    warmup_rounds: report.warmup_rounds,
                    oracle: report.oracle,
                    final_assignment: report.final_assignment,
                    trace: report.trace,
                }),
                Err(e @ Error::TooLarge { .. }) => skipped.push(Skipped {
                    run,
                    algorithm,
                    reason: e.to_string(),
                }),
                Err(e) => return Err(e),
            }
        }
        let summaries = cfg
            .algorithms
            .iter()
            .map(AlgorithmEntry::label)
            .filter_map(|label| {
                let records: Vec<&RunRecord> =
                    runs.iter().filter(|r| r.algorithm == label).collect();
                (!records.is_empty()).then(|| summarize(&label, &records))
            })
            .collect();
        Ok(AggregateResult {
            config: cfg.clone(),
            graphs,
            summaries,
            runs,
            skipped,
        })
    })
}

/// One experiment per `N`, each at horizon `10 · k^N`.
pub fn sweep_n(
    template: &ExperimentConfig,
    n_values: &[usize],
) -> Result<Vec<(usize, AggregateResult)>> {
    n_values
        .iter()
        .map(|&n| {
            let mut cfg = template.clone();
            cfg.graph = template.graph.with_n_units(n)?;
            cfg.horizon = checked_pow(template.k, n)
                .and_then(|s| s.checked_mul(10))
                .ok_or_else(|| {
                    Error::ConfigInvalid(format!("horizon 10·{}^{n} overflows", template.k))
                })?;
            Ok((n, run_experiment(&cfg)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config_digest: String,
    pub config: ExperimentConfig,
    pub graphs: Vec<GraphStats>,
    pub oracle_paths: Vec<(String, Vec<OraclePath>)>,
    pub skipped: Vec<Skipped>,
}

impl Manifest {
    pub fn of(res: &AggregateResult) -> Self {
        Manifest {
            version: VERSION.to_string(),
            config_digest: res.config.digest(),
            config: res.config.clone(),
            graphs: res.graphs.clone(),
            oracle_paths: res
                .summaries
                .iter()
                .map(|s| (s.algorithm.clone(), s.oracle_paths.clone()))
                .collect(),
            skipped: res.skipped.clone(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

pub const RUNS_FILE: &str = "runs.jsonl";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Writes `runs.jsonl`, `aggregate.csv` (t, algorithm, mean, std),
/// `summary.csv` and `manifest.json` into `dir`.
pub fn emit_results(res: &AggregateResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;

    let mut runs = String::new();
    for record in &res.runs {
        runs.push_str(&serde_json::to_string(record)?);
        runs.push('\n');
    }

    let mut aggregate = String::from("t,algorithm,mean,std\n");
    for s in &res.summaries {
        for (t, (m, sd)) in s.mean.iter().zip(&s.std).enumerate() {
            writeln!(aggregate, "{},{},{},{}", t + 1, s.algorithm, m, sd).expect("write to string");
        }
    }

    let mut summary = String::from("algorithm,n_runs,final_mean,final_std,final_stderr\n");
    for s in &res.summaries {
        writeln!(
            summary,
            "{},{},{},{},{}",
            s.algorithm, s.n_runs, s.final_mean, s.final_std, s.final_stderr
        )
        .expect("write to string");
    }

    let manifest = serde_json::to_string_pretty(&Manifest::of(res))? + "\n";

    let files = [
        (RUNS_FILE, runs),
        (AGGREGATE_FILE, aggregate),
        (SUMMARY_FILE, summary),
        (MANIFEST_FILE, manifest),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

/// Final-regret-vs-N table: `n_units, horizon, algorithm, final_mean,
/// final_std, final_stderr`.
pub fn emit_sweep(results: &[(usize, AggregateResult)], dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut table = String::from("n_units,horizon,algorithm,final_mean,final_std,final_stderr\n");
    for (n, res) in results {
        for s in &res.summaries {
            writeln!(
                table,
                "{},{},{},{},{},{}",
                n, res.config.horizon, s.algorithm, s.final_mean, s.final_std, s.final_stderr
            )
            .expect("write to string");
        }
        emit_results(res, &dir.join(format!("n{n}")))?;
    }
    let path = dir.join("sweep.csv");
    fs::write(&path, table)?;
    Ok(path)
}

/// Reads per-run records back from a `runs.jsonl` file.
pub fn load_runs(path: &Path) -> Result<Vec<RunRecord>> {
    fs::read_to_string(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}
