//! Bandit instances: local-configuration encoding, mean tables, reward
//! sampling and regret accounting.

use std::sync::OnceLock;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::InterferenceGraph;
use crate::oracle::{self, OracleMode, ScoreTables};

/// A unit's local configuration, encoded base `k` over its closed
/// neighborhood (self digit least significant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalConfigIndex {
    pub unit: usize,
    pub code: usize,
}

/// Precomputed encoding of local configurations for one graph and arm
/// count.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalConfigs {
    k: usize,
    neighborhoods: Vec<Vec<usize>>,
    table_lens: Vec<usize>,
    /// For each unit `u`: every `(i, k^pos)` with `u` at position `pos` of
    /// the closed neighborhood of `i`.
    influence: Vec<Vec<(usize, usize)>>,
}

impl LocalConfigs {
    pub fn new(g: &InterferenceGraph, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::ConfigInvalid("k must be at least 1".into()));
        }
        let n = g.n_units();
        let neighborhoods: Vec<Vec<usize>> = (0..n).map(|i| g.closed_neighborhood(i)).collect();
        let mut table_lens = Vec::with_capacity(n);
        for hood in &neighborhoods {
            let len = checked_pow(k, hood.len()).ok_or_else(|| Error::TooLarge {
                space: format!("{k}^{}", hood.len()),
                budget: usize::MAX as u64,
            })?;
            table_lens.push(len);
        }
        let mut influence = vec![Vec::new(); n];
        for (i, hood) in neighborhoods.iter().enumerate() {
            let mut weight = 1;
            for &u in hood {
                influence[u].push((i, weight));
                weight *= k;
            }
        }
        Ok(LocalConfigs {
            k,
            neighborhoods,
            table_lens,
            influence,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_units(&self) -> usize {
        self.neighborhoods.len()
    }

    pub fn neighborhood(&self, unit: usize) -> &[usize] {
        &self.neighborhoods[unit]
    }

    /// `k^(d_i + 1)`.
    pub fn table_len(&self, unit: usize) -> usize {
        self.table_lens[unit]
    }

    pub fn table_lens(&self) -> &[usize] {
        &self.table_lens
    }

    pub(crate) fn influence(&self, unit: usize) -> &[(usize, usize)] {
        &self.influence[unit]
    }

    /// Encodes the restriction of a validated assignment to `N(unit)`.
    pub fn code(&self, unit: usize, assignment: &[usize]) -> usize {
        self.neighborhoods[unit]
            .iter()
            .rev()
            .fold(0, |acc, &u| acc * self.k + assignment[u])
    }

    pub fn codes_into(&self, assignment: &[usize], out: &mut Vec<usize>) {
        out.clear();
        out.extend((0..self.n_units()).map(|i| self.code(i, assignment)));
    }

    /// Local arm vector over `N(unit)` in canonical order.
    pub fn decode(&self, unit: usize, mut code: usize) -> Vec<usize> {
        self.neighborhoods[unit]
            .iter()
            .map(|_| {
                let arm = code % self.k;
                code /= self.k;
                arm
            })
            .collect()
    }

    pub fn validate(&self, assignment: &[usize]) -> Result<()> {
        if assignment.len() != self.n_units() {
            return Err(Error::LengthMismatch {
                got: assignment.len(),
                expected: self.n_units(),
            });
        }
        match assignment.iter().find(|&&a| a >= self.k) {
            Some(&arm) => Err(Error::ArmOutOfRange { arm, k: self.k }),
            None => Ok(()),
        }
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

pub fn local_config_of(
    g: &InterferenceGraph,
    assignment: &[usize],
    unit: usize,
    k: usize,
) -> Result<LocalConfigIndex> {
    if unit >= g.n_units() {
        return Err(Error::IndexOutOfRange {
            index: unit,
            n_units: g.n_units(),
        });
    }
    let configs = LocalConfigs::new(g, k)?;
    configs.validate(assignment)?;
    Ok(LocalConfigIndex {
        unit,
        code: configs.code(unit, assignment),
    })
}

/// Per-unit mean reward for each local configuration, all in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeanTable(pub Vec<Vec<f64>>);

impl MeanTable {
    pub fn unit(&self, i: usize) -> &[f64] {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceFile {
    graph: InterferenceGraph,
    k: usize,
    means: MeanTable,
    #[serde(default = "unit_noise")]
    noise_sd: f64,
}

fn unit_noise() -> f64 {
    1.0
}

/// Largest assignment space `optimum` will enumerate.
pub const OPTIMUM_BUDGET: u64 = 1 << 24;

/// A graph, an arm count, and Gaussian rewards around per-configuration
/// means.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct BanditInstance {
    graph: InterferenceGraph,
    k: usize,
    means: MeanTable,
    noise_sd: f64,
    configs: LocalConfigs,
    optimum: OnceLock<(Vec<usize>, f64)>,
}

impl PartialEq for BanditInstance {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.k == other.k
            && self.means == other.means
            && self.noise_sd == other.noise_sd
    }
}

impl TryFrom<InstanceFile> for BanditInstance {
    type Error = Error;

    fn try_from(file: InstanceFile) -> Result<Self> {
        BanditInstance::new(file.graph, file.k, file.means)?.with_noise_sd(file.noise_sd)
    }
}

impl From<BanditInstance> for InstanceFile {
    fn from(inst: BanditInstance) -> Self {
        InstanceFile {
            graph: inst.graph,
            k: inst.k,
            means: inst.means,
            noise_sd: inst.noise_sd,
        }
    }
}

impl BanditInstance {
    pub fn new(graph: InterferenceGraph, k: usize, means: MeanTable) -> Result<Self> {
        if k < 2 {
            return Err(Error::InstanceInvalid("need at least two arms".into()));
        }
        let configs = LocalConfigs::new(&graph, k)?;
        if means.0.len() != graph.n_units() {
            return Err(Error::InstanceInvalid(format!(
                "{} mean tables for {} units",
                means.0.len(),
                graph.n_units()
            )));
        }
        for (i, table) in means.0.iter().enumerate() {
            if table.len() != configs.table_len(i) {
                return Err(Error::InstanceInvalid(format!(
                    "unit {i} has {} means, expected {}",
                    table.len(),
                    configs.table_len(i)
                )));
            }
            if let Some(m) = table.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                return Err(Error::InstanceInvalid(format!(
                    "unit {i} has mean {m} outside [0, 1]"
                )));
            }
        }
        Ok(BanditInstance {
            graph,
            k,
            means,
            noise_sd: 1.0,
            configs,
            optimum: OnceLock::new(),
        })
    }

    pub fn with_noise_sd(mut self, noise_sd: f64) -> Result<Self> {
        if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
            return Err(Error::InstanceInvalid(format!("noise sd {noise_sd}")));
        }
        self.noise_sd = noise_sd;
        Ok(self)
    }

    pub fn graph(&self) -> &InterferenceGraph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_units(&self) -> usize {
        self.graph.n_units()
    }

    pub fn means(&self) -> &MeanTable {
        &self.means
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    pub fn configs(&self) -> &LocalConfigs {
        &self.configs
    }

    /// `Σ_i μ_i(A_{N(i)})`, summed in unit order.
    pub fn expected_total_reward(&self, assignment: &[usize]) -> Result<f64> {
        self.configs.validate(assignment)?;
        Ok(self.total_unchecked(assignment))
    }

    pub(crate) fn total_unchecked(&self, assignment: &[usize]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n_units() {
            total += self.means.0[i][self.configs.code(i, assignment)];
        }
        total
    }

    pub fn sample_rewards<R: Rng + ?Sized>(
        &self,
        assignment: &[usize],
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        self.configs.validate(assignment)?;
        let mut out = Vec::with_capacity(self.n_units());
        self.sample_into(assignment, rng, &mut out);
        Ok(out)
    }

    /// One Gaussian draw per unit, in unit order.
    pub(crate) fn sample_into<R: Rng + ?Sized>(
        &self,
        assignment: &[usize],
        rng: &mut R,
        out: &mut Vec<f64>,
    ) {
        out.clear();
        for i in 0..self.n_units() {
            let z: f64 = rng.sample(StandardNormal);
            out.push(self.means.0[i][self.configs.code(i, assignment)] + self.noise_sd * z);
        }
    }

    /// Exact optimum, computed on first use and cached.
    pub fn optimum(&self) -> Result<(&[usize], f64)> {
        if self.optimum.get().is_none() {
            let found = self.optimal_assignment(OracleMode::Exact {
                budget: OPTIMUM_BUDGET,
            })?;
            let _ = self.optimum.set(found);
        }
        let (a, v) = self.optimum.get().expect("set above");
        Ok((a, *v))
    }

    /// Maximizer of the expected total reward and its value.
    pub fn optimal_assignment(&self, mode: OracleMode) -> Result<(Vec<usize>, f64)> {
        let tables = ScoreTables::new(self.means.0.clone());
        let mut rng = crate::rng::stream(0, crate::rng::Stream::Instance);
        let out = oracle::maximize(&self.graph, self.k, &tables, mode, &mut rng)?;
        Ok((out.assignment, out.value))
    }
}

/// `(opt_value − Σ_i μ_i(A)) / N`, using true means.
pub fn regret_step(inst: &BanditInstance, assignment: &[usize], opt_value: f64) -> Result<f64> {
    Ok((opt_value - inst.expected_total_reward(assignment)?) / inst.n_units() as f64)
}

/// Per-round expected regret (already averaged over units) and its
/// running sum.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    instantaneous: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RegretTrace {
    pub fn with_capacity(rounds: usize) -> Self {
        RegretTrace {
            instantaneous: Vec::with_capacity(rounds),
            cumulative: Vec::with_capacity(rounds),
        }
    }

    pub fn push(&mut self, regret: f64) {
        let last = self.cumulative.last().copied().unwrap_or(0.0);
        self.instantaneous.push(regret);
        self.cumulative.push(last + regret);
    }

    pub fn len(&self) -> usize {
        self.instantaneous.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instantaneous.is_empty()
    }

    pub fn instantaneous(&self) -> &[f64] {
        &self.instantaneous
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn final_regret(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// The trace restarted at round `start` (0-based).
    pub fn since(&self, start: usize) -> RegretTrace {
        let mut out = RegretTrace::with_capacity(self.len().saturating_sub(start));
        for &r in self.instantaneous.iter().skip(start) {
            out.push(r);
        }
        out
    }
}

/// What a single learner run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub trace: RegretTrace,
    /// Rounds of forced exploration before the learner's adaptive phase
    /// (initialization schedule, explore-then-commit phase, ...).
    pub warmup_rounds: usize,
    /// Oracle path used by the learner, if it calls an oracle.
    pub oracle: Option<crate::oracle::OraclePath>,
    /// Assignment played in the last round.
    pub final_assignment: Vec<usize>,
}

/// Scores each round of a run against a precomputed optimum.
pub(crate) struct RegretMeter<'a> {
    inst: &'a BanditInstance,
    opt_value: f64,
    trace: RegretTrace,
}

impl<'a> RegretMeter<'a> {
    pub(crate) fn new(inst: &'a BanditInstance, horizon: usize) -> Result<Self> {
        let (_, opt_value) = inst.optimum()?;
        Ok(RegretMeter {
            inst,
            opt_value,
            trace: RegretTrace::with_capacity(horizon),
        })
    }

    pub(crate) fn record(&mut self, assignment: &[usize]) {
        let value = self.inst.total_unchecked(assignment);
        self.trace
            .push((self.opt_value - value) / self.inst.n_units() as f64);
    }

    pub(crate) fn finish(self) -> RegretTrace {
        self.trace
    }
}
