//! Maximization of decomposable scores `Σ_i f_i(A_{N(i)})` over all
//! assignments `A ∈ [k]^N`.
//!
//! The exact path enumerates assignments in reflected k-ary Gray-code order
//! so consecutive assignments differ in one unit, and only the tables of
//! units whose closed neighborhood contains that unit are re-read. Values
//! are always reported as the unit-order sum at the returned assignment, and
//! ties are broken toward the lexicographically smallest assignment.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{checked_pow, LocalConfigs};
use crate::error::{Error, Result};
use crate::graph::InterferenceGraph;

pub const DEFAULT_BUDGET: u64 = 1 << 20;
pub const DEFAULT_RESTARTS: usize = 16;

/// Full canonical re-evaluation every this many Gray steps bounds
/// floating-point drift in the running total.
const RESYNC_PERIOD: u64 = 1 << 12;

/// Per-unit score tables indexed by local configuration code.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTables(Vec<Vec<f64>>);

impl ScoreTables {
    pub fn new(tables: Vec<Vec<f64>>) -> Self {
        ScoreTables(tables)
    }

    pub fn zeros(configs: &LocalConfigs) -> Self {
        ScoreTables(
            configs
                .table_lens()
                .iter()
                .map(|&len| vec![0.0; len])
                .collect(),
        )
    }

    pub fn unit(&self, i: usize) -> &[f64] {
        &self.0[i]
    }

    pub fn unit_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.0[i]
    }

    pub fn into_inner(self) -> Vec<Vec<f64>> {
        self.0
    }

    fn check(&self, configs: &LocalConfigs) -> Result<()> {
        if self.0.len() != configs.n_units() {
            return Err(Error::ConfigInvalid(format!(
                "{} score tables for {} units",
                self.0.len(),
                configs.n_units()
            )));
        }
        for (i, t) in self.0.iter().enumerate() {
            if t.len() != configs.table_len(i) {
                return Err(Error::ConfigInvalid(format!(
                    "unit {i} score table has {} entries, expected {}",
                    t.len(),
                    configs.table_len(i)
                )));
            }
            if t.iter().any(|v| !v.is_finite()) {
                return Err(Error::ConfigInvalid(format!(
                    "unit {i} has a non-finite score"
                )));
            }
        }
        Ok(())
    }

    /// Largest absolute entry summed over units.
    fn magnitude(&self) -> f64 {
        self.0
            .iter()
            .map(|t| t.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OracleMode {
    Exact { budget: u64 },
    LocalSearch { restarts: usize },
    Auto { budget: u64, restarts: usize },
}

impl Default for OracleMode {
    fn default() -> Self {
        OracleMode::Auto {
            budget: DEFAULT_BUDGET,
            restarts: DEFAULT_RESTARTS,
        }
    }
}

/// Which algorithm actually produced an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OraclePath {
    Exact,
    LocalSearch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub assignment: Vec<usize>,
    pub value: f64,
    pub path: OraclePath,
}

/// An oracle bound to one graph and arm count.
#[derive(Debug, Clone)]
pub struct Oracle {
    configs: LocalConfigs,
    mode: OracleMode,
}

impl Oracle {
    pub fn new(g: &InterferenceGraph, k: usize, mode: OracleMode) -> Result<Self> {
        Ok(Oracle {
            configs: LocalConfigs::new(g, k)?,
            mode,
        })
    }

    pub fn configs(&self) -> &LocalConfigs {
        &self.configs
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    /// Size of the assignment space if it fits in a `u64`.
    pub fn space(&self) -> Option<u64> {
        checked_pow(self.configs.k(), self.configs.n_units()).map(|s| s as u64)
    }

    /// The path `maximize` would take.
    pub fn planned_path(&self) -> Result<OraclePath> {
        match self.mode {
            OracleMode::Exact { budget } => {
                self.check_budget(budget)?;
                Ok(OraclePath::Exact)
            }
            OracleMode::LocalSearch { .. } => Ok(OraclePath::LocalSearch),
            OracleMode::Auto { budget, .. } => Ok(match self.space() {
                Some(s) if s <= budget => OraclePath::Exact,
                _ => OraclePath::LocalSearch,
            }),
        }
    }

    fn check_budget(&self, budget: u64) -> Result<u64> {
        match self.space() {
            Some(s) if s <= budget => Ok(s),
            _ => Err(Error::TooLarge {
                space: format!("{}^{}", self.configs.k(), self.configs.n_units()),
                budget,
            }),
        }
    }

    pub fn maximize<R: Rng + ?Sized>(
        &self,
        tables: &ScoreTables,
        rng: &mut R,
    ) -> Result<OracleOutcome> {
        match self.mode {
            OracleMode::Exact { budget } => self.brute_force(tables, budget),
            OracleMode::LocalSearch { restarts } => self.coordinate_ascent(tables, restarts, rng),
            OracleMode::Auto { budget, restarts } => match self.planned_path()? {
                OraclePath::Exact => self.brute_force(tables, budget),
                OraclePath::LocalSearch => self.coordinate_ascent(tables, restarts, rng),
            },
        }
    }

    /// `Σ_i f_i(A_{N(i)})` summed in unit order.
    pub fn evaluate(&self, tables: &ScoreTables, assignment: &[usize]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.configs.n_units() {
            total += tables.0[i][self.configs.code(i, assignment)];
        }
        total
    }

    pub fn brute_force(&self, tables: &ScoreTables, budget: u64) -> Result<OracleOutcome> {
        tables.check(&self.configs)?;
        let space = self.check_budget(budget)?;
        let k = self.configs.k();
        let n = self.configs.n_units();
        let eps = 1e-9 * (1.0 + tables.magnitude());

        let mut arms = vec![0usize; n];
        let mut up = vec![true; n];
        let mut codes = vec![0usize; n];
        let mut best = arms.clone();
        let mut best_value = self.evaluate(tables, &arms);
        let mut running = best_value;

        for step in 1..space {
            let mut digit = 0;
            let mut rest = step;
            while rest % k as u64 == 0 {
                rest /= k as u64;
                digit += 1;
            }
            let old = arms[digit];
            let new = if up[digit] { old + 1 } else { old - 1 };
            arms[digit] = new;
            if new == 0 || new == k - 1 {
                up[digit] = !up[digit];
            }
            for &(i, weight) in self.configs.influence(digit) {
                let code = codes[i] + new * weight - old * weight;
                running += tables.0[i][code] - tables.0[i][codes[i]];
                codes[i] = code;
            }
            if step % RESYNC_PERIOD == 0 {
                running = self.evaluate(tables, &arms);
            }
            if running >= best_value - eps {
                let exact = self.evaluate(tables, &arms);
                if exact > best_value || (exact == best_value && arms < best) {
                    best_value = exact;
                    best.copy_from_slice(&arms);
                }
            }
        }
        Ok(OracleOutcome {
            assignment: best,
            value: best_value,
            path: OraclePath::Exact,
        })
    }

    pub fn coordinate_ascent<R: Rng + ?Sized>(
        &self,
        tables: &ScoreTables,
        restarts: usize,
        rng: &mut R,
    ) -> Result<OracleOutcome> {
        tables.check(&self.configs)?;
        if restarts == 0 {
            return Err(Error::ConfigInvalid(
                "local search needs at least one restart".into(),
            ));
        }
        let k = self.configs.k();
        let n = self.configs.n_units();
        let tol = 1e-12 * (1.0 + tables.magnitude());
        let mut best: Option<(Vec<usize>, f64)> = None;
        let mut codes = Vec::with_capacity(n);

        for _ in 0..restarts {
            let mut arms: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            self.configs.codes_into(&arms, &mut codes);
            loop {
                let mut changed = false;
                for unit in 0..n {
                    let current = arms[unit];
                    let mut choice = current;
                    let mut best_gain = 0.0;
                    for arm in (0..k).filter(|&a| a != current) {
                        let gain: f64 = self
                            .configs
                            .influence(unit)
                            .iter()
                            .map(|&(i, w)| {
                                let code = codes[i] + arm * w - current * w;
                                tables.0[i][code] - tables.0[i][codes[i]]
                            })
                            .sum();
                        if gain > best_gain + tol {
                            best_gain = gain;
                            choice = arm;
                        }
                    }
                    if choice != current {
                        for &(i, w) in self.configs.influence(unit) {
                            codes[i] = codes[i] + choice * w - current * w;
                        }
                        arms[unit] = choice;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            let value = self.evaluate(tables, &arms);
            let better = match &best {
                None => true,
                Some((b, v)) => value > *v || (value == *v && arms < *b),
            };
            if better {
                best = Some((arms, value));
            }
        }
        let (assignment, value) = best.expect("at least one restart");
        Ok(OracleOutcome {
            assignment,
            value,
            path: OraclePath::LocalSearch,
        })
    }
}

/// Exact maximizer; fails with `TooLarge` when `k^N > budget`.
pub fn brute_force_argmax(
    g: &InterferenceGraph,
    k: usize,
    tables: &ScoreTables,
    budget: u64,
) -> Result<OracleOutcome> {
    Oracle::new(g, k, OracleMode::Exact { budget })?.brute_force(tables, budget)
}

/// Best local optimum over `restarts` random starts of single-unit
/// coordinate ascent.
pub fn coordinate_ascent_argmax<R: Rng + ?Sized>(
    g: &InterferenceGraph,
    k: usize,
    tables: &ScoreTables,
    restarts: usize,
    rng: &mut R,
) -> Result<OracleOutcome> {
    Oracle::new(g, k, OracleMode::LocalSearch { restarts })?
        .coordinate_ascent(tables, restarts, rng)
}

pub fn maximize<R: Rng + ?Sized>(
    g: &InterferenceGraph,
    k: usize,
    tables: &ScoreTables,
    mode: OracleMode,
    rng: &mut R,
) -> Result<OracleOutcome> {
    Oracle::new(g, k, mode)?.maximize(tables, rng)
}
