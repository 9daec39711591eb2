//! Bandits with network interference: learners that exploit the
//! neighborhood structure of an interference graph, the baselines they are
//! compared against, and an experiment harness.

pub mod baselines;
pub mod env;
pub mod error;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod oracle;
pub mod pucb;
pub mod rng;

pub use env::{BanditInstance, LocalConfigs, MeanTable, RegretTrace, RunReport};
pub use error::{Error, Result};
pub use graph::{InterferenceGraph, NeighborhoodPartition, SquareColoring};
pub use oracle::{OracleMode, OraclePath};
pub use pucb::{Confidence, PucbConfig};
