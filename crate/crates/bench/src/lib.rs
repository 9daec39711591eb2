//! Fixtures shared by the benchmarks.

use netband::graph::random_bounded_degree_graph;
use netband::instances::random_instance;
use netband::BanditInstance;

/// Random instance on a connected graph with maximum degree `max_degree`.
pub fn fixture(n_units: usize, max_degree: usize, k: usize, seed: u64) -> BanditInstance {
    let g = random_bounded_degree_graph(n_units, max_degree, seed).expect("feasible graph");
    random_instance(&g, k, seed).expect("valid instance")
}
