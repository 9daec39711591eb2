//! Interference graphs and the structure the learners extract from them.
//!
//! Units are `0..n`. The closed neighborhood of a unit is the unit itself
//! followed by its neighbors in ascending order; every local-configuration
//! table in the crate is indexed in that order.

use std::collections::{HashMap, VecDeque};

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected, connected, loop-free graph over `n` units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct InterferenceGraph {
    adjacency: Vec<Vec<usize>>,
}

/// On-disk form: `{"n": N, "edges": [[i, j], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphFile> for InterferenceGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        InterferenceGraph::new(file.n, &edges)
    }
}

impl From<InterferenceGraph> for GraphFile {
    fn from(g: InterferenceGraph) -> Self {
        GraphFile {
            n: g.n_units(),
            edges: g.edges().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl InterferenceGraph {
    /// Builds a graph from an edge list. Duplicate edges are merged; self
    /// loops and disconnected graphs are rejected.
    pub fn new(n_units: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_units == 0 {
            return Err(Error::Infeasible("a graph needs at least one unit".into()));
        }
        let mut adjacency = vec![Vec::new(); n_units];
        for &(i, j) in edges {
            for index in [i, j] {
                if index >= n_units {
                    return Err(Error::IndexOutOfRange { index, n_units });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let g = InterferenceGraph { adjacency };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// The complete graph `K_n`.
    pub fn complete(n_units: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(n_units * n_units.saturating_sub(1) / 2);
        for i in 0..n_units {
            for j in i + 1..n_units {
                edges.push((i, j));
            }
        }
        Self::new(n_units, &edges)
    }

    pub fn n_units(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted open neighborhood of `unit`.
    pub fn neighbors(&self, unit: usize) -> &[usize] {
        &self.adjacency[unit]
    }

    pub fn degree(&self, unit: usize) -> usize {
        self.adjacency[unit].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Closed neighborhood in canonical order: `unit` first, then its
    /// neighbors ascending.
    pub fn closed_neighborhood(&self, unit: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree(unit) + 1);
        out.push(unit);
        out.extend_from_slice(&self.adjacency[unit]);
        out
    }

    fn sorted_closed_neighborhood(&self, unit: usize) -> Vec<usize> {
        let mut out = self.closed_neighborhood(unit);
        out.sort_unstable();
        out
    }

    /// Edges `(i, j)` with `i < j`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn is_connected(&self) -> bool {
        let n = self.n_units();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n_units() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                n_units: self.n_units(),
            })
        }
    }
}

/// Classes of units with identical closed neighborhoods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborhoodPartition {
    classes: Vec<Vec<usize>>,
    degrees: Vec<usize>,
    class_of: Vec<usize>,
}

impl NeighborhoodPartition {
    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Classes ordered by their smallest member; members ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, j: usize) -> &[usize] {
        &self.classes[j]
    }

    pub fn size(&self, j: usize) -> usize {
        self.classes[j].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Common degree of the members of class `j`.
    pub fn common_degree(&self, j: usize) -> usize {
        self.degrees[j]
    }

    pub fn common_degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn class_of(&self, unit: usize) -> usize {
        self.class_of[unit]
    }
}

pub fn neighborhood_partition(g: &InterferenceGraph) -> NeighborhoodPartition {
    let n = g.n_units();
    let mut by_neighborhood: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut degrees = Vec::new();
    let mut class_of = vec![0; n];
    // Ascending scan keeps classes ordered by their smallest member.
    for unit in 0..n {
        let key = g.sorted_closed_neighborhood(unit);
        let j = *by_neighborhood.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            degrees.push(g.degree(unit));
            classes.len() - 1
        });
        classes[j].push(unit);
        class_of[unit] = j;
    }
    NeighborhoodPartition {
        classes,
        degrees,
        class_of,
    }
}

/// True iff no two members of `set` are adjacent and no unit outside `set`
/// neighbors two of them.
///
/// A common neighbor inside `set` would already be adjacent to both
/// members, so this is equivalent to the members' closed neighborhoods
/// being pairwise disjoint.
pub fn is_doubly_independent(g: &InterferenceGraph, set: &[usize]) -> Result<bool> {
    for &i in set {
        g.check_index(i)?;
    }
    let mut members = set.to_vec();
    members.sort_unstable();
    members.dedup();
    let in_set = |u: usize| members.binary_search(&u).is_ok();
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            if g.has_edge(i, j) {
                return Ok(false);
            }
            let shared_outside = g
                .neighbors(i)
                .iter()
                .any(|&u| !in_set(u) && g.has_edge(u, j));
            if shared_outside {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Color classes whose members are pairwise at graph distance at least 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareColoring {
    classes: Vec<Vec<usize>>,
    max_degrees: Vec<usize>,
}

impl SquareColoring {
    /// Wraps explicit color classes, computing each class's max degree.
    /// Validity is checked by consumers that depend on it.
    pub fn from_classes(g: &InterferenceGraph, classes: Vec<Vec<usize>>) -> Result<Self> {
        for class in &classes {
            for &u in class {
                g.check_index(u)?;
            }
        }
        let max_degrees = classes
            .iter()
            .map(|c| c.iter().map(|&u| g.degree(u)).max().unwrap_or(0))
            .collect();
        Ok(SquareColoring {
            classes,
            max_degrees,
        })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn n_colors(&self) -> usize {
        self.classes.len()
    }

    /// Largest degree inside each color class.
    pub fn max_degrees(&self) -> &[usize] {
        &self.max_degrees
    }
}

/// Greedy distance-2 coloring visiting units in ascending order. Uses at
/// most `Δ² + 1` colors.
pub fn greedy_square_coloring(g: &InterferenceGraph) -> SquareColoring {
    let n = g.n_units();
    let mut color: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut blocked = Vec::new();
    for unit in 0..n {
        blocked.clear();
        blocked.resize(classes.len() + 1, false);
        for &v in g.neighbors(unit) {
            if let Some(c) = color[v] {
                blocked[c] = true;
            }
            for &w in g.neighbors(v) {
                if let Some(c) = color[w] {
                    blocked[c] = true;
                }
            }
        }
        let c = blocked
            .iter()
            .position(|&b| !b)
            .expect("one slot past the last color is free");
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(unit);
        color[unit] = Some(c);
    }
    SquareColoring::from_classes(g, classes).expect("indices come from the graph")
}

/// Clusters of consecutive unit indices, each a clique, with exactly
/// `min(r, |C_a|·|C_b|)` uniformly chosen edges between every pair of
/// clusters.
pub fn clique_sparse_graph(
    cluster_sizes: &[usize],
    r: usize,
    seed: u64,
) -> Result<InterferenceGraph> {
    if cluster_sizes.is_empty() || cluster_sizes.contains(&0) {
        return Err(Error::Infeasible("cluster sizes must be positive".into()));
    }
    if cluster_sizes.len() > 1 && r == 0 {
        return Err(Error::Infeasible(
            "several clusters with r = 0 cannot be connected".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::with_capacity(cluster_sizes.len());
    let mut n = 0;
    for &size in cluster_sizes {
        starts.push(n);
        n += size;
    }
    let mut edges = Vec::new();
    for (a, &size) in cluster_sizes.iter().enumerate() {
        let base = starts[a];
        for i in 0..size {
            for j in i + 1..size {
                edges.push((base + i, base + j));
            }
        }
    }
    for a in 0..cluster_sizes.len() {
        for b in a + 1..cluster_sizes.len() {
            let (sa, sb) = (cluster_sizes[a], cluster_sizes[b]);
            let count = r.min(sa * sb);
            for pair in index::sample(&mut rng, sa * sb, count).into_vec() {
                edges.push((starts[a] + pair / sb, starts[b] + pair % sb));
            }
        }
    }
    InterferenceGraph::new(n, &edges)
}

/// Random connected graph with every degree at most `max_degree`: a random
/// spanning tree honoring the bound, then random extra edges added until no
/// further pair can take one.
pub fn random_bounded_degree_graph(
    n_units: usize,
    max_degree: usize,
    seed: u64,
) -> Result<InterferenceGraph> {
    if n_units == 0 {
        return Err(Error::Infeasible("a graph needs at least one unit".into()));
    }
    if n_units == 1 {
        return InterferenceGraph::new(1, &[]);
    }
    if max_degree == 0
        || n_units * max_degree < 2 * (n_units - 1)
        || (max_degree == 1 && n_units > 2)
    {
        return Err(Error::Infeasible(format!(
            "no connected graph on {n_units} units has max degree {max_degree}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n_units).collect();
    order.shuffle(&mut rng);
    let mut degree = vec![0usize; n_units];
    let mut adjacent = vec![vec![false; n_units]; n_units];
    let mut edges = Vec::new();
    for pos in 1..n_units {
        let u = order[pos];
        let open: Vec<usize> = order[..pos]
            .iter()
            .copied()
            .filter(|&v| degree[v] < max_degree)
            .collect();
        // The most recently attached unit has degree 1, so `open` is nonempty
        // whenever max_degree >= 2.
        let v = open[rng.gen_range(0..open.len())];
        degree[u] += 1;
        degree[v] += 1;
        adjacent[u][v] = true;
        adjacent[v][u] = true;
        edges.push((u.min(v), u.max(v)));
    }
    let mut candidates: Vec<(usize, usize)> = (0..n_units)
        .flat_map(|i| (i + 1..n_units).map(move |j| (i, j)))
        .filter(|&(i, j)| !adjacent[i][j])
        .collect();
    candidates.shuffle(&mut rng);
    for (i, j) in candidates {
        if degree[i] < max_degree && degree[j] < max_degree {
            degree[i] += 1;
            degree[j] += 1;
            edges.push((i, j));
        }
    }
    InterferenceGraph::new(n_units, &edges)
}
