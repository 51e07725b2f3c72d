//! Simple undirected graphs and the structural predicates used throughout
//! the crate.
//!
//! A [`Graph`] is immutable once built. Vertices are `0..n`, edges are stored
//! as a sorted list of `(u, v)` pairs with `u < v`, and the position of an
//! edge in that list is its stable [`EdgeId`] index. Line graphs use these
//! indices as vertex labels.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod graph6;
mod planarity;

pub use graph6::{from_graph6, parse_graph6_lines, to_graph6};
pub use planarity::is_planar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// An edge `(u, v)` with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub u: usize,
    pub v: usize,
}

impl EdgeId {
    /// Builds the edge with its endpoints in canonical order.
    pub fn new(a: usize, b: usize) -> Self {
        if a < b {
            EdgeId { u: a, v: b }
        } else {
            EdgeId { u: b, v: a }
        }
    }

    pub fn shares_endpoint(&self, other: &EdgeId) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<EdgeId>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a simple graph, rejecting loops, duplicates and out-of-range
    /// endpoints. Edge order in the input is irrelevant.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange { u: a, v: b, n });
            }
            list.push(EdgeId::new(a, b));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].u, w[0].v));
        }
        Ok(Self::from_sorted_edges(n, list))
    }

    fn from_sorted_edges(n: usize, edges: Vec<EdgeId>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Graph { n, edges, adjacency }
    }

    /// Builds a graph from pairs, silently merging duplicates and ignoring
    /// loops. Used by internal constructions that are known to be simple.
    fn from_pairs_lossy(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut list: Vec<EdgeId> = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| EdgeId::new(a, b))
            .collect();
        list.sort_unstable();
        list.dedup();
        Self::from_sorted_edges(n, list)
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_edges(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        Self::from_pairs_lossy(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::from_pairs_lossy(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Self::from_pairs_lossy(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn star(leaves: usize) -> Self {
        Self::from_pairs_lossy(leaves + 1, (1..=leaves).map(|i| (0, i)))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_pairs_lossy(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    /// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
    pub fn petersen() -> Self {
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            pairs.push((i, i + 5));
            pairs.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_pairs_lossy(10, pairs)
    }

    /// The triangular prism (two triangles joined by a perfect matching).
    pub fn prism(k: usize) -> Self {
        assert!(k >= 3);
        let mut pairs = Vec::new();
        for i in 0..k {
            pairs.push((i, (i + 1) % k));
            pairs.push((k + i, k + (i + 1) % k));
            pairs.push((i, k + i));
        }
        Self::from_pairs_lossy(2 * k, pairs)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Stable index of edge `{a, b}`, if present.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&EdgeId::new(a, b)).ok()
    }

    /// Edge indices incident to `v`, in neighbor order.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.adjacency[v]
            .iter()
            .map(|&w| self.edge_index(v, w).expect("adjacency is consistent with the edge list"))
            .collect()
    }

    pub fn is_cubic(&self) -> bool {
        self.n > 0 && self.adjacency.iter().all(|a| a.len() == 3)
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let pairs = self.edges.iter().filter_map(|e| {
            let (a, b) = (position[e.u], position[e.v]);
            (a != usize::MAX && b != usize::MAX).then_some((a, b))
        });
        Self::from_pairs_lossy(vertices.len(), pairs)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }
}

/// Line graph of `g`. Vertex `i` of the result is edge `i` of `g`; the
/// returned map gives that edge explicitly.
pub fn line_graph(g: &Graph) -> (Graph, Vec<EdgeId>) {
    let mut pairs = Vec::new();
    for v in 0..g.order() {
        let inc = g.incident_edges(v);
        for (i, &a) in inc.iter().enumerate() {
            for &b in &inc[i + 1..] {
                pairs.push((a, b));
            }
        }
    }
    (Graph::from_pairs_lossy(g.size(), pairs), g.edges().to_vec())
}

/// Join: disjoint union with every cross pair added. Vertices of `g2` are
/// shifted by `g1.order()`.
pub fn join(g1: &Graph, g2: &Graph) -> Graph {
    let n1 = g1.order();
    let n = n1 + g2.order();
    let pairs = g1
        .edges()
        .iter()
        .map(|e| (e.u, e.v))
        .chain(g2.edges().iter().map(|e| (e.u + n1, e.v + n1)))
        .chain((0..n1).flat_map(|u| (n1..n).map(move |v| (u, v))));
    Graph::from_pairs_lossy(n, pairs)
}

/// `k`-fold self-join: `G`, `G∧G`, `(G∧G)∧(G∧G)`, ...
pub fn iterated_self_join(g: &Graph, k: usize) -> Graph {
    (0..k).fold(g.clone(), |acc, _| join(&acc, &acc))
}

/// Bipartition `(side_a, side_b)` or `None` when an odd cycle exists.
pub fn is_bipartite(g: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    two_color(g).ok().map(|side| {
        let (a, b): (Vec<usize>, Vec<usize>) = (0..g.order()).partition(|&v| !side[v]);
        (a, b)
    })
}

/// An odd cycle of `g` as a vertex sequence, if one exists.
pub fn odd_cycle(g: &Graph) -> Option<Vec<usize>> {
    two_color(g).err()
}

// BFS 2-coloring. On failure returns an odd cycle through the conflicting edge.
fn two_color(g: &Graph) -> Result<Vec<bool>, Vec<usize>> {
    let n = g.order();
    let mut side = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    side[w] = !side[v];
                    parent[w] = v;
                    queue.push_back(w);
                } else if side[w] == side[v] {
                    // walk both ends up to their common ancestor
                    let (mut a, mut b) = (v, w);
                    let mut left = vec![a];
                    let mut right = vec![b];
                    while a != b {
                        if depth[a] >= depth[b] {
                            a = parent[a];
                            left.push(a);
                        } else {
                            b = parent[b];
                            right.push(b);
                        }
                    }
                    right.pop();
                    left.extend(right.into_iter().rev());
                    return Err(left);
                }
            }
        }
    }
    Ok(side)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HamiltonOutcome {
    Cycle { cycle: Vec<usize> },
    NoCycle { nodes: u64 },
    Inconclusive { nodes: u64 },
}

impl HamiltonOutcome {
    pub fn cycle(&self) -> Option<&[usize]> {
        match self {
            HamiltonOutcome::Cycle { cycle } => Some(cycle),
            _ => None,
        }
    }
}

pub const DEFAULT_HAMILTON_BUDGET: u64 = 50_000_000;

/// Exhaustive Hamiltonian cycle search with a node budget.
///
/// Backtracks from vertex 0, pruning whenever an unvisited vertex has fewer
/// than two usable neighbors (its remaining unvisited neighbors plus the path
/// endpoints) or the unvisited vertices stop being reachable from the current
/// endpoint.
pub fn is_hamiltonian(g: &Graph, budget: u64) -> Result<HamiltonOutcome, GraphError> {
    let n = g.order();
    if n < 3 {
        return Err(GraphError::InvalidArgument(format!(
            "Hamiltonicity needs at least 3 vertices, got {n}"
        )));
    }
    if (0..n).any(|v| g.degree(v) < 2) || !g.is_connected() {
        return Ok(HamiltonOutcome::NoCycle { nodes: 0 });
    }
    let mut search = HamiltonSearch {
        g,
        visited: vec![false; n],
        path: vec![0],
        nodes: 0,
        budget,
    };
    search.visited[0] = true;
    Ok(match search.extend() {
        Some(true) => HamiltonOutcome::Cycle { cycle: search.path },
        Some(false) => HamiltonOutcome::NoCycle { nodes: search.nodes },
        None => HamiltonOutcome::Inconclusive { nodes: search.nodes },
    })
}

struct HamiltonSearch<'a> {
    g: &'a Graph,
    visited: Vec<bool>,
    path: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl HamiltonSearch<'_> {
    // Some(true): found; Some(false): exhausted subtree; None: budget hit.
    fn extend(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let n = self.g.order();
        let last = *self.path.last().unwrap();
        if self.path.len() == n {
            return Some(self.g.has_edge(last, 0));
        }
        if !self.feasible(last) {
            return Some(false);
        }
        // Forced move: an unvisited neighbor of `last` with only one other
        // way out must be taken next.
        let candidates: Vec<usize> = self.g.neighbors(last).iter().copied().filter(|&w| !self.visited[w]).collect();
        let forced: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&w| self.usable_degree(w, last) < 2)
            .collect();
        let order = match forced.len() {
            _ if self.path.len() == 1 => candidates,
            0 => candidates,
            1 => forced,
            _ => return Some(false),
        };
        for w in order {
            self.visited[w] = true;
            self.path.push(w);
            match self.extend() {
                Some(false) => {}
                other => return other,
            }
            self.path.pop();
            self.visited[w] = false;
        }
        Some(false)
    }

    // Neighbors of w that could still sit next to it on the cycle, not
    // counting the current endpoint `last`.
    fn usable_degree(&self, w: usize, last: usize) -> usize {
        self.g
            .neighbors(w)
            .iter()
            .filter(|&&x| x != last && (!self.visited[x] || x == 0))
            .count()
    }

    fn feasible(&self, last: usize) -> bool {
        let n = self.g.order();
        // every unvisited vertex needs two usable neighbors
        for v in 0..n {
            if self.visited[v] {
                continue;
            }
            let usable = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&x| !self.visited[x] || x == 0 || x == last)
                .count();
            if usable < 2 {
                return false;
            }
        }
        // unvisited vertices must be reachable from `last` through unvisited ones
        let mut seen = vec![false; n];
        let mut stack = vec![last];
        seen[last] = true;
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            for &w in self.g.neighbors(v) {
                if !seen[w] && !self.visited[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n - self.path.len()
    }
}

/// True iff `cycle` is a Hamiltonian cycle of `g`.
pub fn validate_hamiltonian_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let n = g.order();
    if cycle.len() != n || n < 3 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

/// Articulation points via Tarjan low-links (iterative).
pub fn articulation_points(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut pos)) = stack.last_mut() {
            if *pos < g.degree(v) {
                let w = g.neighbors(v)[*pos];
                *pos += 1;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&v| is_cut[v]).collect()
}

/// Connected, at least 3 vertices, and no cut vertex.
pub fn is_biconnected(g: &Graph) -> bool {
    g.order() >= 3 && g.is_connected() && articulation_points(g).is_empty()
}

/// A perfect matching of `g` as edge pairs, or `None`.
///
/// Exhaustive: always matches the lowest-index uncovered vertex next.
pub fn has_perfect_matching(g: &Graph) -> Option<Vec<EdgeId>> {
    let n = g.order();
    if n % 2 == 1 {
        return None;
    }
    let mut mate = vec![usize::MAX; n];
    fn search(g: &Graph, mate: &mut [usize], from: usize) -> bool {
        let Some(v) = (from..g.order()).find(|&v| mate[v] == usize::MAX) else {
            return true;
        };
        for &w in g.neighbors(v) {
            if mate[w] == usize::MAX {
                mate[v] = w;
                mate[w] = v;
                if search(g, mate, v + 1) {
                    return true;
                }
                mate[v] = usize::MAX;
                mate[w] = usize::MAX;
            }
        }
        false
    }
    search(g, &mut mate, 0).then(|| {
        (0..n)
            .filter(|&v| v < mate[v])
            .map(|v| EdgeId::new(v, mate[v]))
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub max_degree: usize,
    pub regular: bool,
    pub degrees: Vec<usize>,
}

pub fn degree_profile(g: &Graph) -> DegreeProfile {
    let degrees: Vec<usize> = (0..g.order()).map(|v| g.degree(v)).collect();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let regular = degrees.iter().all(|&d| d == max_degree);
    DegreeProfile { max_degree, regular, degrees }
}
