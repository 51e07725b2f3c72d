//! Exact chromatic number and chromatic index with certificates.
//!
//! The vertex solver is a DSATUR branch-and-bound: a greedy DSATUR pass gives
//! the initial upper bound, a maximum clique the lower bound, and the search
//! only ever opens a new color when it stays strictly below the incumbent.
//! Ties in vertex selection break on degree, then on the lowest index, so
//! every run on the same input produces the same certificate.
//!
//! The chromatic index is the chromatic number of the line graph, seeded
//! with the Vizing interval `[Δ, Δ + 1]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{degree_profile, is_bipartite, line_graph, validate_hamiltonian_cycle, Graph};
use crate::ortho::{OrthoColoring, RationalVector};

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChromaError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("improper coloring: elements {0} and {1} are adjacent and share color {2}")]
    Improper(usize, usize, usize),
    #[error("coloring has {got} entries, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("color {0} is unused but k = {1}")]
    UnusedColor(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Vertex,
    Edge,
}

/// A proper coloring using exactly the colors `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub target: Target,
    pub k: usize,
    pub assignment: Vec<usize>,
}

impl Coloring {
    /// Wraps an assignment, setting `k` to one past the largest color.
    pub fn new(target: Target, assignment: Vec<usize>) -> Self {
        let k = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
        Coloring { target, k, assignment }
    }

    /// Checks length, properness on `g` (vertices, or edges of `g` sharing
    /// an endpoint), and that every color below `k` occurs.
    pub fn validate(&self, g: &Graph) -> Result<(), ChromaError> {
        let expected = match self.target {
            Target::Vertex => g.order(),
            Target::Edge => g.size(),
        };
        if self.assignment.len() != expected {
            return Err(ChromaError::WrongLength { got: self.assignment.len(), expected });
        }
        let mut used = vec![false; self.k];
        for &c in &self.assignment {
            if c >= self.k {
                return Err(ChromaError::InvalidArgument(format!("color {c} out of range for k = {}", self.k)));
            }
            used[c] = true;
        }
        if let Some(c) = used.iter().position(|u| !u) {
            return Err(ChromaError::UnusedColor(c, self.k));
        }
        let check = |a: usize, b: usize| {
            if self.assignment[a] == self.assignment[b] {
                Err(ChromaError::Improper(a, b, self.assignment[a]))
            } else {
                Ok(())
            }
        };
        match self.target {
            Target::Vertex => g.edges().iter().try_for_each(|e| check(e.u, e.v)),
            Target::Edge => (0..g.order()).try_for_each(|v| {
                let inc = g.incident_edges(v);
                inc.iter()
                    .enumerate()
                    .try_for_each(|(i, &a)| inc[i + 1..].iter().try_for_each(|&b| check(a.min(b), a.max(b))))
            }),
        }
    }
}

/// Why the reported value cannot be lowered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowerBoundWitness {
    /// A clique of this size needs this many colors (for edges: a star or triangle).
    Clique { elements: Vec<usize> },
    /// The edges at this vertex pairwise meet.
    MaxDegree { vertex: usize, degree: usize },
    /// Δ-regular graph of odd order: each of Δ color classes would be a
    /// perfect matching.
    OddOrderRegular { degree: usize, order: usize },
    /// The search ruled out one fewer color exhaustively.
    Exhaustion { nodes: u64 },
    /// A caller-supplied lower bound was taken as given.
    Hint { value: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChromaResult {
    pub value: usize,
    pub certificate: Coloring,
    pub lower_bound: LowerBoundWitness,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ChromaOutcome {
    Exact(ChromaResult),
    /// Budget exhausted; the true value lies in `lower..=upper` and `best`
    /// achieves `upper`.
    Inconclusive { lower: usize, upper: usize, best: Coloring, nodes: u64 },
}

impl ChromaOutcome {
    pub fn exact(&self) -> Option<&ChromaResult> {
        match self {
            ChromaOutcome::Exact(r) => Some(r),
            ChromaOutcome::Inconclusive { .. } => None,
        }
    }

    pub fn interval(&self) -> (usize, usize) {
        match self {
            ChromaOutcome::Exact(r) => (r.value, r.value),
            ChromaOutcome::Inconclusive { lower, upper, .. } => (*lower, *upper),
        }
    }

    /// The best coloring found, exact or not.
    pub fn coloring(&self) -> &Coloring {
        match self {
            ChromaOutcome::Exact(r) => &r.certificate,
            ChromaOutcome::Inconclusive { best, .. } => best,
        }
    }
}

/// Exact chromatic number of `g`.
///
/// Hints must be valid bounds; a lower hint is trusted, an upper hint caps
/// the search and is an error if no coloring within it exists.
pub fn chromatic_number(
    g: &Graph,
    lower_hint: Option<usize>,
    upper_hint: Option<usize>,
    budget: u64,
) -> Result<ChromaOutcome, ChromaError> {
    if let (Some(lo), Some(hi)) = (lower_hint, upper_hint) {
        if lo > hi {
            return Err(ChromaError::InvalidArgument(format!("lower hint {lo} exceeds upper hint {hi}")));
        }
    }
    let n = g.order();
    if n == 0 {
        return Ok(ChromaOutcome::Exact(ChromaResult {
            value: 0,
            certificate: Coloring::new(Target::Vertex, vec![]),
            lower_bound: LowerBoundWitness::Clique { elements: vec![] },
            nodes: 0,
        }));
    }

    let greedy = dsatur_greedy(g);
    let greedy_k = greedy.iter().max().unwrap() + 1;
    if let Some(lo) = lower_hint {
        if lo > greedy_k {
            return Err(ChromaError::InvalidArgument(format!(
                "lower hint {lo} exceeds the greedy upper bound {greedy_k}"
            )));
        }
    }
    let clique = match max_clique(g, budget) {
        CliqueOutcome::Exact(c) | CliqueOutcome::Inconclusive(c) => c,
    };
    let lower = clique.len().max(lower_hint.unwrap_or(0));

    let mut solver = Dsatur::new(g, budget);
    let cap = upper_hint.map_or(greedy_k, |h| greedy_k.min(h));
    if cap < greedy_k {
        solver.best = cap + 1;
    } else {
        solver.best = greedy_k;
        solver.best_coloring = greedy;
    }
    solver.lower = lower;
    let finished = solver.best <= lower || solver.run().is_ok();

    if solver.best_coloring.is_empty() {
        return if finished {
            Err(ChromaError::InvalidArgument(format!("upper hint {} admits no coloring", cap)))
        } else {
            // cannot happen unless the budget runs out before any leaf
            let best = Coloring::new(Target::Vertex, dsatur_greedy(g));
            Ok(ChromaOutcome::Inconclusive { lower, upper: greedy_k, best, nodes: solver.nodes })
        };
    }
    let certificate = Coloring::new(Target::Vertex, solver.best_coloring);
    debug_assert!(certificate.validate(g).is_ok());
    if !finished {
        return Ok(ChromaOutcome::Inconclusive {
            lower,
            upper: certificate.k,
            best: certificate,
            nodes: solver.nodes,
        });
    }
    let value = certificate.k;
    let lower_bound = if clique.len() == value {
        LowerBoundWitness::Clique { elements: clique }
    } else if lower_hint == Some(value) {
        LowerBoundWitness::Hint { value }
    } else {
        LowerBoundWitness::Exhaustion { nodes: solver.nodes }
    };
    Ok(ChromaOutcome::Exact(ChromaResult { value, certificate, lower_bound, nodes: solver.nodes }))
}

/// Exact chromatic index, computed on the line graph inside `[Δ, Δ + 1]`.
pub fn chromatic_index(g: &Graph, budget: u64) -> Result<ChromaOutcome, ChromaError> {
    if g.size() == 0 {
        return Err(ChromaError::InvalidArgument("chromatic index needs at least one edge".into()));
    }
    let profile = degree_profile(g);
    let delta = profile.max_degree;
    let (lg, _) = line_graph(g);
    let outcome = chromatic_number(&lg, Some(delta), Some(delta + 1), budget)?;
    let to_edges = |mut c: Coloring| {
        c.target = Target::Edge;
        c
    };
    Ok(match outcome {
        ChromaOutcome::Exact(r) => {
            let lower_bound = if r.value == delta {
                let vertex = profile.degrees.iter().position(|&d| d == delta).unwrap();
                LowerBoundWitness::MaxDegree { vertex, degree: delta }
            } else if let LowerBoundWitness::Clique { .. } = r.lower_bound {
                r.lower_bound
            } else if profile.regular && g.order() % 2 == 1 {
                LowerBoundWitness::OddOrderRegular { degree: delta, order: g.order() }
            } else {
                LowerBoundWitness::Exhaustion { nodes: r.nodes }
            };
            ChromaOutcome::Exact(ChromaResult {
                value: r.value,
                certificate: to_edges(r.certificate),
                lower_bound,
                nodes: r.nodes,
            })
        }
        ChromaOutcome::Inconclusive { lower, upper, best, nodes } => ChromaOutcome::Inconclusive {
            lower: lower.max(delta),
            upper,
            best: to_edges(best),
            nodes,
        },
    })
}

fn pick_vertex(g: &Graph, color: &[usize], saturation: &[usize]) -> Option<usize> {
    (0..g.order())
        .filter(|&v| color[v] == UNCOLORED)
        .max_by(|&a, &b| {
            saturation[a]
                .cmp(&saturation[b])
                .then(g.degree(a).cmp(&g.degree(b)))
                .then(b.cmp(&a))
        })
}

const UNCOLORED: usize = usize::MAX;

fn dsatur_greedy(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut color = vec![UNCOLORED; n];
    let mut counts = vec![vec![0u32; n + 1]; n];
    let mut saturation = vec![0; n];
    while let Some(v) = pick_vertex(g, &color, &saturation) {
        let c = (0..=n).find(|&c| counts[v][c] == 0).unwrap();
        color[v] = c;
        for &w in g.neighbors(v) {
            counts[w][c] += 1;
            if counts[w][c] == 1 {
                saturation[w] += 1;
            }
        }
    }
    color
}

struct BudgetExceeded;

struct Dsatur<'a> {
    g: &'a Graph,
    color: Vec<usize>,
    counts: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    best: usize,
    best_coloring: Vec<usize>,
    lower: usize,
    nodes: u64,
    budget: u64,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, budget: u64) -> Self {
        let n = g.order();
        Dsatur {
            g,
            color: vec![UNCOLORED; n],
            counts: vec![vec![0; n + 1]; n],
            saturation: vec![0; n],
            best: n + 1,
            best_coloring: Vec::new(),
            lower: 0,
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self) -> Result<(), BudgetExceeded> {
        self.search(0, 0).map(|_| ())
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        for &w in self.g.neighbors(v) {
            self.counts[w][c] += 1;
            if self.counts[w][c] == 1 {
                self.saturation[w] += 1;
            }
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = UNCOLORED;
        for &w in self.g.neighbors(v) {
            self.counts[w][c] -= 1;
            if self.counts[w][c] == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    // Ok(true) once the incumbent meets the lower bound.
    fn search(&mut self, colored: usize, used: usize) -> Result<bool, BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded);
        }
        if used >= self.best {
            return Ok(false);
        }
        if colored == self.g.order() {
            self.best = used;
            self.best_coloring = self.color.clone();
            return Ok(used <= self.lower);
        }
        let v = pick_vertex(self.g, &self.color, &self.saturation).unwrap();
        if self.saturation[v] >= self.best - 1 {
            return Ok(false);
        }
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if c >= self.best - 1 {
                break;
            }
            if self.counts[v][c] != 0 {
                continue;
            }
            self.assign(v, c);
            let done = self.search(colored + 1, used.max(c + 1));
            self.unassign(v, c);
            if done? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueOutcome {
    Exact(Vec<usize>),
    /// Budget hit; the clique is only a lower bound on the clique number.
    Inconclusive(Vec<usize>),
}

impl CliqueOutcome {
    pub fn clique(&self) -> &[usize] {
        match self {
            CliqueOutcome::Exact(c) | CliqueOutcome::Inconclusive(c) => c,
        }
    }
}

/// Maximum clique by branch-and-bound over candidate sets.
pub fn max_clique(g: &Graph, budget: u64) -> CliqueOutcome {
    struct State<'a> {
        g: &'a Graph,
        best: Vec<usize>,
        nodes: u64,
        budget: u64,
    }
    fn expand(st: &mut State, current: &mut Vec<usize>, candidates: Vec<usize>) -> bool {
        st.nodes += 1;
        if st.nodes > st.budget {
            return false;
        }
        if current.len() > st.best.len() {
            st.best = current.clone();
        }
        for (i, &v) in candidates.iter().enumerate() {
            if current.len() + candidates.len() - i <= st.best.len() {
                break;
            }
            let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|&w| st.g.has_edge(v, w)).collect();
            current.push(v);
            let ok = expand(st, current, next);
            current.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut order: Vec<usize> = (0..g.order()).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let mut st = State { g, best: Vec::new(), nodes: 0, budget };
    let complete = expand(&mut st, &mut Vec::new(), order);
    let mut best = st.best;
    best.sort_unstable();
    if complete {
        CliqueOutcome::Exact(best)
    } else {
        CliqueOutcome::Inconclusive(best)
    }
}

/// 3-edge-coloring of a cubic graph from a Hamiltonian cycle: cycle edges
/// alternate colors 0 and 1, the remaining perfect matching gets color 2.
pub fn tait_3_edge_coloring(g: &Graph, cycle: &[usize]) -> Result<Coloring, ChromaError> {
    if !g.is_cubic() {
        return Err(ChromaError::InvalidArgument("graph is not 3-regular".into()));
    }
    if g.order() % 2 == 1 {
        return Err(ChromaError::InvalidArgument(format!("order {} is odd", g.order())));
    }
    if !validate_hamiltonian_cycle(g, cycle) {
        return Err(ChromaError::InvalidArgument("not a Hamiltonian cycle of the graph".into()));
    }
    let n = cycle.len();
    let mut assignment = vec![2; g.size()];
    for i in 0..n {
        let e = g.edge_index(cycle[i], cycle[(i + 1) % n]).unwrap();
        assignment[e] = i % 2;
    }
    let coloring = Coloring::new(Target::Edge, assignment);
    coloring.validate(g)?;
    Ok(coloring)
}

/// Canonical lift: color `i` becomes the `i`-th standard basis vector of
/// `Q^k`.
pub fn coloring_to_orthogonal(g: &Graph, c: &Coloring) -> Result<OrthoColoring, ChromaError> {
    c.validate(g)?;
    let vectors = c
        .assignment
        .iter()
        .map(|&i| RationalVector::unit(i, c.k))
        .collect();
    Ok(OrthoColoring::exact(c.target, c.k, vectors))
}

/// Convenience: 2-coloring of a bipartite graph with at least one edge.
pub fn bipartite_coloring(g: &Graph) -> Option<Coloring> {
    let (_, side_b) = is_bipartite(g)?;
    let mut assignment = vec![0; g.order()];
    for v in side_b {
        assignment[v] = 1;
    }
    Some(Coloring::new(Target::Vertex, assignment))
}
