//! Numerical search for orthogonal (edge-)colorings in a fixed dimension.
//!
//! Each element carries a unit vector of `R^d`. The penalty
//! `Σ_{uv ∈ E} ⟨x_u, x_v⟩²` vanishes exactly on orthogonal colorings. Descent
//! projects the Euclidean gradient onto the tangent space of each sphere,
//! steps with Armijo backtracking, and retracts by renormalizing.
//!
//! A successful run is evidence, not proof. Upper bounds on the orthogonal
//! number only come from [`round_to_rational`], which rounds to fractions
//! and re-verifies with exact arithmetic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chroma::Target;
use crate::graph::{line_graph, Graph};
use crate::ortho::{verify_ortho_coloring, OrthoColoring, RationalVector, VerifyMode, Violation};

mod rounding;

pub use rounding::best_rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("assignment has {got} rows of dimension {dim}, graph needs {expected}")]
    Shape { got: usize, dim: usize, expected: usize },
    #[error("graph has no edges")]
    NoEdges,
}

/// Unit vectors of `R^d`, one per vertex, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereAssignment {
    d: usize,
    x: Vec<f64>,
}

pub const NORM_TOLERANCE: f64 = 1e-12;

impl SphereAssignment {
    /// Normalizes each row. Zero rows are rejected.
    pub fn from_rows(d: usize, rows: &[Vec<f64>]) -> Result<Self, SearchError> {
        let mut x = Vec::with_capacity(rows.len() * d);
        for (v, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(SearchError::Config(format!("row {v} has dimension {}, expected {d}", r.len())));
            }
            x.extend_from_slice(r);
        }
        let mut a = SphereAssignment { d, x };
        for v in 0..rows.len() {
            if a.row(v).iter().all(|&c| c == 0.0) {
                return Err(SearchError::Config(format!("row {v} is the zero vector")));
            }
        }
        a.renormalize();
        Ok(a)
    }

    /// Independent standard normal coordinates, normalized.
    pub fn random(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Self {
        loop {
            let x: Vec<f64> = (0..n * d).map(|_| StandardNormal.sample(rng)).collect();
            let mut a = SphereAssignment { d, x };
            if (0..n).all(|v| a.row(v).iter().any(|&c| c != 0.0)) {
                a.renormalize();
                return a;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.x.len().checked_div(self.d).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.x[v * self.d..(v + 1) * self.d]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.x.chunks(self.d.max(1)).map(<[f64]>::to_vec).collect()
    }

    fn renormalize(&mut self) {
        for row in self.x.chunks_mut(self.d) {
            let norm = row.iter().map(|c| c * c).sum::<f64>().sqrt();
            row.iter_mut().for_each(|c| *c /= norm);
        }
    }

    /// Largest deviation of a row norm from 1.
    pub fn max_norm_deviation(&self) -> f64 {
        self.x
            .chunks(self.d)
            .map(|r| (r.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    fn check(&self, g: &Graph) -> Result<(), SearchError> {
        if self.len() != g.order() {
            return Err(SearchError::Shape { got: self.len(), dim: self.d, expected: g.order() });
        }
        Ok(())
    }

    fn dot(&self, u: usize, v: usize) -> f64 {
        self.row(u).iter().zip(self.row(v)).map(|(a, b)| a * b).sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Σ_{uv ∈ E} ⟨x_u, x_v⟩²`.
pub fn loss(a: &SphereAssignment, g: &Graph) -> Result<f64, SearchError> {
    a.check(g)?;
    Ok(loss_unchecked(a, g))
}

fn loss_unchecked(a: &SphereAssignment, g: &Graph) -> f64 {
    g.edges().iter().map(|e| a.dot(e.u, e.v).powi(2)).sum()
}

/// max over edges of |⟨x_u, x_v⟩| (rows are unit vectors).
pub fn residual(a: &SphereAssignment, g: &Graph) -> Result<f64, SearchError> {
    a.check(g)?;
    Ok(residual_unchecked(a, g))
}

fn residual_unchecked(a: &SphereAssignment, g: &Graph) -> f64 {
    g.edges().iter().map(|e| a.dot(e.u, e.v).abs()).fold(0.0, f64::max)
}

/// Gradient of the penalty in the ambient coordinates: at `u`,
/// `Σ_{v ~ u} 2⟨x_u, x_v⟩ x_v`.
pub fn euclidean_gradient(a: &SphereAssignment, g: &Graph) -> Result<Vec<f64>, SearchError> {
    a.check(g)?;
    Ok(euclidean_gradient_unchecked(a, g))
}

fn euclidean_gradient_unchecked(a: &SphereAssignment, g: &Graph) -> Vec<f64> {
    let d = a.d;
    let mut grad = vec![0.0; a.x.len()];
    for e in g.edges() {
        let w = 2.0 * a.dot(e.u, e.v);
        for k in 0..d {
            grad[e.u * d + k] += w * a.x[e.v * d + k];
            grad[e.v * d + k] += w * a.x[e.u * d + k];
        }
    }
    grad
}

/// Euclidean gradient with each row's radial component removed.
pub fn gradient(a: &SphereAssignment, g: &Graph) -> Result<Vec<f64>, SearchError> {
    a.check(g)?;
    Ok(tangent_gradient(a, g))
}

fn tangent_gradient(a: &SphereAssignment, g: &Graph) -> Vec<f64> {
    let d = a.d;
    let mut grad = euclidean_gradient_unchecked(a, g);
    for (gr, xr) in grad.chunks_mut(d).zip(a.x.chunks(d)) {
        let radial = dot(gr, xr);
        gr.iter_mut().zip(xr).for_each(|(gi, xi)| *gi -= radial * xi);
    }
    grad
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveConfig {
    pub d: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Success threshold on the residual.
    pub tolerance: f64,
    pub armijo_c: f64,
    pub initial_step: f64,
    pub step_shrink: f64,
    pub gradient_tolerance: f64,
    pub seed: u64,
    /// Denominator cap for rational rounding; `None` skips rounding.
    pub max_denominator: Option<u64>,
}

impl SolveConfig {
    pub fn new(d: usize) -> Self {
        SolveConfig {
            d,
            restarts: 100,
            max_iterations: 10_000,
            tolerance: 1e-9,
            armijo_c: 1e-4,
            initial_step: 1.0,
            step_shrink: 0.5,
            gradient_tolerance: 1e-12,
            seed: 0,
            max_denominator: Some(1_000_000),
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::Config(m.to_string()));
        if self.d == 0 {
            return bad("dimension must be positive");
        }
        if self.restarts == 0 || self.max_iterations == 0 {
            return bad("restarts and iterations must be positive");
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return bad("tolerance must lie in (0, 1)");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) || !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return bad("Armijo constant and shrink factor must lie in (0, 1)");
        }
        if self.initial_step <= 0.0 {
            return bad("initial step must be positive");
        }
        if self.max_denominator == Some(0) {
            return bad("denominator cap must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Success,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingReport {
    pub attempted: bool,
    pub certified: bool,
    pub max_denominator: Option<u64>,
    /// Denominator cap at which exact verification first passed.
    pub denominator_used: Option<u64>,
    pub failing_pairs: usize,
    /// Certified vectors as rational strings.
    pub certificate: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub target: Target,
    pub d: usize,
    pub residual: f64,
    pub restarts: usize,
    pub seed: u64,
    pub best_restart: usize,
    pub assignment: Option<Vec<Vec<f64>>>,
    pub rounding: RoundingReport,
    pub per_restart_losses: Vec<f64>,
    pub per_restart_residuals: Vec<f64>,
    #[serde(skip)]
    pub certificate: Option<OrthoColoring>,
}

impl SolveReport {
    /// `restart,loss,residual` rows for plotting.
    pub fn restart_csv(&self) -> String {
        let mut out = String::from("restart,loss,residual\n");
        for (i, (l, r)) in self.per_restart_losses.iter().zip(&self.per_restart_residuals).enumerate() {
            out.push_str(&format!("{i},{l:e},{r:e}\n"));
        }
        out
    }
}

/// One restart's outcome.
#[derive(Debug, Clone)]
pub struct Descent {
    pub assignment: SphereAssignment,
    pub loss: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Loss before each accepted step, then the final loss.
    pub trace: Vec<f64>,
}

/// Riemannian gradient descent from `start` with Armijo backtracking.
pub fn descend(g: &Graph, start: SphereAssignment, cfg: &SolveConfig, keep_trace: bool) -> Descent {
    let mut x = start;
    let mut f = loss_unchecked(&x, g);
    let mut trace = Vec::new();
    let mut iterations = 0;
    while iterations < cfg.max_iterations && f > 0.0 {
        let grad = tangent_gradient(&x, g);
        let gn2 = dot(&grad, &grad);
        if gn2.sqrt() <= cfg.gradient_tolerance {
            break;
        }
        if keep_trace {
            trace.push(f);
        }
        let mut t = cfg.initial_step;
        let mut accepted = None;
        while t > 1e-30 {
            let mut y = x.clone();
            y.x.iter_mut().zip(&grad).for_each(|(yi, gi)| *yi -= t * gi);
            y.renormalize();
            let fy = loss_unchecked(&y, g);
            if fy <= f - cfg.armijo_c * t * gn2 {
                accepted = Some((y, fy));
                break;
            }
            t *= cfg.step_shrink;
        }
        let Some((y, fy)) = accepted else { break };
        x = y;
        f = fy;
        iterations += 1;
    }
    if keep_trace {
        trace.push(f);
    }
    let residual = residual_unchecked(&x, g);
    Descent { assignment: x, loss: f, residual, iterations, trace }
}

/// RNG for restart `index`: one ChaCha stream per restart under the seed.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Multi-restart search for an orthogonal `d`-coloring of the vertices.
pub fn search_ortho_coloring(g: &Graph, cfg: &SolveConfig) -> Result<SolveReport, SearchError> {
    run_search(g, g, Target::Vertex, cfg)
}

/// Search on the line graph, reported against `g`'s edge indices.
pub fn search_ortho_edge_coloring(g: &Graph, cfg: &SolveConfig) -> Result<SolveReport, SearchError> {
    if g.size() == 0 {
        return Err(SearchError::NoEdges);
    }
    let (lg, _) = line_graph(g);
    run_search(&lg, g, Target::Edge, cfg)
}

fn run_search(work: &Graph, base: &Graph, target: Target, cfg: &SolveConfig) -> Result<SolveReport, SearchError> {
    cfg.validate()?;
    let n = work.order();
    let runs: Vec<(f64, f64, SphereAssignment)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let start = SphereAssignment::random(n, cfg.d, &mut restart_rng(cfg.seed, i));
            let out = descend(work, start, cfg, false);
            (out.loss, out.residual, out.assignment)
        })
        .collect();
    // lowest residual, ties to the lowest restart index
    let best_restart = (0..runs.len())
        .min_by(|&a, &b| runs[a].1.total_cmp(&runs[b].1).then(a.cmp(&b)))
        .unwrap();
    let best = &runs[best_restart];
    let status = if best.1 <= cfg.tolerance { SolveStatus::Success } else { SolveStatus::Exhausted };

    let (rounding, certificate) = match cfg.max_denominator {
        Some(cap) if n > 0 => {
            let outcome = round_to_rational(&best.2, base, target, cap);
            let report = RoundingReport {
                attempted: true,
                certified: outcome.certificate.is_some(),
                max_denominator: Some(cap),
                denominator_used: outcome.denominator_used,
                failing_pairs: outcome.failing_pairs.len(),
                certificate: outcome.certificate.as_ref().map(|c| {
                    c.exact_vectors()
                        .unwrap()
                        .iter()
                        .map(|v| v.coords().iter().map(|q| q.to_string()).collect())
                        .collect()
                }),
            };
            (report, outcome.certificate)
        }
        _ => (
            RoundingReport {
                attempted: false,
                certified: false,
                max_denominator: cfg.max_denominator,
                denominator_used: None,
                failing_pairs: 0,
                certificate: None,
            },
            None,
        ),
    };

    Ok(SolveReport {
        status,
        target,
        d: cfg.d,
        residual: best.1,
        restarts: cfg.restarts,
        seed: cfg.seed,
        best_restart,
        assignment: Some(best.2.rows()),
        rounding,
        per_restart_losses: runs.iter().map(|r| r.0).collect(),
        per_restart_residuals: runs.iter().map(|r| r.1).collect(),
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingOutcome {
    pub certificate: Option<OrthoColoring>,
    pub denominator_used: Option<u64>,
    /// Violations at the largest cap tried, when certification failed.
    pub failing_pairs: Vec<Violation>,
}

/// Expresses the assignment in an orthonormal frame built from its own rows.
///
/// Gram-Schmidt runs over the rows in order, skipping rows that are nearly
/// dependent on earlier ones, and completes the frame with standard basis
/// vectors. The change of frame is orthogonal, so all inner products are
/// kept, while the first row becomes `e_1`, the second lies in the span of
/// `e_1, e_2`, and so on.
pub fn canonical_frame(a: &SphereAssignment) -> SphereAssignment {
    let d = a.dim();
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d);
    let candidates = (0..a.len())
        .map(|v| a.row(v).to_vec())
        .chain((0..d).map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect()));
    for mut w in candidates {
        if frame.len() == d {
            break;
        }
        for q in &frame {
            let c = dot(q, &w);
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
        let norm = dot(&w, &w).sqrt();
        if norm > 1e-6 {
            w.iter_mut().for_each(|x| *x /= norm);
            frame.push(w);
        }
    }
    let x = (0..a.len())
        .flat_map(|v| frame.iter().map(move |q| dot(q, a.row(v))).collect::<Vec<_>>())
        .collect();
    SphereAssignment { d, x }
}

/// Rounds every coordinate to its best fraction and verifies exactly.
///
/// Caps are tried coarse to fine (1, 10, 100, ..., then `max_den`); at each
/// cap the assignment is rounded in its [`canonical_frame`] and then as
/// given. The first exactly orthogonal rounding is returned. `a` is indexed by the
/// vertices of `g` or, for `Target::Edge`, by its edges.
pub fn round_to_rational(a: &SphereAssignment, g: &Graph, target: Target, max_den: u64) -> RoundingOutcome {
    let mut caps = Vec::new();
    let mut c = 1u64;
    while c < max_den {
        caps.push(c);
        c = c.saturating_mul(10);
    }
    caps.push(max_den);

    let rotated = canonical_frame(a);
    let mut failing = Vec::new();
    for (&cap, candidate) in caps.iter().flat_map(|c| [(c, &rotated), (c, a)]) {
        let a = candidate;
        let rounded: Option<Vec<RationalVector>> = (0..a.len())
            .map(|v| {
                let coords = a.row(v).iter().map(|&x| best_rational(x, cap)).collect::<Option<Vec<_>>>()?;
                RationalVector::new(coords).ok()
            })
            .collect();
        let Some(vectors) = rounded else {
            continue;
        };
        let coloring = OrthoColoring::exact(target, a.dim(), vectors);
        match verify_ortho_coloring(g, &coloring, VerifyMode::Exact) {
            Ok(report) if report.passed => {
                return RoundingOutcome { certificate: Some(coloring), denominator_used: Some(cap), failing_pairs: vec![] };
            }
            Ok(report) => failing = report.violations,
            Err(_) => failing = vec![],
        }
    }
    RoundingOutcome { certificate: None, denominator_used: None, failing_pairs: failing }
}
