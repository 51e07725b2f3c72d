//! Exact rational vectors, orthogonality graphs, orthonormal bases inside a
//! vector set, the Kochen–Specker decision, and verification of orthogonal
//! (edge-)colorings.
//!
//! Every orthogonality test here is an exact rational dot product. Vectors
//! are identified up to nonzero scaling through a primitive integer
//! representative whose first nonzero coordinate is positive.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chroma::{chromatic_number, coloring_to_orthogonal, max_clique, ChromaOutcome, Coloring, Target};
use crate::graph::{is_bipartite, join, Graph};

mod ks;
mod vector_file;

pub use ks::{enumerate_orthobases, ks_decide, ks_decide_with_bases, BasisEnumeration, KsDecision, KsOutcome};
pub use vector_file::{format_vector_file, parse_vector_file, VectorFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrthoError {
    #[error("zero vector at element {0}")]
    ZeroVector(usize),
    #[error("empty coordinate list")]
    EmptyVector,
    #[error("element {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, got: usize, expected: usize },
    #[error("assignment covers {got} elements, graph has {expected}")]
    MissingElement { got: usize, expected: usize },
    #[error("vectors {0} and {1} are scalar multiples of each other")]
    DuplicateVector(usize, usize),
    #[error("non-finite coordinate at element {0}")]
    NonFinite(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A nonzero vector of `Q^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector {
    coords: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Result<Self, OrthoError> {
        if coords.is_empty() {
            return Err(OrthoError::EmptyVector);
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(OrthoError::ZeroVector(0));
        }
        Ok(RationalVector { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self, OrthoError> {
        Self::new(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Exact conversion of finite floats (every finite `f64` is a dyadic rational).
    pub fn from_f64(coords: &[f64]) -> Result<Self, OrthoError> {
        let exact: Option<Vec<BigRational>> = coords.iter().map(|&c| BigRational::from_float(c)).collect();
        Self::new(exact.ok_or(OrthoError::NonFinite(0))?)
    }

    /// The `i`-th standard basis vector of dimension `d`.
    pub fn unit(i: usize, d: usize) -> Self {
        assert!(i < d, "basis index {i} out of range for dimension {d}");
        let coords = (0..d)
            .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect();
        RationalVector { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dot(&self, other: &RationalVector) -> BigRational {
        assert_eq!(self.dim(), other.dim(), "dot product of vectors of different dimension");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn is_orthogonal(&self, other: &RationalVector) -> bool {
        self.dot(other).is_zero()
    }

    pub fn norm_squared(&self) -> BigRational {
        self.dot(self)
    }

    /// |cos| of the angle to `other`, rounded to `f64` at the very end.
    pub fn normalized_dot(&self, other: &RationalVector) -> f64 {
        let d = self.dot(other);
        let cos2 = &d * &d / (self.norm_squared() * other.norm_squared());
        cos2.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Primitive integer representative with first nonzero coordinate positive.
    pub fn canonical(&self) -> Vec<BigInt> {
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coords.iter().map(|c| (c * &lcm).to_integer()).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let first_negative = ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        for c in &mut ints {
            *c /= &gcd;
            if first_negative {
                *c = -&*c;
            }
        }
        ints
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Appends zeros on the left (`before`) and right (`after`).
    pub fn padded(&self, before: usize, after: usize) -> RationalVector {
        let coords = std::iter::repeat_with(BigRational::zero)
            .take(before)
            .chain(self.coords.iter().cloned())
            .chain(std::iter::repeat_with(BigRational::zero).take(after))
            .collect();
        RationalVector { coords }
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Vectors of one dimension, pairwise not scalar multiples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSet {
    vectors: Vec<RationalVector>,
    dim: usize,
}

impl VectorSet {
    pub fn new(vectors: Vec<RationalVector>) -> Result<Self, OrthoError> {
        let dim = vectors.first().map(RationalVector::dim).ok_or(OrthoError::EmptyVector)?;
        for (index, v) in vectors.iter().enumerate() {
            if v.dim() != dim {
                return Err(OrthoError::DimensionMismatch { index, got: v.dim(), expected: dim });
            }
        }
        let canon: Vec<Vec<BigInt>> = vectors.iter().map(RationalVector::canonical).collect();
        for i in 0..canon.len() {
            if let Some(j) = (i + 1..canon.len()).find(|&j| canon[i] == canon[j]) {
                return Err(OrthoError::DuplicateVector(i, j));
            }
        }
        Ok(VectorSet { vectors, dim })
    }

    pub fn from_int_rows(rows: &[[i64; 4]]) -> Result<Self, OrthoError> {
        Self::new(rows.iter().map(|r| RationalVector::from_ints(r)).collect::<Result<_, _>>()?)
    }

    pub fn vectors(&self) -> &[RationalVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Index of the vector equal to `v` up to scaling.
    pub fn position(&self, v: &RationalVector) -> Option<usize> {
        let c = v.canonical();
        self.vectors.iter().position(|w| w.canonical() == c)
    }
}

/// `K(S)`: vertex `i` is `s[i]`, edges join exactly orthogonal pairs.
pub fn orthogonality_graph(s: &VectorSet) -> Graph {
    let v = s.vectors();
    let pairs: Vec<(usize, usize)> = (0..v.len())
        .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| v[i].is_orthogonal(&v[j]))
        .collect();
    Graph::new(v.len(), pairs).expect("pairs are distinct and in range")
}

/// Vectors attached to the vertices or edges of a graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Assignment {
    Exact(Vec<RationalVector>),
    Float(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthoColoring {
    pub target: Target,
    pub dim: usize,
    pub assignment: Assignment,
}

impl OrthoColoring {
    pub fn exact(target: Target, dim: usize, vectors: Vec<RationalVector>) -> Self {
        OrthoColoring { target, dim, assignment: Assignment::Exact(vectors) }
    }

    pub fn float(target: Target, dim: usize, vectors: Vec<Vec<f64>>) -> Self {
        OrthoColoring { target, dim, assignment: Assignment::Float(vectors) }
    }

    pub fn len(&self) -> usize {
        match &self.assignment {
            Assignment::Exact(v) => v.len(),
            Assignment::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exact_vectors(&self) -> Option<&[RationalVector]> {
        match &self.assignment {
            Assignment::Exact(v) => Some(v),
            Assignment::Float(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VerifyMode {
    Exact,
    /// Pass iff every adjacent pair has |normalized dot| ≤ ε.
    Tolerance(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub max_residual: f64,
    pub violations: Vec<Violation>,
}

/// Adjacent element pairs `(a, b)` with `a < b`: edges of `g` for vertex
/// targets, pairs of edges sharing an endpoint for edge targets.
pub fn adjacent_pairs(g: &Graph, target: Target) -> Vec<(usize, usize)> {
    match target {
        Target::Vertex => g.edges().iter().map(|e| (e.u, e.v)).collect(),
        Target::Edge => {
            let (lg, _) = crate::graph::line_graph(g);
            lg.edges().iter().map(|e| (e.u, e.v)).collect()
        }
    }
}

/// Checks that adjacent elements receive orthogonal vectors.
pub fn verify_ortho_coloring(g: &Graph, f: &OrthoColoring, mode: VerifyMode) -> Result<VerificationReport, OrthoError> {
    let expected = match f.target {
        Target::Vertex => g.order(),
        Target::Edge => g.size(),
    };
    if f.len() != expected {
        return Err(OrthoError::MissingElement { got: f.len(), expected });
    }
    let check_dim = |index: usize, got: usize| {
        if got != f.dim {
            Err(OrthoError::DimensionMismatch { index, got, expected: f.dim })
        } else {
            Ok(())
        }
    };
    let pairs = adjacent_pairs(g, f.target);

    let residuals: Vec<(usize, usize, f64, bool)> = match (&f.assignment, mode) {
        (Assignment::Exact(vs), _) => {
            for (i, v) in vs.iter().enumerate() {
                check_dim(i, v.dim())?;
            }
            match mode {
                VerifyMode::Exact => pairs
                    .iter()
                    .map(|&(a, b)| {
                        let ok = vs[a].is_orthogonal(&vs[b]);
                        (a, b, if ok { 0.0 } else { vs[a].normalized_dot(&vs[b]) }, ok)
                    })
                    .collect(),
                VerifyMode::Tolerance(eps) => {
                    let fl: Vec<Vec<f64>> = vs.iter().map(RationalVector::to_f64).collect();
                    float_residuals(&fl, &pairs, eps)
                }
            }
        }
        (Assignment::Float(vs), VerifyMode::Exact) => {
            let exact = vs
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    check_dim(i, v.len())?;
                    RationalVector::from_f64(v).map_err(|e| match e {
                        OrthoError::ZeroVector(_) => OrthoError::ZeroVector(i),
                        OrthoError::NonFinite(_) => OrthoError::NonFinite(i),
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return verify_ortho_coloring(g, &OrthoColoring::exact(f.target, f.dim, exact), VerifyMode::Exact);
        }
        (Assignment::Float(vs), VerifyMode::Tolerance(eps)) => {
            for (i, v) in vs.iter().enumerate() {
                check_dim(i, v.len())?;
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(OrthoError::NonFinite(i));
                }
                if v.iter().all(|&x| x == 0.0) {
                    return Err(OrthoError::ZeroVector(i));
                }
            }
            float_residuals(vs, &pairs, eps)
        }
    };

    let violations: Vec<Violation> = residuals
        .iter()
        .filter(|r| !r.3)
        .map(|&(a, b, residual, _)| Violation { a, b, residual })
        .collect();
    Ok(VerificationReport {
        passed: violations.is_empty(),
        pairs_checked: pairs.len(),
        max_residual: residuals.iter().map(|r| r.2).fold(0.0, f64::max),
        violations,
    })
}

fn float_residuals(vs: &[Vec<f64>], pairs: &[(usize, usize)], eps: f64) -> Vec<(usize, usize, f64, bool)> {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    pairs
        .iter()
        .map(|&(a, b)| {
            let dot: f64 = vs[a].iter().zip(&vs[b]).map(|(x, y)| x * y).sum();
            let r = (dot / (norm(&vs[a]) * norm(&vs[b]))).abs();
            (a, b, r, r <= eps)
        })
        .collect()
}

/// Bounds on the orthogonal number with their witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct PiBounds {
    pub lower: usize,
    pub upper: usize,
    /// A maximum clique (exact unless the clique search ran out of budget).
    pub clique: Vec<usize>,
    /// Proper coloring with `upper` colors.
    pub coloring: Coloring,
    /// Its canonical lift, an orthogonal `upper`-coloring.
    pub lift: OrthoColoring,
    /// Whether `upper` equals the exact chromatic number.
    pub chi_exact: bool,
}

/// `clique ≤ π ≤ χ`, with the lower bound raised to 3 for non-bipartite
/// graphs that have an edge (a 2-dimensional orthogonal coloring forces a
/// bipartition).
pub fn pi_bounds(g: &Graph, budget: u64) -> PiBounds {
    let clique = max_clique(g, budget).clique().to_vec();
    let mut lower = clique.len();
    if g.size() > 0 && is_bipartite(g).is_none() {
        lower = lower.max(3);
    }
    let outcome = chromatic_number(g, None, None, budget).expect("no hints given");
    let coloring = outcome.coloring().clone();
    let lift = coloring_to_orthogonal(g, &coloring).expect("solver certificates are proper");
    PiBounds {
        lower,
        upper: coloring.k,
        clique,
        coloring,
        lift,
        chi_exact: matches!(outcome, ChromaOutcome::Exact(_)),
    }
}

/// Orthogonal coloring of `join(g1, g2)` by zero-padding: `g1`'s vectors
/// occupy the first `d1` coordinates, `g2`'s the last `d2`.
pub fn direct_sum_coloring(
    g1: &Graph,
    f1: &OrthoColoring,
    g2: &Graph,
    f2: &OrthoColoring,
) -> Result<(Graph, OrthoColoring), OrthoError> {
    for (g, f) in [(g1, f1), (g2, f2)] {
        if f.target != Target::Vertex {
            return Err(OrthoError::InvalidArgument("direct sum needs vertex colorings".into()));
        }
        let report = verify_ortho_coloring(g, f, VerifyMode::Exact)?;
        if !report.passed {
            return Err(OrthoError::InvalidArgument(format!(
                "input coloring is not orthogonal ({} violations)",
                report.violations.len()
            )));
        }
    }
    let (Some(v1), Some(v2)) = (f1.exact_vectors(), f2.exact_vectors()) else {
        return Err(OrthoError::InvalidArgument("direct sum needs exact colorings".into()));
    };
    let (d1, d2) = (f1.dim, f2.dim);
    let vectors = v1
        .iter()
        .map(|v| v.padded(0, d2))
        .chain(v2.iter().map(|v| v.padded(d1, 0)))
        .collect();
    Ok((join(g1, g2), OrthoColoring::exact(Target::Vertex, d1 + d2, vectors)))
}

/// A (π, χ) pair, exact or as bounds, with the join law applied symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapPair {
    pub pi: usize,
    pub chi: usize,
}

impl GapPair {
    pub fn gap(&self) -> isize {
        self.chi as isize - self.pi as isize
    }

    /// Both parameters add over a join.
    pub fn join(self, other: GapPair) -> GapPair {
        GapPair { pi: self.pi + other.pi, chi: self.chi + other.chi }
    }

    /// `k` successive self-joins; the gap doubles each time.
    pub fn iterate_self_join(self, k: u32) -> GapPair {
        (0..k).fold(self, |acc, _| acc.join(acc))
    }
}
