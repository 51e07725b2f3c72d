//! The 18-vector Kochen–Specker set in `R^4` arranged as 9 orthogonal
//! bases, each vector shared by exactly two bases, and the 9-vertex graph
//! whose edges are the shared vectors.
//!
//! The graph is 4-regular with 9 vertices. Its edges carry an orthogonal
//! 4-edge-coloring (the vectors themselves), yet it has no 4-edge-coloring
//! because a color class would have to be a perfect matching on an odd
//! number of vertices.
//!
//! Transcription note: the commonly reproduced table of these bases prints
//! `(0,1,-1,0)` as the fourth entry of the fifth basis and repeats
//! `(1,0,0,-1)` in the sixth. As printed the fifth basis is not orthogonal
//! and the sixth has three vectors. The set embedded here is the original
//! 18-vector arrangement: the fifth basis holds `(1,0,0,-1)` and the sixth
//! holds `(0,1,-1,0)`. [`KsDataset::from_bases`] rejects the printed variant.

use thiserror::Error;

use crate::chroma::Target;
use crate::graph::Graph;
use crate::ortho::{format_vector_file, OrthoColoring, RationalVector, VectorSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatasetError {
    #[error("basis {basis} has {got} vectors, expected {expected}")]
    BasisSize { basis: usize, got: usize, expected: usize },
    #[error("basis {basis}: vectors {a} and {b} are not orthogonal")]
    NotOrthogonal { basis: usize, a: usize, b: usize },
    #[error("basis {basis} lists vector {vector} twice")]
    RepeatedInBasis { basis: usize, vector: usize },
    #[error("vector {vector} lies in {count} bases, expected exactly 2")]
    Multiplicity { vector: usize, count: usize },
    #[error("bases {0} and {1} share more than one vector")]
    MultiShare(usize, usize),
    #[error("basis {basis} references vector {vector}, only {len} vectors")]
    IndexOutOfRange { basis: usize, vector: usize, len: usize },
    #[error("invalid vector data: {0}")]
    Vectors(String),
}

/// Bases as printed column by column (with the two corrected entries);
/// `-1` is the dotted/overlined one.
const BASES: [[[i64; 4]; 4]; 9] = [
    [[0, 0, 0, 1], [0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
    [[0, 0, 0, 1], [0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
    [[1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
    [[1, -1, 1, -1], [1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
    [[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 0, 0, -1]],
    [[1, -1, -1, 1], [1, 1, 1, 1], [1, 0, 0, -1], [0, 1, -1, 0]],
    [[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
    [[1, 1, -1, 1], [-1, 1, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
    [[1, 1, 1, -1], [-1, 1, 1, 1], [1, 0, 0, 1], [0, 1, -1, 0]],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsDataset {
    vectors: VectorSet,
    bases: Vec<Vec<usize>>,
    /// For each vector, the two bases containing it (ascending).
    shared: Vec<[usize; 2]>,
}

/// The embedded 18-vector, 9-basis set, validated on every call.
pub fn load_dataset() -> Result<KsDataset, DatasetError> {
    let mut vectors: Vec<RationalVector> = Vec::new();
    let mut canon = Vec::new();
    let mut bases = Vec::new();
    for column in &BASES {
        let mut basis = Vec::new();
        for row in column {
            let v = RationalVector::from_ints(row).map_err(|e| DatasetError::Vectors(e.to_string()))?;
            let c = v.canonical();
            let idx = match canon.iter().position(|x| *x == c) {
                Some(i) => i,
                None => {
                    canon.push(c);
                    vectors.push(v);
                    vectors.len() - 1
                }
            };
            basis.push(idx);
        }
        bases.push(basis);
    }
    let vectors = VectorSet::new(vectors).map_err(|e| DatasetError::Vectors(e.to_string()))?;
    let ds = KsDataset::from_bases(vectors, bases)?;
    if ds.vectors.len() != 18 || ds.bases.len() != 9 {
        return Err(DatasetError::Vectors(format!(
            "expected 18 vectors in 9 bases, found {} in {}",
            ds.vectors.len(),
            ds.bases.len()
        )));
    }
    Ok(ds)
}

impl KsDataset {
    /// Validates a basis arrangement: every basis has `d` distinct pairwise
    /// orthogonal vectors, every vector lies in exactly two bases, and no
    /// two bases share more than one vector.
    pub fn from_bases(vectors: VectorSet, bases: Vec<Vec<usize>>) -> Result<Self, DatasetError> {
        let d = vectors.dim();
        let v = vectors.vectors();
        let mut count = vec![Vec::new(); vectors.len()];
        for (b, basis) in bases.iter().enumerate() {
            if basis.len() != d {
                return Err(DatasetError::BasisSize { basis: b, got: basis.len(), expected: d });
            }
            for (i, &x) in basis.iter().enumerate() {
                if x >= vectors.len() {
                    return Err(DatasetError::IndexOutOfRange { basis: b, vector: x, len: vectors.len() });
                }
                for &y in &basis[i + 1..] {
                    if x == y {
                        return Err(DatasetError::RepeatedInBasis { basis: b, vector: x });
                    }
                    if !v[x].is_orthogonal(&v[y]) {
                        return Err(DatasetError::NotOrthogonal { basis: b, a: x, b: y });
                    }
                }
                count[x].push(b);
            }
        }
        for (vector, c) in count.iter().enumerate() {
            if c.len() != 2 {
                return Err(DatasetError::Multiplicity { vector, count: c.len() });
            }
        }
        let mut seen = std::collections::HashSet::new();
        for c in &count {
            if !seen.insert((c[0], c[1])) {
                return Err(DatasetError::MultiShare(c[0], c[1]));
            }
        }
        let shared = count.iter().map(|c| [c[0], c[1]]).collect();
        Ok(KsDataset { vectors, bases, shared })
    }

    pub fn vectors(&self) -> &VectorSet {
        &self.vectors
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    /// The two bases containing vector `i`.
    pub fn bases_of(&self, i: usize) -> [usize; 2] {
        self.shared[i]
    }

    pub fn to_vector_file(&self) -> String {
        format_vector_file(
            &self.vectors,
            Some(&self.bases),
            Some("18-vector Kochen-Specker set in R^4; each basis line lists 4 vector indices"),
        )
    }
}

/// Bases as vertices, one edge per shared vector. Returns the graph and,
/// for each edge index, the vector it carries.
pub fn bases_graph(ds: &KsDataset) -> (Graph, Vec<usize>) {
    let pairs: Vec<(usize, usize)> = ds.shared.iter().map(|s| (s[0], s[1])).collect();
    let g = Graph::new(ds.bases.len(), pairs.iter().copied()).expect("validated: no basis pair shares two vectors");
    let mut label = vec![0; g.size()];
    for (vector, &(a, b)) in pairs.iter().enumerate() {
        label[g.edge_index(a, b).unwrap()] = vector;
    }
    (g, label)
}

/// Each edge of the bases graph colored by its shared vector.
pub fn shared_vector_edge_coloring(ds: &KsDataset) -> (Graph, OrthoColoring) {
    let (g, label) = bases_graph(ds);
    let vectors = label.iter().map(|&i| ds.vectors.vectors()[i].clone()).collect();
    (g, OrthoColoring::exact(Target::Edge, ds.vectors.dim(), vectors))
}
