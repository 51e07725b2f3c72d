//! Orthogonal vector colorings of graphs: exact chromatic solvers, exact
//! rational orthogonality machinery, a Kochen–Specker decision procedure,
//! an embedded 18-vector Kochen–Specker dataset, and a numerical search for
//! orthogonal (edge-)colorings with rational certification.

pub mod chroma;
pub mod dataset;
pub mod graph;
pub mod ortho;
pub mod search;
