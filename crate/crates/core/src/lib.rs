//! Graph regularity toolkit: cut norms, weak regularity decompositions,
//! approximate subgraph counting, pair and partition regularity checks,
//! regular partition search and interval regularity of permutations.
//!
//! Every approximate routine has a brute-force counterpart in this crate so
//! its guarantee can be checked on small inputs.

pub mod cli;
pub mod cut;
pub mod error;
pub mod graph;
pub mod hom;
pub mod interval;
pub mod io;
pub mod lp;
pub mod matrix;
pub mod pair;
pub mod search;
pub mod set;
pub mod weak;

pub use error::{Error, Result};
pub use graph::{
    BipartiteWeightedGraph, CutDecomposition, CutTerm, Shape, VertexPartition, Weighted,
    WeightedGraph,
};
pub use matrix::Matrix;
pub use set::VertexSet;
