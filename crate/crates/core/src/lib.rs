//! Exact and empirical tools for the random Turán problem of the
//! generalized triangle F5 = {abc, abd, cde}.

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod hypergraph;
pub mod motif;
pub mod random;
pub mod solver;

pub use error::{Error, Result};
pub use hypergraph::{Edge, Graph2, Hypergraph3, Partition3, Vertex};
