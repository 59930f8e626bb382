use thiserror::Error;

use crate::hypergraph::Vertex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("triple ({0}, {1}, {2}) repeats a vertex")]
    RepeatedVertex(Vertex, Vertex, Vertex),

    #[error("pair query needs two distinct vertices, got {0} twice")]
    SameVertex(Vertex),

    #[error("hypergraph is not a subhypergraph of the host: edge {0:?} missing")]
    NotSubhypergraph([Vertex; 3]),

    #[error("vertex counts differ: {0} vs {1}")]
    VertexCountMismatch(usize, usize),

    #[error("hypergraph contains a copy of F5: {0:?}")]
    ContainsF5([[Vertex; 3]; 3]),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
