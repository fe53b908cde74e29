use thiserror::Error;

/// Errors raised by the hypergraph toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hypergraph must have at least one vertex")]
    NoVertices,
    #[error("hyperedge {index} has size {size}; hyperedges need at least two vertex occurrences")]
    EdgeTooSmall { index: usize, size: usize },
    #[error("hyperedge {index} references vertex {vertex}, but the hypergraph has {n} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("partition has {got} entries but the hypergraph has {expected} vertices")]
    PartitionSize { expected: usize, got: usize },
    #[error("partition does not cover the vertex set: {0}")]
    PartitionCoverage(String),
    #[error("no hyperedges of size {0} exist, so the null model gives no probability for that size")]
    NoEdgesOfSize(usize),
    #[error("invalid edge grouping: {0}")]
    InvalidGrouping(String),
    #[error("{what} is {got}, above the enumeration cap of {cap}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },
    #[error("variant {0} is not supported here")]
    UnsupportedVariant(String),
    #[error("degenerate regression input: {0}")]
    DegenerateRegression(String),
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
