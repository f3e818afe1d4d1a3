use crate::graph::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("edge {edge} is not an edge of the graph ({m} edges)")]
    EdgeOutOfRange { edge: EdgeId, m: usize },

    #[error("search source {0} is rejected by the keep predicate")]
    SourceExcluded(VertexId),

    #[error("invalid cycle: {0}")]
    InvalidCycle(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph with {n} vertices exceeds the all-pairs verification limit of {limit}")]
    Capacity { n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// No level of ball growing around `center` passed the size test; the
    /// sampling assumptions of the randomized cover did not hold.
    #[error("no good cut around vertex {center} (largest grown set has {size} vertices)")]
    NoGoodCut { center: VertexId, size: usize },

    #[error("retry budget exhausted after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: usize, last: Box<Error> },

    #[error("vertex {0} has no similarity data")]
    MissingSimilarity(VertexId),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
