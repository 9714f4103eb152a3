use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{n} vertices exceeds the supported maximum of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("arc set contains a directed cycle")]
    Cyclic,
    #[error("vertex counts differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("table index {index} out of range (table has {len} entries)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("table index {0} listed more than once")]
    DuplicateIndex(usize),
    #[error("error model flips {flips} answers but the error bound is {k}")]
    ErrorBudgetExceeded { flips: usize, k: usize },
    #[error("skeleton is not a chain")]
    NotChain,
    #[error("no candidate outside the equivalence class of the source")]
    NoNeighbor,
    #[error("conflicting orientation of edge {0} - {1}")]
    OrientationConflict(usize, usize),
    #[error("partially directed graph admits no consistent DAG extension")]
    NotExtendable,
    #[error("strategy exceeded the query budget of {0} actions")]
    QueryBudgetExceeded(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
