use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(i64),
    #[error("odd degree sum ({0} half-edges)")]
    OddDegreeSum(u64),
    #[error("rejection budget exceeded after {0} attempts")]
    RejectionBudgetExceeded(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("empty block")]
    EmptyBlock,
    #[error("graph has {n} vertices, above the exhaustive limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("input is not a tree: {0}")]
    NotATree(String),
    #[error("tree of order {order} is smaller than the minimum block size {min}")]
    TreeTooSmall { order: usize, min: usize },
    #[error("isolated vertex {0}")]
    IsolatedVertex(usize),
    #[error("minimum degree precondition violated at vertex {vertex} (degree {degree})")]
    MinDegree { vertex: usize, degree: usize },
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("invalid degree profile: {0}")]
    Profile(String),
    #[error("{0}")]
    Regime(String),
    #[error("eps' too large: {0}")]
    EpsPrimeTooLarge(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
