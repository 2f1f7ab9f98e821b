use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u64, n: usize },

    #[error("invalid edge {edge:?}: {reason}")]
    InvalidEdge { edge: Vec<u64>, reason: String },

    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<u32>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} exceeds the configured cap ({value} > {cap})")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("{0}")]
    Unsupported(String),

    #[error("partition failure: {0}")]
    Partition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
