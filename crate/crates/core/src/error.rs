use thiserror::Error;

/// Errors surfaced by graph ingestion, oracle construction and queries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("id {id} out of range (bound {bound})")]
    Range { id: u64, bound: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("local memory budget exceeded: peak {peak} words")]
    BudgetExceeded { peak: u64 },

    #[error("vertices lie in distinct components")]
    DistinctComponents,

    #[error("graph is not connected")]
    Disconnected,

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("malformed serialization: {0}")]
    Format(String),

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
