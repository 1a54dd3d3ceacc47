use thiserror::Error;

/// Location of a malformed character in a text input, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parse error at {at}: {message}")]
    Parse { at: Position, message: String },

    #[error("rows indexed by the dependency do not sum to zero")]
    NotDependent,

    #[error("row index {index} out of range for {rows} rows")]
    IndexOutOfRange { index: usize, rows: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("row {0} is the zero vector")]
    ZeroRow(usize),

    #[error("rows {0} and {1} are equal")]
    DuplicateRow(usize, usize),

    #[error("matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("target row {0} is not in the span of the candidate rows")]
    NotInSpan(usize),

    #[error("no cover of target row {0} exists within the candidate rows")]
    NoCover(usize),

    #[error("chain construction cannot witness row {0} with at most two rows")]
    ChainUncovered(usize),

    #[error("instance specification is infeasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
