use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The cone description is malformed or its dual is trivial.
    #[error("invalid cone: {0}")]
    InvalidCone(String),

    /// A probability level lies outside the domain of the requested operation.
    #[error("level out of domain: {0}")]
    LevelDomain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Malformed sample, cone or region file. Line and column are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: u64,
        message: String,
    },

    /// Exclusion certificates only exist for points outside the region.
    #[error("point belongs to the quantile region; no exclusion certificate exists")]
    NotExcluded,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::Dimension { expected, found }
    }
}
