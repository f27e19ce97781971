use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid stabilizer: generators {0} and {1} anticommute")]
    NonCommuting(usize, usize),

    #[error("rank deficiency: generators are not independent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("CSS construction: row {h2_row} of H2 is not orthogonal to row {h1_row} of H1")]
    NotDualContaining { h2_row: usize, h1_row: usize },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("code property error: {0}")]
    CodeProperty(String),

    #[error("routing error: {0}")]
    Routing(String),

    #[error("unknown builtin code `{0}`")]
    UnknownCode(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
