use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("percolation mode mismatch: expected {expected}, got {got}")]
    ModeMismatch { expected: String, got: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The subset-sum gadget constants violate a required inequality.
    #[error("gadget precondition failed: {0}")]
    Dominance(String),

    #[error("{what}: size {actual} exceeds cap {limit}")]
    SizeCap {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("decode failure: {0}")]
    Decode(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("experiment description: {0}")]
    Description(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInstance(message.into())
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
