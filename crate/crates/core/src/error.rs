use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("tuples of unequal length ({left} vs {right}) cannot be compared")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exact division left a remainder. Raised by closed-form evaluators,
    /// so it always indicates a transcription bug rather than bad input.
    #[error("non-exact division in {formula}")]
    InexactDivision { formula: String },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("group of order {order} exceeds the enumeration cap of {cap} elements")]
    TooLarge { order: u128, cap: u64 },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("checkpoint version {found} is not supported (expected {expected})")]
    CheckpointVersion { found: u32, expected: u32 },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that signal an internal inconsistency rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InexactDivision { .. })
    }
}
