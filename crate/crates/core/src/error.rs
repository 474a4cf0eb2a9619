use thiserror::Error;

/// Errors raised by field, matrix, code and census operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} is not supported")]
    FieldTooLarge(u128),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("index error: {0}")]
    Index(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{what}: search space {requested} exceeds limit {limit}")]
    GuardExceeded {
        what: String,
        requested: u128,
        limit: u128,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("interrupted")]
    Interrupted,
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::GuardExceeded { .. } => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn guard(what: impl Into<String>, requested: u128, limit: u128) -> Self {
        Error::GuardExceeded {
            what: what.into(),
            requested,
            limit,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
