use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("letter {letter} is outside the domain of the mapping")]
    DomainMismatch { letter: String },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("bound {bound} is too small: {reason}")]
    BoundTooSmall { bound: usize, reason: String },

    #[error("theory is not total within the bound schedule: {0}")]
    NotTotal(String),

    #[error("descriptor cannot decide all identities: {0}")]
    Undecidable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("lattice tables are inconsistent: {0}")]
    LatticeClosure(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
