use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} levels vs {right} levels")]
    Dimension { left: usize, right: usize },

    #[error("{levels} levels exceeds the {limit}-level native integer policy")]
    Overflow { levels: usize, limit: usize },

    #[error("cannot decide comparison at {bits} bits of precision: {what}")]
    Undecidable { bits: u32, what: String },

    #[error("set of {size} points exceeds the exhaustive cap of {cap}; use branch-and-bound mode")]
    CapExceeded { size: usize, cap: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("duplicate element {0}")]
    Duplicate(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("proof assertion failed at {node}: {msg}")]
    ProofViolation { node: String, msg: String },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
