use thiserror::Error;

use crate::centro::Symmetry;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DqError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate grid: nodes {first} and {second} coincide")]
    DegenerateGrid { first: usize, second: usize },

    #[error("derivative order {order} needs more than {n} nodes")]
    InsufficientNodes { order: usize, n: usize },

    #[error("matrix classifies as {found:?}, expected {expected:?}")]
    ClassificationMismatch { expected: Symmetry, found: Symmetry },

    #[error("singular matrix ({factor}) at pivot {pivot}")]
    Singular { factor: String, pivot: usize },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),
}

pub type Result<T> = std::result::Result<T, DqError>;
