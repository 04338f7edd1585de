use thiserror::Error;

use crate::poly::PolyError;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error: {0}")]
pub struct ParseError(pub String);

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        ParseError(msg.into())
    }
}

/// Failures of the algebraic pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("algebra is not unramified: {0}")]
    NotUnramified(String),
    #[error("algebra is not etale: {0}")]
    NotEtale(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate check failed: {0}")]
    CheckFailed(String),
    #[error("no exponent up to {0}")]
    NoExponent(usize),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("flatness witness failed for relation {relation}: {reason}")]
    FlatnessWitness { relation: String, reason: String },
    #[error("cover incomplete: {0}")]
    CoverIncomplete(String),
    #[error("branch depth limit {0} exceeded")]
    DepthExceeded(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
