use thiserror::Error;

use crate::diagrams::Cell;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right} variables")]
    Arity { left: usize, right: usize },

    #[error("cell {0} is not a cell of the shape")]
    InvalidCell(Cell),

    #[error("duplicate cell {0} in diagram")]
    DuplicateCell(Cell),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("polynomial is not in the span of the given diagrams")]
    NotInSpan,

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("degenerate orbit parameters: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("theorem violated: {0}")]
    TheoremViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
