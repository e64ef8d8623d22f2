use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("pivot in column {column} depends on parameters; case split required")]
    PivotAmbiguous { column: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("form is not closed")]
    NotClosed,
    #[error("zero form has no {0}")]
    ZeroForm(&'static str),
    #[error("form is not a pure spinor")]
    Impure,
    #[error("pure spinor is degenerate (L and its conjugate intersect)")]
    Degenerate,
    #[error("1-forms are linearly dependent")]
    DependentForms,
    #[error("operation requires even ambient dimension, got {0}")]
    OddDimension(usize),
    #[error("{0} must be homogeneous of a single degree")]
    NotHomogeneous(&'static str),
    #[error("structure constants are not real")]
    NonRealAlgebra,
    #[error("dimension {0} exceeds the supported maximum of 32")]
    TooLarge(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
