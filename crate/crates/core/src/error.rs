use thiserror::Error;

/// Errors raised by the exterior-calculus kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("index ({row}, {col}) out of range for a frame of {dim} vectors")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },
    #[error("basis index {basis} out of range 1..={n}")]
    BasisOutOfRange { basis: usize, n: usize },
    #[error("generator {0} has no rewrite rule and generic expansion is disabled")]
    NoRule(String),
    #[error("relation has a non-constant coefficient on {0}")]
    UnsupportedRelation(String),
    #[error("non-basis generator {0} present where a basis-span form is required")]
    NotBasisSpan(String),
    #[error("inconsistent system: {equation} reduces to a nonzero constant (from {provenance})")]
    Inconsistent { equation: String, provenance: String },
    #[error("frame change is not unipotent: {0}")]
    NotUnipotent(String),
    #[error("frame-change entries may only depend on change parameters, found {0}")]
    NonParameterEntry(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("k = {0} is not supported here")]
    InvalidK(usize),
    #[error("not derived in the source for this case: {0}")]
    NotDerivedInPaper(String),
    #[error("stage {stage} failed: {residual}")]
    StageFailure { stage: String, residual: String },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("stage order violated: {0}")]
    StageOrder(String),
}
