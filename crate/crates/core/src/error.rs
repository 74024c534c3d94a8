use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported action: {0}")]
    UnsupportedAction(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not a sphere map (outputs are not declared unit norm)")]
    NotSphereMap,

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("claimed bilipschitz bounds are required but missing")]
    MissingBounds,

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(usize),

    #[error("window too small: n = {n} must exceed 2N = {twice_support}")]
    WindowTooSmall { n: usize, twice_support: usize },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("solver did not converge: {0}")]
    SolverDivergence(String),

    #[error("numerical breakdown in solver: {0}")]
    InfeasibleNumerics(String),

    #[error("function is not monotonically decreasing near t = {0}")]
    NotMonotone(f64),

    #[error("degenerate points: {0}")]
    DegeneratePoints(String),

    #[error("action is not free at the given point: {0}")]
    NotFree(String),

    #[error("too many degenerate pairs: {degenerate} of {total}")]
    TooManyDegeneratePairs { degenerate: usize, total: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid k = {k} for {n} points")]
    InvalidK { k: usize, n: usize },

    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
