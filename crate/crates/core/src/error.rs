use thiserror::Error;

/// Errors raised by domain construction, metric evaluation and the ball analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point has non-finite coordinates")]
    NonFinite,

    #[error("points must have at least 2 coordinates, got {0}")]
    DimensionTooSmall(usize),

    #[error("point {0} is not in the domain")]
    OutsideDomain(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation requires a bounded domain")]
    Unbounded,

    #[error("operation supports planar domains only")]
    NotPlanar,

    #[error("endpoints are not connected at grid spacing {0}")]
    Disconnected(f64),

    #[error("grid spacing {spacing} is too coarse (maximum {max})")]
    ResolutionTooCoarse { spacing: f64, max: f64 },

    #[error("region is empty")]
    EmptyRegion,

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("malformed domain specification: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
