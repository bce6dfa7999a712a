use flexlab_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlexError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid framework: {0}")]
    InvalidFramework(String),
    #[error("ambiguous geodesic: {0}")]
    Ambiguous(String),
    #[error("geodesics do not intersect")]
    NoIntersection,
    #[error("identical circles intersect in infinitely many points")]
    InfiniteIntersection,
    #[error("point maps to infinity")]
    PointAtInfinity,
    #[error("identity violated: {0}")]
    Identity(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T> = std::result::Result<T, FlexError>;
