use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected} coordinates, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("enumeration of {size} items exceeds the cap of {cap}")]
    CapExceeded { size: String, cap: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("homomorphism is not well defined: {0}")]
    InvalidHomomorphism(String),
    #[error("invalid arc radius {0}: must satisfy 0 < r <= 1/2")]
    InvalidArc(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("operation needs an exhaustive (finite) context")]
    InfiniteContext,
    #[error("bounds insufficient: {0}")]
    BoundsInsufficient(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("a proven statement failed on this instance: {0}")]
    Invariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
