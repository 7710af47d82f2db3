use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis index {index} out of range for a model of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(f64),

    #[error("sample needs at least 2 points, got {0}")]
    SampleTooSmall(usize),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid model collection: {0}")]
    InvalidCollection(String),

    #[error("models are not nested: {sub} is not a subspace of {top} with a shared index prefix")]
    NotNested { sub: String, top: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("exact enumeration supports n <= {max}, got n = {n}")]
    EnumerationTooLarge { n: usize, max: usize },

    #[error("weight scheme was built for n = {scheme}, sample has n = {sample}")]
    SizeMismatch { scheme: usize, sample: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid density oracle: {0}")]
    InvalidOracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
