use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension m = {m} is outside 1..={max}")]
    DimensionOutOfRange { m: usize, max: usize },
    #[error("ray enumeration is capped at m = {cap} (got m = {m}); use the direct LP path")]
    RayDimensionCap { m: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("margin p_{index} = {value} must lie strictly between 0 and 1")]
    InvalidMargin { index: usize, value: String },
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("invalid cumulative distribution: {0}")]
    InvalidCdf(String),
    #[error("second-order moment for pair ({i}, {j}) = {value} must lie in [0, 1]")]
    InvalidMoment { i: usize, j: usize, value: String },
    #[error("correlation for pair ({i}, {j}) = {value} must lie in [-1, 1]")]
    InvalidCorrelation { i: usize, j: usize, value: String },
    #[error("mixture weight {0} must lie in [0, 1]")]
    InvalidWeight(String),
    #[error("sample size must be at least 1 (got {0})")]
    InvalidSampleSize(usize),
    #[error("moment order {0} is not supported here")]
    UnsupportedOrder(usize),
    #[error("no density has the requested second-order moments")]
    EmptyCone,
    #[error("numerical breakdown: {0}")]
    Numerical(String),
}
