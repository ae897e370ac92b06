use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("undefined statistic: {0}")]
    UndefinedStatistic(&'static str),
    #[error("sample too small: need at least {need} observations, got {got}")]
    SampleTooSmall { need: usize, got: usize },
    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNonConvergence { estimate: f64 },
    #[error("optimization failed: {0}")]
    OptimizationFailure(&'static str),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("unexpected target label {0} (expected 0, 1 or 2)")]
    UnexpectedLabel(f64),
    #[error("single class: {0}")]
    SingleClass(&'static str),
    #[error("zero variance in column {0}")]
    ZeroVariance(String),
    #[error("feature mismatch: {0}")]
    FeatureMismatch(String),
    #[error("unknown feature {0}")]
    UnknownFeature(String),
    #[error("too many distinct values: {got} (limit {limit})")]
    TooManyLevels { got: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
