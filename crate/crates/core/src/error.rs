use thiserror::Error;

/// Errors raised by pattern operations, models, samplers and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("patterns live on different windows")]
    WindowMismatch,

    #[error("no atom at the requested location")]
    AtomNotFound,

    #[error("point lies outside the window")]
    OutOfWindow,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model has no analytic Palm sampler")]
    NoAnalyticPalm,

    #[error("model has no second product density")]
    NoProductDensity,

    #[error("total intensity is zero at the conditioning point")]
    ZeroIntensityAtPoint,

    #[error("two-point conditioning is degenerate (zero normalizer)")]
    DegenerateConditioning,

    #[error("no replicate carried positive weight")]
    ZeroTotalWeight,

    #[error("empty input")]
    EmptyInput,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
