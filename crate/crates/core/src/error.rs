use thiserror::Error;

/// Errors produced by constructors and analytics. Engine stepping itself is
/// total: every valid input maps to a valid output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("empty sample set")]
    EmptySamples,

    #[error("non-finite sample encountered: {0}")]
    NonFiniteSample(f64),

    #[error("log binning requires strictly positive samples, found {0}")]
    NonPositiveSample(f64),

    #[error("too few samples for {what}: need at least {needed}, got {got}")]
    TooFewSamples {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("all tail samples coincide with xmin; tail has zero log-spread")]
    DegenerateTail,

    #[error("value {0} lies outside the histogram range")]
    OutOfRange(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no sign change inside the grid: {0}")]
    NoSignChange(String),

    #[error("outside validity domain: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
