use thiserror::Error;

/// Errors raised by the fractional operators and the diagnostics built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("order {alpha} outside the admissible range ({lo}, {hi})")]
    InvalidOrder { alpha: f64, lo: f64, hi: f64 },

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("derivative is singular at t = {0}")]
    SingularAtZero(f64),

    #[error("signal mean {mean:e} exceeds zero-mean tolerance {tol:e}")]
    NonZeroMean { mean: f64, tol: f64 },

    #[error("signal mean is zero within tolerance {tol:e}; growth is undefined")]
    ZeroMean { tol: f64 },

    #[error("signal is identically zero")]
    ZeroSignal,

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    ToleranceNotMet { estimate: f64, tolerance: f64 },

    #[error("truncation depth impractical: {0}")]
    DepthImpractical(String),

    #[error("gamma function has a pole at {0}")]
    PoleAtNonPositiveInteger(f64),

    #[error("hypergeometric series ill-conditioned at z = {0}")]
    SeriesIllConditioned(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("asymptotic form unsupported for order {0}")]
    UnsupportedOrder(f64),

    #[error("non-periodicity witness {delta:e} below threshold {threshold:e}")]
    CertificateNotFound { delta: f64, threshold: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
