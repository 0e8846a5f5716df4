use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time must be positive, got t = {0}")]
    NonPositiveTime(f64),

    #[error("quench ratio must be non-negative, got mu = {0}")]
    NegativeMu(f64),

    #[error("no bound state exists for mu = {0}")]
    NoBoundState(f64),

    #[error("outside asymptotic domain: {0}")]
    OutsideRegime(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between compared fields")]
    GridMismatch,

    #[error("quadrature did not converge: estimated error {achieved:.3e} exceeds tolerance {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("power-law fit needs at least {required} samples inside the window, found {found}")]
    InsufficientSamples { found: usize, required: usize },

    #[error("power-law fit needs positive ordinates, got {value} at t = {t}")]
    NonPositiveOrdinate { t: f64, value: f64 },

    #[error("invalid well: {0}")]
    InvalidWell(String),

    #[error("tridiagonal solve broke down at row {0}")]
    SolverBreakdown(usize),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTime(t))
    }
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if mu >= 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeMu(mu))
    }
}
