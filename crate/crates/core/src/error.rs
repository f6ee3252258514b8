use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("did not converge within {iterations} iterations")]
    MaxIterations { iterations: usize },
    #[error("non-finite function value at {at}")]
    NonFinite { at: f64 },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid combining weights: {0}")]
    BadWeights(String),
    #[error("expected {expected} arrivals, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("target unreachable with at most {cap} particles")]
    TargetUnreachable { cap: u64 },
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
