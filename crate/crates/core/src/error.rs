use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    /// Adaptive quadrature ran out of subdivisions before reaching its
    /// tolerance.
    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimate {estimate:e}, \
         error {error:e} > tolerance {tolerance:e} after {panels} panels"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
        error: f64,
        tolerance: f64,
        panels: usize,
    },

    /// A density-matrix invariant is violated beyond round-off.
    #[error("invalid density matrix: {quantity} = {value:e}")]
    Invariant { quantity: &'static str, value: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("sweep point {vary} = {value}: {source}")]
    SweepPoint {
        vary: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown figure preset {0:?}")]
    UnknownPreset(String),

    #[error("nothing to write: {0}")]
    Empty(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
