use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid medium: {0}")]
    InvalidMedium(String),

    #[error("{what} = {value} is outside the domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("root count mismatch: tridiagonal seeding found {seeded}, argument principle gives {argument}")]
    CountMismatch { seeded: usize, argument: i64 },

    #[error("boundary value of the dispersion function vanishes near nu = {nu}")]
    BoundaryZero { nu: f64 },

    #[error("no discrete eigenvalue matches nu = {0}")]
    NotInSpectrum(f64),

    #[error("direction {angle} is grazing or coincides with the singular set")]
    UnsupportedDirection { angle: f64 },

    #[error("evaluation at the source plane or point is singular")]
    SingularPoint,

    #[error("{what} did not converge: error estimate {estimate:e} exceeds {tolerance:e}")]
    Accuracy {
        what: &'static str,
        estimate: f64,
        tolerance: f64,
    },

    #[error("spectral system is ill-conditioned (condition number {0:e})")]
    Conditioning(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
