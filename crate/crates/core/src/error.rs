use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("lattice size {0} is a multiple of 3; degenerate stationary families are not supported")]
    UnsupportedSize(usize),

    #[error("size mismatch: expected {expected} coordinates, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("degenerate stationary point: eigenvalue {eigenvalue:e} within tolerance {tolerance:e}")]
    Degenerate { eigenvalue: f64, tolerance: f64 },

    #[error("continuation failed at gamma = {gamma_reached} (target {gamma_target}): {reason}")]
    ContinuationFailed {
        gamma_reached: f64,
        gamma_target: f64,
        reason: String,
    },

    #[error("Newton iteration did not converge: residual {residual:e} after {iterations} iterations")]
    NewtonDiverged { residual: f64, iterations: usize },

    #[error("horseshoe map is singular at gamma = 0")]
    SingularMap,

    #[error("non-finite state at step {step}")]
    BlowUp { step: u64 },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by invalid user input rather than numerics.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Input(_) | Error::UnsupportedSize(_) | Error::SizeMismatch { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
