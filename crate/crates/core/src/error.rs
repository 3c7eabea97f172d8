use thiserror::Error;

/// Errors raised by the solver and its builders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    /// A cell violated rho > 0 or p > 0 (or produced a non-finite value).
    #[error("invalid state at {location}: rho={rho:e}, p={p:e}")]
    InvalidState { location: String, rho: f64, p: f64 },

    #[error("global wave speed {alpha:e} is below the local speed {local:e} at {location}")]
    WaveSpeedBelowLocal {
        alpha: f64,
        local: f64,
        location: String,
    },

    #[error("vacuum is generated by the Riemann data (pressure positivity condition {0:e} <= 0)")]
    Vacuum(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("diagnostic error: {0}")]
    Diagnostic(String),

    #[error("step {step} at t={time:e} s failed: {source}")]
    StepFailed {
        step: u64,
        time: f64,
        #[source]
        source: Box<SolverError>,
    },
}

impl SolverError {
    pub(crate) fn invalid(location: impl Into<String>, rho: f64, p: f64) -> Self {
        SolverError::InvalidState {
            location: location.into(),
            rho,
            p,
        }
    }

    /// Prefix the location of an invalid-state error with extra context.
    pub(crate) fn at(self, context: impl std::fmt::Display) -> Self {
        match self {
            SolverError::InvalidState { location, rho, p } => SolverError::InvalidState {
                location: format!("{context}, {location}"),
                rho,
                p,
            },
            SolverError::WaveSpeedBelowLocal {
                alpha,
                local,
                location,
            } => SolverError::WaveSpeedBelowLocal {
                alpha,
                local,
                location: format!("{context}, {location}"),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, SolverError>;
