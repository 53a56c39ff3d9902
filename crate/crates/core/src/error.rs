use thiserror::Error;

/// Errors raised by the analysis, solvers, simulators and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or scenario parameter violates its invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A formula left its numerical domain (overflow, zero denominator, ...).
    #[error("numerical domain error: {0}")]
    Domain(String),

    /// Incompatible combination of otherwise valid settings.
    #[error("configuration error: {0}")]
    Config(String),

    /// Root bracketing or bisection failed.
    #[error("solver error: {0}")]
    Solver(String),

    /// Curve or exponent fit could not be carried out.
    #[error("fit error: {0}")]
    Fit(String),

    /// The operation is not defined for the requested source family.
    #[error("unsupported source family: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter { .. } | Error::Config(_) | Error::Unsupported(_) => 2,
            Error::Domain(_) | Error::Solver(_) | Error::Fit(_) => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite, got {value}")))
    }
}
