use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument is outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// The integrand produced a non-finite sample.
    #[error("non-finite integrand sample {value} at f = {f}")]
    NonFinite { f: f64, value: f64 },

    /// Zero-forcing needs H(f) bounded away from zero, i.e. 2*alpha < 1.
    #[error("zero-forcing precoder is singular for alpha = {alpha} (need alpha < 0.5)")]
    ZfSingular { alpha: f64 },

    #[error("invalid precoder: {0}")]
    Precoder(String),

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Domain { .. }
            | Error::NonFinite { .. }
            | Error::ZfSingular { .. }
            | Error::Precoder(_) => 3,
            Error::Verification(_) => 4,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}
