use thiserror::Error;

/// Errors raised by the analytic kernels and Monte Carlo samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("path-loss singularity at distance {distance}")]
    Singularity { distance: f64 },

    #[error("{quantity} diverges: {reason}")]
    Divergence { quantity: &'static str, reason: String },

    #[error("argument {value} outside the domain of {function}: {reason}")]
    Domain {
        function: &'static str,
        value: f64,
        reason: String,
    },

    #[error("numerical failure in {routine}: {reason}")]
    Numeric { routine: &'static str, reason: String },

    #[error("cannot place a detection threshold: {0}")]
    Threshold(String),

    #[error("closed form only available for path-loss exponent 4, got {0}")]
    UnsupportedExponent(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn domain(function: &'static str, value: f64, reason: impl Into<String>) -> Error {
    Error::Domain {
        function,
        value,
        reason: reason.into(),
    }
}
