use thiserror::Error;

use crate::spectra::Classification;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested standard form needs an angle that does not exist
    /// for this matrix (e.g. `theta_R` when `p = 0`).
    #[error("standard form undefined: {0}")]
    UndefinedForm(String),

    /// The requested standard form exists only for real eigen/ortho structure.
    #[error("standard form inapplicable: {0}")]
    FormInapplicable(String),

    #[error("operation requires a reactive attractor, got {}", .0.as_str())]
    NotReactiveAttractor(Classification),

    #[error("inapplicable: {0}")]
    Inapplicable(String),

    /// Strict mode refuses to evaluate the closed form for complex eigenvalues.
    #[error("complex eigenvalues: closed form not used in strict mode, use the numeric oracle")]
    NeedsNumeric,

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
