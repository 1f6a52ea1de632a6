use thiserror::Error;

/// Failures reported by the library.
///
/// The CLI maps `Precondition` to exit status 2 and the two certification
/// variants to exit status 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("precondition: {0}")]
    Precondition(String),
    /// A result could not be certified within the configured budget.
    #[error("certification: {0}")]
    Certification(String),
    /// A magnitude left the representable range of the log-space tower.
    #[error("unrepresentable: {0}")]
    Unrepresentable(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn cert(msg: impl Into<String>) -> Self {
        Error::Certification(msg.into())
    }

    pub(crate) fn unrep(msg: impl Into<String>) -> Self {
        Error::Unrepresentable(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
