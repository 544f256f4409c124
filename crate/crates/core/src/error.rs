use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (dimensions, non-finite values, bad ids).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix that must be positive definite is not.
    #[error("not positive definite: {0}")]
    NotPositiveDefinite(String),

    /// The caller picked a routine whose structural precondition does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::InvalidInput(format!(
            "{what}: dimension mismatch (expected {expected}, got {got})"
        )));
    }
    Ok(())
}
