use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// The quantity is undefined for the given input (e.g. `a_x == n_x`
    /// leaves no zero positions to condition on).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("exhaustive enumeration over {n_x} input bits exceeds the cap of {cap} bits")]
    EnumerationCap { n_x: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
