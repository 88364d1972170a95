use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The input violates a documented precondition (bad shapes, out-of-range intervals, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The operation is not defined for the given quiver (e.g. shifting a zigzag module).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The brute-force enumeration would exceed its cap.
    #[error("enumeration budget exceeded: {needed} candidate pairs requested, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    /// A theorem precondition does not hold; this is not a falsification.
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// A serialized document could not be parsed.
    #[error("malformed document at {location}: {message}")]
    Malformed { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
