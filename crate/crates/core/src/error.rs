use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    /// The requested work exceeds a configured cap.
    #[error("guard exceeded: {what} is {size}, cap is {cap} (override to proceed)")]
    Guard {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
