use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DofError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The requested configuration is outside what the finite-extension
    /// alignment scheme covers.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, DofError>;
