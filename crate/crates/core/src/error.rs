use crate::base::BaseError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("family is not balanced at {0}")]
    NotBalanced(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
