use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("product relation fails: residual {0}")]
    ProductRelation(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported local picture at {label}: {detail}")]
    UnsupportedLocalPicture { label: String, detail: String },
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
