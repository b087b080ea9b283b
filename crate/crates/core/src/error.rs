use thiserror::Error;

/// Errors surfaced by the library. Everything else (violated internal
/// invariants) panics, since those indicate bugs rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("elements are not comparable")]
    NotComparable,

    #[error("out of range: {0}")]
    Range(String),

    #[error("not a character: {0}")]
    NotACharacter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
