use thiserror::Error;

/// Failure to read one of the text notations used by the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational `{0}` (expected `p/q`)")]
    Rational(String),
    #[error("invalid ordinal `{input}`: {reason}")]
    Ordinal { input: String, reason: String },
    #[error("invalid cardinal expression `{input}`: {reason}")]
    Cardinal { input: String, reason: String },
}
