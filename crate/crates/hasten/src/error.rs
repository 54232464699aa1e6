//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance document or signal/schedule syntax.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid input that violates a semantic rule; the message
    /// names the offending clause or field.
    #[error("validation error: {0}")]
    Validation(String),

    /// Argument outside its mathematical domain (e.g. `s` outside `[0, 1]`).
    #[error("domain error: {0}")]
    Domain(String),

    /// Request exceeds a hard resource cap.
    #[error("cap exceeded: {what} limited to {limit}, requested {requested}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    /// Numerical guard tripped (norm drift, eigensolver failure).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI. Every error is a usage or runtime
    /// fault (exit 2); exit 1 is reserved for domain-negative outcomes
    /// (unsatisfiable instance, unreachable threshold), which are not errors.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
