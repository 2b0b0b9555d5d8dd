//! Error type shared by every module.

use std::fmt;

/// Broad error class; the CLI maps each class to an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed text input (expressions, files).
    Parse,
    /// Input is well formed but violates a stated constraint.
    Validation,
    /// A mathematical operation has no result (non-member, invalid datum, ...).
    Math,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Error {
    pub kind: ErrorKind,
    pub message: String,
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error {
            kind: ErrorKind::Parse,
            message: msg.into(),
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error {
            kind: ErrorKind::Validation,
            message: msg.into(),
        }
    }

    pub fn math(msg: impl Into<String>) -> Self {
        Error {
            kind: ErrorKind::Math,
            message: msg.into(),
        }
    }

    /// Prefix the message with extra context, keeping the kind.
    pub fn context(self, ctx: &str) -> Self {
        Error {
            kind: self.kind,
            message: format!("{ctx}: {}", self.message),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
