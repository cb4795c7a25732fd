use std::fmt;

use dppzeros_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numerical,
    Io,
}

/// An error with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Validation, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Numerical, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Io, message: message.into() }
    }

    /// 2 for bad input, 3 for numerical failure, 1 for IO.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => 2,
            ErrorKind::Numerical => 3,
            ErrorKind::Io => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            ErrorKind::Validation => "invalid input",
            ErrorKind::Numerical => "numerical failure",
            ErrorKind::Io => "io error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InvalidParameter { .. }
            | Error::ScaleLimit { .. }
            | Error::IndexBeyondScheme { .. }
            | Error::NotTridiagonal => ErrorKind::Validation,
            Error::NonFiniteEntry { .. }
            | Error::EigenNonConvergence { .. }
            | Error::Overflow { .. }
            | Error::ZeroLeadingCoefficient
            | Error::ContinuationFailed { .. }
            | Error::ContourNoAgreement { .. } => ErrorKind::Numerical,
        };
        Self { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}
