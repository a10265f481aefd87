use std::fmt;

use linkmax::Error;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Internal = 1,
    Input = 2,
    Domain = 3,
    Disagreement = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Input,
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Domain,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Internal,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind as i32
    }

    /// Classifies a library error, prefixing the message with `context`.
    pub fn from_library(context: &str, error: Error) -> Self {
        let kind = match &error {
            Error::GroundSetTooSmall(_)
            | Error::TooFewSamples(_)
            | Error::OracleCapExceeded { .. }
            | Error::Empty(_) => ExitKind::Domain,
            Error::NotSquare { .. }
            | Error::InvalidWeight { .. }
            | Error::NonFiniteData { .. }
            | Error::DimensionMismatch(_)
            | Error::InvalidConfig(_) => ExitKind::Input,
            _ => ExitKind::Internal,
        };
        CliError {
            kind,
            message: format!("{context}: {error}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
