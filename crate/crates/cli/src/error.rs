use std::fmt;

use collapse_kit::Error;
use serde_json::{json, Value};

/// Failure classes with distinct exit statuses.
#[derive(Debug)]
pub enum CliError {
    /// Bad or missing flags (exit 2).
    Usage(String),
    /// Configuration or physical preconditions not met, or a Monte Carlo
    /// validation that did not pass (exit 3).
    Validation(String),
    /// Numerical failure: non-convergence, instability, I/O (exit 4).
    Numeric(String),
}

impl CliError {
    pub const USAGE: u8 = 2;
    pub const VALIDATION: u8 = 3;
    pub const NUMERIC: u8 = 4;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => Self::USAGE,
            CliError::Validation(_) => Self::VALIDATION,
            CliError::Numeric(_) => Self::NUMERIC,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Numeric(_) => "numeric",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) | CliError::Numeric(m) => m,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.message(),
            }
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnknownPreset(_) | Error::MissingParameter(_) => CliError::Usage(msg),
            Error::MissingKey(_)
            | Error::Parse { .. }
            | Error::NonPhysical { .. }
            | Error::Linearization { .. }
            | Error::Unstable { .. }
            | Error::NoSteadyState
            | Error::AttractiveCoupling
            | Error::OutOfRegime(_)
            | Error::NoEntanglement { .. }
            | Error::NoiseNotPsd => CliError::Validation(msg),
            Error::StepTooLarge { .. }
            | Error::NonFinite(_)
            | Error::Degenerate(_)
            | Error::Quadrature { .. }
            | Error::Invalid(_) => CliError::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numeric(format!("I/O error: {e}"))
    }
}
