//! CLI error type carrying the process exit code.
//!
//! Exit codes: 0 success, 2 parameter error, 3 numeric/consistency error,
//! 4 resource budget error.

use localent_core::Error as CoreError;

#[derive(Debug, Clone)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parameter(message: String) -> Self {
        Self { code: 2, message }
    }

    pub fn numeric(message: String) -> Self {
        Self { code: 3, message }
    }

    pub fn budget(message: String) -> Self {
        Self { code: 4, message }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Parameter(_) | CoreError::Domain(_) => 2,
            CoreError::Budget { .. } => 4,
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: 3, message: format!("io error: {e}") }
    }
}
