//! Command-line front end: config parsing, run orchestration and
//! serialization of experiment results into plot-ready CSV plus a JSON
//! summary and a digest manifest.
//!
//! Exit-code contract: 0 success, 2 config error, 3 resource cap exceeded,
//! 4 total failure (every point failed), 1 anything else. Failures emit a
//! single-line machine-readable JSON error record on stderr.

pub mod config;
pub mod output;
pub mod run;

/// Error carrying its exit code; rendered as JSON on stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "config", message: message.into() }
    }

    pub fn resource_cap(message: impl Into<String>) -> Self {
        Self { code: 3, kind: "resource_cap", message: message.into() }
    }

    pub fn total_failure(message: impl Into<String>) -> Self {
        Self { code: 4, kind: "total_failure", message: message.into() }
    }

    pub fn other(message: impl Into<String>) -> Self {
        Self { code: 1, kind: "error", message: message.into() }
    }

    /// Single-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": { "code": self.code, "kind": self.kind, "message": self.message }
        })
        .to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (exit {})", self.message, self.code)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::other(format!("i/o failure: {err}"))
    }
}
