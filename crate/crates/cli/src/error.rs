use serde::Serialize;
use thiserror::Error;

/// Failures surfaced by the command-line front end, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input (exit 1).
    #[error("{0}")]
    Input(String),

    /// An internal invariant failed (exit 2).
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant { invariant: String, detail: String },
}

#[derive(Debug, Serialize)]
pub struct Diagnostic<'a> {
    pub error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant: Option<&'a str>,
    pub detail: String,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Invariant { .. } => 2,
        }
    }

    /// Machine-readable one-line JSON diagnostic.
    pub fn diagnostic(&self) -> String {
        let d = match self {
            CliError::Input(detail) => Diagnostic {
                error: "input",
                invariant: None,
                detail: detail.clone(),
            },
            CliError::Invariant { invariant, detail } => Diagnostic {
                error: "invariant_violation",
                invariant: Some(invariant),
                detail: detail.clone(),
            },
        };
        serde_json::to_string(&d).expect("diagnostic serializes")
    }

    pub fn invariant(invariant: &str, detail: impl Into<String>) -> Self {
        CliError::Invariant {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }
}

impl From<qcc_core::Error> for CliError {
    fn from(e: qcc_core::Error) -> Self {
        match e {
            qcc_core::Error::Internal { invariant, detail } => CliError::Invariant {
                invariant: invariant.to_string(),
                detail,
            },
            other => CliError::Input(other.to_string()),
        }
    }
}
