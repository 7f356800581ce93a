use serde::Serialize;
use slh_core::slh::Violation;
use slh_core::Error;

pub const PARSE: u8 = 2;
pub const VALIDATION: u8 = 3;
pub const NUMERICAL: u8 = 4;

/// Machine-readable error record, written to stderr as one JSON line.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub status: u8,
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: PARSE,
            kind: "usage",
            message: message.into(),
            violations: Vec::new(),
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Failure {
            status: PARSE,
            kind: "io",
            message: format!("{}: {err}", path.display()),
            violations: Vec::new(),
        }
    }

    pub fn invalid_model(violations: Vec<Violation>) -> Self {
        Failure::from(Error::InvalidModel(violations))
    }

    pub fn record(&self) -> String {
        serde_json::to_string(self).expect("failure record serializes")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (status, kind, violations) = match e {
            Error::Parse(_) => (PARSE, "parse", Vec::new()),
            Error::Io(_) => (PARSE, "io", Vec::new()),
            Error::InvalidModel(v) => (VALIDATION, "invalid_model", v),
            Error::DimensionMismatch { .. } => (VALIDATION, "dimension_mismatch", Vec::new()),
            Error::NotHermitian { .. } => (VALIDATION, "not_hermitian", Vec::new()),
            Error::InvalidState(_) => (VALIDATION, "invalid_state", Vec::new()),
            Error::InvalidSpec(_) => (VALIDATION, "invalid_spec", Vec::new()),
            Error::NumericalBreakdown(_) => (NUMERICAL, "numerical_breakdown", Vec::new()),
            Error::TruncationExceeded { .. } => (NUMERICAL, "truncation_exceeded", Vec::new()),
        };
        Failure {
            status,
            kind,
            message,
            violations,
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::from(Error::from(e))
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
