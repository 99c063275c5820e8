use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// One violated parameter constraint, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamViolation {
    pub field: &'static str,
    pub reason: String,
}

impl ParamViolation {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Self {
            field,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

fn join_violations(v: &[ParamViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {}", join_violations(.0))]
    InvalidParams(Vec<ParamViolation>),

    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    Shape {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("failed to load {path}: {location}: {reason}")]
    Load {
        path: PathBuf,
        location: String,
        reason: String,
    },

    #[error("probe {probe} is unevaluable: no cross-camera match in the gallery")]
    Unevaluable { probe: usize },

    #[error("no evaluable probes")]
    NoEvaluableProbes,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams(vec![ParamViolation::new(field, reason)])
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
