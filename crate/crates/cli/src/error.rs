use std::fmt;

use thiserror::Error;

/// Location-aware diagnostic for a malformed code spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub section: Option<String>,
    pub line: Option<usize>,
    pub token: Option<String>,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(section) = &self.section {
            write!(f, "[{section}] ")?;
        }
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(token) = &self.token {
            write!(f, "`{token}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Validation(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Construction(#[from] twistcode_core::Error),
}

impl CliError {
    /// 1 for bad input, 2 for failures while building the code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Validation(_) | CliError::Io { .. } => 1,
            CliError::Construction(_) => 2,
        }
    }
}
