use fresco::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {field}: {message}")]
    Parse { line: usize, field: String, message: String },
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
    #[error("{0}")]
    Io(String),
    #[error("insufficient precision at order {available}{}", suggestion(.suggested))]
    Precision { available: usize, suggested: Option<usize> },
    #[error("{0}")]
    Math(String),
}

fn suggestion(s: &Option<usize>) -> String {
    match s {
        Some(n) => format!("; order {} suffices (pass --truncation {} on exact input, or supply more terms)", n, n),
        None => "; no order up to the search limit suffices".to_string(),
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation { .. } | CliError::Io(_) => 2,
            CliError::Precision { .. } => 3,
            CliError::Math(_) => 4,
        }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation { field: field.into(), message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientPrecision { available, .. } => CliError::Precision { available, suggested: None },
            other => CliError::Math(other.to_string()),
        }
    }
}
