use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// A config value is missing, malformed or out of range.
    #[error("{field}: {message}")]
    Validation { field: String, message: String },

    #[error("cannot parse config: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        1
    }
}

/// Attaches a config field path to an engine error.
pub(crate) fn at(field: &str) -> impl Fn(optospring::Error) -> CliError + '_ {
    move |e| CliError::validation(field, e.to_string())
}
