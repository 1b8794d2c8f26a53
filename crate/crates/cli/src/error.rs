use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for bad input, 2 for everything that failed after validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. } | CliError::Validation(_) => 1,
            _ => 2,
        }
    }
}

impl From<rpdw_core::Error> for CliError {
    fn from(e: rpdw_core::Error) -> Self {
        use rpdw_core::Error as E;
        match e {
            E::InvalidGrid(_) | E::ShapeMismatch { .. } | E::InvalidParameter(_) => CliError::Validation(vec![e.to_string()]),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
