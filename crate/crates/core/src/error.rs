use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// Malformed input data. `row` and `column` are 1-based positions in the
    /// source file when known.
    #[error("input error{}: {message}", location(*.row, *.column))]
    Input {
        row: Option<usize>,
        column: Option<usize>,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn location(row: Option<usize>, column: Option<usize>) -> String {
    match (row, column) {
        (Some(r), Some(c)) => format!(" at row {r}, column {c}"),
        (Some(r), None) => format!(" at row {r}"),
        (None, Some(c)) => format!(" at column {c}"),
        (None, None) => String::new(),
    }
}

impl Error {
    pub(crate) fn input(message: impl Into<String>) -> Self {
        Error::Input {
            row: None,
            column: None,
            message: message.into(),
        }
    }

    pub(crate) fn input_at(row: usize, column: Option<usize>, message: impl Into<String>) -> Self {
        Error::Input {
            row: Some(row),
            column,
            message: message.into(),
        }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::Parameter(message.into())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let row = e.position().map(|p| p.line() as usize);
        Error::Input {
            row,
            column: None,
            message: e.to_string(),
        }
    }
}
