use thiserror::Error;

/// Errors produced by the library. The CLI maps the variants onto its exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Precondition violated by the caller (index out of range, mismatched bases, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation could not be completed reliably.
    #[error("numerical error: {message}{}", condition.map(|c| format!(" (condition estimate {c:.3e})")).unwrap_or_default())]
    Numerical {
        message: String,
        condition: Option<f64>,
    },

    /// Malformed input data. Coordinates are 1-based; `column` is `None` for row-level problems.
    #[error("data error at row {row}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Data {
        row: usize,
        column: Option<usize>,
        message: String,
    },

    /// An error tied to one named series of a batch.
    #[error("series '{label}': {source}")]
    Series {
        label: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>, condition: Option<f64>) -> Self {
        Error::Numerical {
            message: msg.into(),
            condition,
        }
    }

    pub(crate) fn data(row: usize, column: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Data {
            row,
            column,
            message: msg.into(),
        }
    }

    pub(crate) fn in_series(self, label: &str) -> Self {
        Error::Series {
            label: label.to_string(),
            source: Box::new(self),
        }
    }

    /// Innermost error, looking through [`Error::Series`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Series { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
