use thiserror::Error;

use crate::fitting::GaussianFit;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value in an input slice is not a positive finite number.
    #[error("value at index {index} is not a positive finite number: {value}")]
    NonPositive { index: usize, value: f64 },

    /// Malformed input text.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A unit symbol that the active unit table does not know.
    #[error("line {line}: unknown unit symbol `{symbol}`")]
    UnknownUnit { line: usize, symbol: String },

    /// A configured column range does not fit inside a line.
    #[error("line {line}: column range {start}..{end} for `{field}` exceeds line length {len}")]
    ColumnRange {
        line: usize,
        field: String,
        start: usize,
        end: usize,
        len: usize,
    },

    /// Not enough populated bins to determine three Gaussian parameters.
    #[error("underdetermined fit: {nonzero} nonzero bins, at least 4 required")]
    Underdetermined { nonzero: usize },

    /// The optimizer hit its iteration cap; `best` holds the last iterate.
    #[error("fit did not converge after {iterations} iterations")]
    NotConverged {
        iterations: usize,
        best: Box<GaussianFit>,
    },

    /// A numerical routine produced a non-finite result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. } | Error::Numerical(_) | Error::Underdetermined { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
