use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex count {n} exceeds the enumeration guard {max_n}")]
    Limit { n: usize, max_n: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph generation failed: {0}")]
    Generation(String),
    #[error("degenerate direction: {0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures that come from the numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Degenerate(_) | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
