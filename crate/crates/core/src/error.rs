use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("cannot compose: top has {top_inputs} inputs but bottom has {bottom_outputs} outputs")]
    Composition {
        top_inputs: usize,
        bottom_outputs: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate metric")]
    Degenerate,

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("catalog bound exceeded: {slots} slots requested, limit is {limit}")]
    CatalogBound { slots: usize, limit: usize },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// True for errors that signal a failed cross-check rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
