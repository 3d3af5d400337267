use thiserror::Error;

use crate::report::Report;

/// Errors raised by constructions and searches.
///
/// Axiom failures on otherwise well-formed input are not errors: validators
/// return them as a [`Report`]. `Invalid` is used when an operation needs a
/// valid input and was handed one that fails validation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid {what}: {report}")]
    Invalid { what: &'static str, report: Report },

    #[error("size guard: {0}")]
    TooLarge(String),

    #[error("search budget of {budget} nodes exceeded")]
    Budget { budget: u64 },

    #[error("unknown object {0}")]
    UnknownObject(usize),

    #[error("boundary mismatch: {0}")]
    Mismatch(String),

    #[error("precondition rejected: {0}")]
    Precondition(String),

    #[error("theorem violated: {0}")]
    Theorem(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(what: &'static str, report: Report) -> Self {
        Error::Invalid { what, report }
    }
}
