use thiserror::Error;

/// Errors raised by the library. Variants follow the failure classes the
/// checks distinguish: malformed input, operands outside an operation's
/// domain, results that have no exact representation, violated lemma
/// hypotheses, and evaluations the library refuses to approximate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported evaluation: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
