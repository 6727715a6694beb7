use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An index is out of reach of the generating matrices.
    #[error("out of range: {0}")]
    Range(String),

    /// A precision change would drop nonzero bits, or the requested
    /// precision cannot be handled exactly.
    #[error("precision error: {0}")]
    Precision(String),

    /// Duplicate points make the mesh ratio unbounded.
    #[error("degenerate point set: {0}")]
    Degenerate(String),

    /// The request exceeds the configured scale cap.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}
