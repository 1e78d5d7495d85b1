//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed edge-list input. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Thresholds collapsed after rounding; the division cannot be planned.
    #[error("threshold planning failed: {0}")]
    Planning(String),

    /// Part results overlap or leave nodes uncovered.
    #[error("merge conflict: {0}")]
    Merge(String),

    /// The simulator hit its sweep cap without reaching a fixpoint.
    #[error("no convergence within {max_sweeps} sweeps")]
    NonConvergence { max_sweeps: usize },

    /// Engine failure while decomposing one part of a divided run.
    #[error("part {index}: {source}")]
    Part {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn in_part(self, index: usize) -> Error {
        Error::Part {
            index,
            source: Box::new(self),
        }
    }
}
