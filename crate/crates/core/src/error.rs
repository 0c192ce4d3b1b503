use thiserror::Error;

use crate::graph::ParseError;
use crate::pram::PramError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pram(#[from] PramError),
    #[error("{algorithm} aborted: {reason}")]
    Abort {
        algorithm: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid graph spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },
}

impl Error {
    pub(crate) fn abort(algorithm: &'static str, reason: impl Into<String>) -> Self {
        Error::Abort {
            algorithm,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
