use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::automaton::PatternId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pattern {0} is empty")]
    EmptyPattern(PatternId),

    #[error("dictionary contains no patterns")]
    EmptyDictionary,

    #[error("worker count must be at least 1, got {0}")]
    InvalidWorkerCount(usize),

    #[error("average run time must be positive, got {0}s")]
    ZeroTime(f64),

    #[error("cannot plant {needed} pattern bytes into a {available}-byte input")]
    InfeasiblePlant { needed: usize, available: usize },

    #[error("cannot draw {requested} distinct patterns; only {possible} exist for this alphabet and length range")]
    InfeasibleDictionary { requested: usize, possible: usize },

    #[error("invalid corpus spec: {0}")]
    InvalidCorpus(String),

    #[error("invalid benchmark config: {0}")]
    InvalidConfig(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
