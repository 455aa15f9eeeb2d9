use thiserror::Error;

use crate::channel::ChannelError;
use crate::diversity::DiversityError;
use crate::montecarlo::SimError;
use crate::specfun::SpecFunError;

/// Top-level error for experiments and the command-line tool.
#[derive(Debug, Error)]
pub enum UwocError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Diversity(#[from] DiversityError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl UwocError {
    /// 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            UwocError::Usage(_) => 2,
            _ => 1,
        }
    }
}
