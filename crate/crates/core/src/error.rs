use thiserror::Error;

use crate::cyclo::CycloError;
use crate::ringmat::RingMatError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("verification failed: {0}")]
    Defect(String),
    #[error(transparent)]
    RingMat(#[from] RingMatError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 1 for mathematical mismatches, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Defect(_) => 1,
            _ => 2,
        }
    }
}
