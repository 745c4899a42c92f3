//! File formats, a parallel checkpointed sweep driver and the `erdos`
//! command line, on top of [`erdos_core`].

pub mod cli;
pub mod driver;
pub mod format;
pub mod json;
pub mod spec;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] erdos_core::Error),
    #[error("{0}")]
    Parse(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("corrupt checkpoint {}: {reason}", path.display())]
    CorruptCheckpoint { path: PathBuf, reason: String },
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
