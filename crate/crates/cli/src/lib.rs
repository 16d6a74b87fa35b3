//! Front end for the `tcs-ising` binary: flag and YAML parsing, and the
//! load → encode → solve → decode → report pipeline.

mod config;
mod runner;

pub use config::{parse_args, DatasetSource, RunConfig, DEFAULT_DATA_DIR, DEFAULT_SAVE_PATH};
pub use runner::{run, ResultEntry, RunOutput};

use tcs_ising::ErrorKind;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] tcs_ising::Error),
}

impl CliError {
    /// 0 for help/version output, 1 usage, 2 data, 3 solver.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) => 1,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Solver => 3,
            },
        }
    }
}
