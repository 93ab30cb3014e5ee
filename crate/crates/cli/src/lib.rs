//! Front end for the `curio` binary: flag and file parsing, running the
//! experiment and writing CSV/PGM data products.

use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

pub mod config;
pub mod output;

pub use config::{parse_config, Args, FileConfig, RunConfig};
pub use output::{emit_outputs, OutputManifest};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version`; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn from_clap(err: clap::Error) -> Self {
        use clap::error::ErrorKind;
        match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(err.to_string()),
            _ => {
                let rendered = err.to_string();
                let first = rendered.lines().next().unwrap_or("invalid arguments");
                CliError::Usage(first.trim_start_matches("error: ").to_owned())
            }
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Info(_) => ExitCode::SUCCESS,
            CliError::Usage(_) => ExitCode::from(EXIT_USAGE),
            CliError::Io { .. } => ExitCode::from(EXIT_IO),
        }
    }
}

/// Parse, run and write outputs.
pub fn run<I, T>(argv: I) -> Result<OutputManifest, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let run = parse_config(argv)?;
    let result =
        curio_core::run_experiment(&run.experiment).map_err(|e| CliError::Usage(e.to_string()))?;
    emit_outputs(&result, &run)
}
