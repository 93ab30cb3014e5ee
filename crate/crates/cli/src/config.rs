//! Run configuration from command-line flags and an optional JSON file.
//!
//! The file uses the same flat keys that `config_echo.json` is written with,
//! so any echo can be fed back through `--config` to repeat a run. Flags given
//! on the command line win over file values.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use curio_core::{ConfigError, ExperimentConfig, LearnerParams, TempValueForm};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_OUT_DIR: &str = "curio-out";

#[derive(Debug, Parser)]
#[command(
    name = "curio",
    version,
    about = "Run the specific-curiosity grid-world experiment and write its data products"
)]
pub struct Args {
    /// JSON file with run settings (same keys as config_echo.json).
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Side length of the square grid; odd, at least 5.
    #[arg(long, value_name = "N")]
    pub grid_size: Option<usize>,
    /// Steps per trial.
    #[arg(long, value_name = "N")]
    pub steps: Option<usize>,
    #[arg(long, value_name = "N")]
    pub trials: Option<usize>,
    /// Base seed; per-trial seeds are derived from it.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Discount factor in [0, 1).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// TD step size in (0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Exploration rate in [0, 1].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Record the time series every N steps.
    #[arg(long, value_name = "N")]
    pub snapshot_every: Option<usize>,
    /// `negative-distance` or `discounted`.
    #[arg(long, value_name = "FORM")]
    pub temp_value_form: Option<TempValueForm>,
    /// Never trigger curiosity (plain TD(0) baseline).
    #[arg(long)]
    pub disable_curiosity: bool,
    #[arg(long, env = "CURIO_OUT_DIR", value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Also write heatmap.pgm of the mean value table.
    #[arg(long)]
    pub emit_heatmap: bool,
    /// Also write one CSV step log per trial.
    #[arg(long)]
    pub emit_step_logs: bool,
}

/// Settings file and `config_echo.json` schema.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temp_value_form: Option<TempValueForm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curiosity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit_heatmap: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit_step_logs: Option<bool>,
    /// Derived from `seed`; written for reference and ignored on input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial_seeds: Option<Vec<u64>>,
}

/// Fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    pub out_dir: PathBuf,
    pub emit_heatmap: bool,
    pub emit_step_logs: bool,
}

impl RunConfig {
    /// Every resolved setting, plus the derived per-trial seeds.
    pub fn echo(&self) -> FileConfig {
        let e = &self.experiment;
        FileConfig {
            grid_size: Some(e.grid_size),
            steps: Some(e.steps_per_trial),
            trials: Some(e.trials),
            seed: Some(e.base_seed),
            gamma: Some(e.params.gamma),
            alpha: Some(e.params.alpha),
            epsilon: Some(e.params.epsilon),
            snapshot_every: Some(e.snapshot_every),
            temp_value_form: Some(e.temp_value_form),
            curiosity: Some(e.curiosity),
            emit_heatmap: Some(self.emit_heatmap),
            emit_step_logs: Some(self.emit_step_logs),
            trial_seeds: Some((0..e.trials).map(|i| e.trial_seed(i)).collect()),
        }
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_owned(),
        source: e,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("--config: {}: {}", path.display(), e)))
}

fn flag_for(err: &ConfigError) -> String {
    format!("--{}", err.key().replace('_', "-"))
}

/// Merges flags over file values over defaults and validates the result.
pub fn resolve(args: Args) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    let defaults = ExperimentConfig::default();
    let params = LearnerParams {
        gamma: args.gamma.or(file.gamma).unwrap_or(defaults.params.gamma),
        alpha: args.alpha.or(file.alpha).unwrap_or(defaults.params.alpha),
        epsilon: args
            .epsilon
            .or(file.epsilon)
            .unwrap_or(defaults.params.epsilon),
    };
    let emit_step_logs = args.emit_step_logs || file.emit_step_logs.unwrap_or(false);
    let experiment = ExperimentConfig {
        grid_size: args
            .grid_size
            .or(file.grid_size)
            .unwrap_or(defaults.grid_size),
        steps_per_trial: args
            .steps
            .or(file.steps)
            .unwrap_or(defaults.steps_per_trial),
        trials: args.trials.or(file.trials).unwrap_or(defaults.trials),
        base_seed: args.seed.or(file.seed).unwrap_or(defaults.base_seed),
        params,
        snapshot_every: args
            .snapshot_every
            .or(file.snapshot_every)
            .unwrap_or(defaults.snapshot_every),
        temp_value_form: args
            .temp_value_form
            .or(file.temp_value_form)
            .unwrap_or(defaults.temp_value_form),
        curiosity: !args.disable_curiosity && file.curiosity.unwrap_or(true),
        record_steps: emit_step_logs,
    };
    experiment
        .validate()
        .map_err(|e| CliError::Usage(format!("{}: {}", flag_for(&e), e)))?;

    Ok(RunConfig {
        experiment,
        out_dir: args
            .out_dir
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
        emit_heatmap: args.emit_heatmap || file.emit_heatmap.unwrap_or(false),
        emit_step_logs,
    })
}

/// Parses `argv` (including the program name) into a validated run.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(CliError::from_clap)?;
    resolve(args)
}
