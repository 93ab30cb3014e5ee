use thiserror::Error;

use crate::gridworld::GridPos;

/// Rejected configuration or input.
///
/// Each variant knows the configuration key it refers to, so front ends can
/// point at the offending option.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("grid size must be odd so the grid has a centre cell, got {0}")]
    EvenGridSize(usize),
    #[error("grid size must be at least 5, got {0}")]
    GridTooSmall(usize),
    #[error("gamma must lie in [0, 1), got {0}")]
    Gamma(f64),
    #[error("alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("epsilon must lie in [0, 1], got {0}")]
    Epsilon(f64),
    #[error("steps per trial must be positive")]
    ZeroSteps,
    #[error("trial count must be positive")]
    ZeroTrials,
    #[error("snapshot stride must be positive")]
    ZeroSnapshotEvery,
    #[error("cell {0} is not a curiosity-satisfying location")]
    NotSatisfying(GridPos),
    #[error("cell {0} lies outside a {1}x{1} grid")]
    OutOfBounds(GridPos, usize),
}

impl ConfigError {
    /// Name of the configuration key the error refers to.
    pub fn key(&self) -> &'static str {
        match self {
            ConfigError::EvenGridSize(_) | ConfigError::GridTooSmall(_) => "grid_size",
            ConfigError::Gamma(_) => "gamma",
            ConfigError::Alpha(_) => "alpha",
            ConfigError::Epsilon(_) => "epsilon",
            ConfigError::ZeroSteps => "steps",
            ConfigError::ZeroTrials => "trials",
            ConfigError::ZeroSnapshotEvery => "snapshot_every",
            ConfigError::NotSatisfying(_) => "target",
            ConfigError::OutOfBounds(..) => "position",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AggregateError {
    #[error("cannot aggregate an empty set of trials")]
    Empty,
    #[error("trial {index} has {found} series samples, expected {expected}")]
    SeriesLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("trial {index} has a {found}x{found} value table, expected {expected}x{expected}")]
    GridSize {
        index: usize,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
