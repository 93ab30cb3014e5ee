//! Specific-curiosity agent in a teleporting grid world.
//!
//! A tabular TD learner keeps two value functions. The persistent table `V`
//! is learned throughout a non-episodic run. A temporary table is built by
//! planning whenever the agent visits the curiosity-inducing cell, steers the
//! agent straight to a randomly chosen target, and is thrown away when the
//! target is reached. The TD error subtracts the temporary value alongside
//! `V(x)`, so pursuits leave a lasting trace of value at the inducing cell.
//!
//! ```
//! use curio_core::{run_experiment, ExperimentConfig};
//!
//! let config = ExperimentConfig { trials: 2, steps_per_trial: 200, ..Default::default() };
//! let result = run_experiment(&config).unwrap();
//! assert_eq!(result.trials.len(), 2);
//! ```

pub mod agent;
pub mod curiosity;
pub mod error;
pub mod gridworld;
pub mod harness;

pub use agent::{
    greedy_actions, select_action, td_update, Agent, LearnerParams, Transition, ValueTable,
};
pub use curiosity::{
    plan_distance, plan_distance_dp, synthesize_temp_values, CuriosityState, TempValueForm,
    TempValueTable,
};
pub use error::{AggregateError, ConfigError, Error, Result};
pub use gridworld::{Action, Grid, GridPos, WorldLayout};
pub use harness::{
    aggregate, run_experiment, run_experiment_with, run_trial, Execution, ExperimentConfig,
    ExperimentResult, SeriesPoint, SeriesStats, TrialResult,
};
