//! Multi-trial experiment driver.
//!
//! Each trial is one unbroken stream of steps (there are no episodes) run by
//! a freshly initialised [`Agent`] with its own seed. Trials are independent,
//! so they may run on any number of threads; aggregation always folds them
//! in trial-index order, which keeps floating-point results identical across
//! execution strategies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agent::{Agent, LearnerParams, Transition, ValueTable};
use crate::curiosity::TempValueForm;
use crate::error::{AggregateError, ConfigError, Result};
use crate::gridworld::{Grid, WorldLayout, DEFAULT_GRID_SIZE};

pub const DEFAULT_STEPS: usize = 5000;
pub const DEFAULT_TRIALS: usize = 30;

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub grid_size: usize,
    pub steps_per_trial: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub params: LearnerParams,
    /// Series sampling stride in steps.
    pub snapshot_every: usize,
    pub temp_value_form: TempValueForm,
    /// When false the agent never becomes curious.
    #[serde(default = "default_true")]
    pub curiosity: bool,
    /// Keep every [`Transition`] in the trial results.
    #[serde(default)]
    pub record_steps: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            grid_size: DEFAULT_GRID_SIZE,
            steps_per_trial: DEFAULT_STEPS,
            trials: DEFAULT_TRIALS,
            base_seed: 0,
            params: LearnerParams::default(),
            snapshot_every: 1,
            temp_value_form: TempValueForm::NegativeDistance,
            curiosity: true,
            record_steps: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<WorldLayout, ConfigError> {
        let layout = WorldLayout::new(self.grid_size)?;
        self.params.validate()?;
        self.temp_value_form.validate(self.params.gamma)?;
        if self.steps_per_trial == 0 {
            return Err(ConfigError::ZeroSteps);
        }
        if self.trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        if self.snapshot_every == 0 {
            return Err(ConfigError::ZeroSnapshotEvery);
        }
        Ok(layout)
    }

    /// Seed of trial `index`: the `index + 1`-th output of a SplitMix64
    /// generator started at `base_seed`.
    pub fn trial_seed(&self, index: usize) -> u64 {
        splitmix64(
            self.base_seed
                .wrapping_add(SPLITMIX_GAMMA.wrapping_mul(index as u64 + 1)),
        )
    }

    pub fn series_len(&self) -> usize {
        self.steps_per_trial / self.snapshot_every + 1
    }
}

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tracked quantities at one sampled step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub step: usize,
    pub v_inducing: f64,
    /// Mean of `V` over the satisfying candidates.
    pub v_satisfying: f64,
}

impl SeriesPoint {
    pub fn sample(step: usize, values: &ValueTable, layout: &WorldLayout) -> Self {
        let satisfying = layout.satisfying();
        let sum: f64 = satisfying.iter().map(|&c| values[c]).sum();
        SeriesPoint {
            step,
            v_inducing: values[layout.inducing()],
            v_satisfying: sum / satisfying.len() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial_index: usize,
    pub seed: u64,
    pub final_values: ValueTable,
    pub series: Vec<SeriesPoint>,
    pub trigger_count: usize,
    pub satisfaction_count: usize,
    /// Steps from each trigger to its satisfaction, both inclusive.
    pub pursuit_lengths: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<Transition>>,
}

/// Mean and population standard deviation across trials at one sampled step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub step: usize,
    pub v_inducing_mean: f64,
    pub v_inducing_std: f64,
    pub v_satisfying_mean: f64,
    pub v_satisfying_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub mean_values: Grid<f64>,
    pub std_values: Grid<f64>,
    pub series: Vec<SeriesStats>,
    pub trials: Vec<TrialResult>,
}

/// How [`run_experiment_with`] schedules trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

pub fn run_trial(config: &ExperimentConfig, trial_index: usize) -> Result<TrialResult> {
    let layout = config.validate()?;
    let seed = config.trial_seed(trial_index);
    let mut agent = Agent::new(layout.clone(), config.params, config.temp_value_form, seed)?
        .with_curiosity(config.curiosity);

    let mut series = Vec::with_capacity(config.series_len());
    series.push(SeriesPoint::sample(0, agent.values(), &layout));
    let mut steps = config
        .record_steps
        .then(|| Vec::with_capacity(config.steps_per_trial));
    let mut trigger_count = 0;
    let mut satisfaction_count = 0;
    let mut pursuit_lengths = Vec::new();
    let mut pursuit_started = 0;

    for t in 1..=config.steps_per_trial {
        let transition = agent.step();
        if transition.triggered {
            trigger_count += 1;
            pursuit_started = t;
        }
        if transition.satisfied {
            satisfaction_count += 1;
            pursuit_lengths.push(t - pursuit_started + 1);
        }
        if let Some(log) = steps.as_mut() {
            log.push(transition);
        }
        if t % config.snapshot_every == 0 {
            series.push(SeriesPoint::sample(t, agent.values(), &layout));
        }
    }

    Ok(TrialResult {
        trial_index,
        seed,
        final_values: agent.into_values(),
        series,
        trigger_count,
        satisfaction_count,
        pursuit_lengths,
        steps,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(config, Execution::default())
}

pub fn run_experiment_with(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<ExperimentResult> {
    config.validate()?;
    let results = match execution {
        Execution::Sequential => (0..config.trials)
            .map(|i| run_trial(config, i))
            .collect::<Result<Vec<_>>>()?,
        Execution::Parallel => (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, i))
            .collect::<Result<Vec<_>>>()?,
    };
    aggregate(results, config)
}

/// `(mean, population std)` of `xs`, summed in iteration order.
fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Per-cell and per-step statistics over trials, in trial-index order.
pub fn aggregate(
    mut results: Vec<TrialResult>,
    config: &ExperimentConfig,
) -> Result<ExperimentResult> {
    if results.is_empty() {
        return Err(AggregateError::Empty.into());
    }
    results.sort_by_key(|r| r.trial_index);

    let size = results[0].final_values.size();
    let series_len = results[0].series.len();
    for r in &results {
        if r.final_values.size() != size {
            return Err(AggregateError::GridSize {
                index: r.trial_index,
                expected: size,
                found: r.final_values.size(),
            }
            .into());
        }
        if r.series.len() != series_len {
            return Err(AggregateError::SeriesLength {
                index: r.trial_index,
                expected: series_len,
                found: r.series.len(),
            }
            .into());
        }
    }

    let cell_stats = Grid::from_fn(size, |c| {
        mean_std(results.iter().map(|r| r.final_values[c]))
    });
    let series = (0..series_len)
        .map(|k| {
            let (v_inducing_mean, v_inducing_std) =
                mean_std(results.iter().map(|r| r.series[k].v_inducing));
            let (v_satisfying_mean, v_satisfying_std) =
                mean_std(results.iter().map(|r| r.series[k].v_satisfying));
            SeriesStats {
                step: results[0].series[k].step,
                v_inducing_mean,
                v_inducing_std,
                v_satisfying_mean,
                v_satisfying_std,
            }
        })
        .collect();

    Ok(ExperimentResult {
        config: config.clone(),
        mean_values: cell_stats.map(|&(m, _)| m),
        std_values: cell_stats.map(|&(_, s)| s),
        series,
        trials: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridworld::GridPos;

    fn small(trials: usize, steps: usize) -> ExperimentConfig {
        ExperimentConfig {
            trials,
            steps_per_trial: steps,
            ..ExperimentConfig::default()
        }
    }

    fn fake_trial(index: usize, cell_value: f64, series: Vec<(f64, f64)>) -> TrialResult {
        let mut values = Grid::filled(5, 0.0);
        values[GridPos::new(2, 2)] = cell_value;
        TrialResult {
            trial_index: index,
            seed: index as u64,
            final_values: values,
            series: series
                .into_iter()
                .enumerate()
                .map(|(step, (a, b))| SeriesPoint {
                    step,
                    v_inducing: a,
                    v_satisfying: b,
                })
                .collect(),
            trigger_count: 0,
            satisfaction_count: 0,
            pursuit_lengths: vec![],
            steps: None,
        }
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            c.validate().unwrap_err()
        };
        assert_eq!(bad(|c| c.grid_size = 10), ConfigError::EvenGridSize(10));
        assert_eq!(bad(|c| c.steps_per_trial = 0), ConfigError::ZeroSteps);
        assert_eq!(bad(|c| c.trials = 0), ConfigError::ZeroTrials);
        assert_eq!(
            bad(|c| c.snapshot_every = 0),
            ConfigError::ZeroSnapshotEvery
        );
        assert_eq!(bad(|c| c.params.epsilon = -0.5), ConfigError::Epsilon(-0.5));
        assert!(run_trial(&small(1, 0), 0).is_err());
    }

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let c = ExperimentConfig::default();
        let seeds: Vec<u64> = (0..1000).map(|i| c.trial_seed(i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        // First outputs of SplitMix64 from state 0.
        assert_eq!(c.trial_seed(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(c.trial_seed(1), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn aggregate_population_statistics() {
        let cfg = ExperimentConfig::default();
        let r = aggregate(
            vec![
                fake_trial(0, 1.0, vec![(1.0, 0.0)]),
                fake_trial(1, 3.0, vec![(3.0, 0.0)]),
            ],
            &cfg,
        )
        .unwrap();
        assert_eq!(r.mean_values[GridPos::new(2, 2)], 2.0);
        assert_eq!(r.std_values[GridPos::new(2, 2)], 1.0);
        assert_eq!(r.series[0].v_inducing_mean, 2.0);
        assert_eq!(r.series[0].v_inducing_std, 1.0);

        let r = aggregate(
            [0.0, 0.0, 2.0, 2.0]
                .iter()
                .enumerate()
                .map(|(i, &v)| fake_trial(i, v, vec![(v, v)]))
                .collect(),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.mean_values[GridPos::new(2, 2)], 1.0);
        assert_eq!(r.std_values[GridPos::new(2, 2)], 1.0);
        assert_eq!(r.series[0].v_satisfying_std, 1.0);
    }

    #[test]
    fn aggregate_is_order_independent() {
        let cfg = ExperimentConfig::default();
        let trials: Vec<_> = (0..5)
            .map(|i| fake_trial(i, 0.1 * i as f64 + 0.7, vec![(0.3 * i as f64, 0.01)]))
            .collect();
        let forward = aggregate(trials.clone(), &cfg).unwrap();
        let mut rev = trials;
        rev.reverse();
        rev.swap(0, 2);
        assert_eq!(aggregate(rev, &cfg).unwrap(), forward);
    }

    #[test]
    fn aggregate_identical_trials_have_zero_std() {
        let cfg = ExperimentConfig::default();
        let trials: Vec<_> = (0..4)
            .map(|i| fake_trial(i, 0.37, vec![(0.1, 0.2), (0.3, 0.4)]))
            .collect();
        let r = aggregate(trials, &cfg).unwrap();
        assert!(r.std_values.as_slice().iter().all(|&s| s == 0.0));
        assert!(r
            .series
            .iter()
            .all(|s| s.v_inducing_std == 0.0 && s.v_satisfying_std == 0.0));
    }

    #[test]
    fn aggregate_rejects_bad_input() {
        let cfg = ExperimentConfig::default();
        assert_eq!(aggregate(vec![], &cfg), Err(AggregateError::Empty.into()));
        let err = aggregate(
            vec![
                fake_trial(0, 0.0, vec![(0.0, 0.0)]),
                fake_trial(1, 0.0, vec![]),
            ],
            &cfg,
        )
        .unwrap_err();
        assert_eq!(
            err,
            AggregateError::SeriesLength {
                index: 1,
                expected: 1,
                found: 0
            }
            .into()
        );
    }

    #[test]
    fn trial_counts_and_series_shape() {
        let cfg = ExperimentConfig {
            snapshot_every: 7,
            ..small(1, 500)
        };
        let r = run_trial(&cfg, 0).unwrap();
        assert_eq!(r.series.len(), 500 / 7 + 1);
        assert_eq!(r.series[0].step, 0);
        assert_eq!(r.series.last().unwrap().step, 497);
        assert!(r.trigger_count >= 1);
        assert!(r.satisfaction_count <= r.trigger_count);
        assert!(r.trigger_count <= r.satisfaction_count + 1);
        assert_eq!(r.pursuit_lengths.len(), r.satisfaction_count);
        assert!(r.steps.is_none());
    }

    #[test]
    fn first_pursuit_ends_at_step_four() {
        let cfg = ExperimentConfig {
            record_steps: true,
            ..small(1, 50)
        };
        for trial in 0..10 {
            let r = run_trial(&cfg, trial).unwrap();
            let log = r.steps.unwrap();
            assert!(log[0].triggered);
            let first = log.iter().position(|t| t.satisfied).unwrap();
            assert_eq!(first + 1, 4);
        }
    }

    #[test]
    fn single_trial_experiment_statistics() {
        let cfg = small(1, 300);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.mean_values, r.trials[0].final_values);
        assert!(r.std_values.as_slice().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn last_series_sample_matches_final_values() {
        let cfg = ExperimentConfig {
            snapshot_every: 10,
            ..small(3, 400)
        };
        let r = run_experiment(&cfg).unwrap();
        let layout = cfg.validate().unwrap();
        for t in &r.trials {
            let recomputed = SeriesPoint::sample(400, &t.final_values, &layout);
            assert_eq!(*t.series.last().unwrap(), recomputed);
        }
    }

    #[test]
    fn repeat_runs_are_identical() {
        let cfg = ExperimentConfig {
            record_steps: true,
            ..small(2, 800)
        };
        assert_eq!(run_trial(&cfg, 1).unwrap(), run_trial(&cfg, 1).unwrap());
        assert_eq!(
            run_experiment_with(&cfg, Execution::Sequential).unwrap(),
            run_experiment_with(&cfg, Execution::Parallel).unwrap()
        );
    }
}
