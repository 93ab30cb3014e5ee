//! Dual value function learner.
//!
//! The persistent table `V` is learned with a TD(0) update whose prediction
//! term is `V(x) + V_curious(x)`. Because the temporary value is never
//! positive, every curious step pushes `V(x)` upwards, leaving an enduring
//! preference for the places where curiosity was experienced.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curiosity::{CuriosityState, TempValueForm};
use crate::error::ConfigError;
use crate::gridworld::{Action, Grid, GridPos, WorldLayout};

/// Persistent state-value table, one entry per cell.
pub type ValueTable = Grid<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerParams {
    pub gamma: f64,
    pub alpha: f64,
    pub epsilon: f64,
}

impl LearnerParams {
    pub const DEFAULT_GAMMA: f64 = 0.9;
    pub const DEFAULT_ALPHA: f64 = 0.1;
    pub const DEFAULT_EPSILON: f64 = 0.1;

    pub fn new(gamma: f64, alpha: f64, epsilon: f64) -> Result<Self, ConfigError> {
        let params = LearnerParams {
            gamma,
            alpha,
            epsilon,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(ConfigError::Gamma(self.gamma));
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 || self.alpha > 1.0 {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        Ok(())
    }
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            gamma: Self::DEFAULT_GAMMA,
            alpha: Self::DEFAULT_ALPHA,
            epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

/// Applies `delta = r + gamma * V(x') - [V(x) + temp_at_x]` and
/// `V(x) += alpha * delta`, returning `delta`.
///
/// With `temp_at_x == 0` this is plain tabular TD(0).
pub fn td_update(
    values: &mut ValueTable,
    x: GridPos,
    x_next: GridPos,
    reward: f64,
    temp_at_x: f64,
    params: &LearnerParams,
) -> f64 {
    debug_assert!(temp_at_x <= 0.0);
    let delta = reward + params.gamma * values[x_next] - (values[x] + temp_at_x);
    values[x] += params.alpha * delta;
    assert!(values[x].is_finite(), "value at {x} diverged");
    delta
}

/// Actions whose successor attains the largest valuation, in
/// [`Action::ALL`] order. Never empty.
pub fn greedy_actions(
    valuation: impl Fn(GridPos) -> f64,
    pos: GridPos,
    layout: &WorldLayout,
) -> Vec<Action> {
    let scored = layout.successors(pos).map(|(a, s)| (a, valuation(s)));
    let best = scored
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    scored
        .iter()
        .filter(|&&(_, v)| v == best)
        .map(|&(a, _)| a)
        .collect()
}

/// Behaviour policy.
///
/// Curious: uniform over the greedy set of the temporary table, one draw.
/// Idle: one uniform `f64` draw decides exploration; exploring then draws one
/// of the five actions, exploiting draws one member of the greedy set on `V`.
pub fn select_action<R: Rng + ?Sized>(
    values: &ValueTable,
    curiosity: &CuriosityState,
    pos: GridPos,
    layout: &WorldLayout,
    params: &LearnerParams,
    rng: &mut R,
) -> Action {
    match curiosity {
        CuriosityState::Curious { temp, .. } => {
            let greedy = greedy_actions(|c| temp.get(c), pos, layout);
            greedy[rng.gen_range(0..greedy.len())]
        }
        CuriosityState::Idle => {
            if rng.gen::<f64>() < params.epsilon {
                Action::ALL[rng.gen_range(0..Action::ALL.len())]
            } else {
                let greedy = greedy_actions(|c| values[c], pos, layout);
                greedy[rng.gen_range(0..greedy.len())]
            }
        }
    }
}

/// One pass through the per-step event loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: GridPos,
    pub action: Action,
    pub to: GridPos,
    pub delta: f64,
    /// Temporary value read at `from` for the update.
    pub temp_at_from: f64,
    /// `V(from)` after the update.
    pub value_after: f64,
    /// Curiosity fired at `from` before acting.
    pub triggered: bool,
    /// The move reached the active target.
    pub satisfied: bool,
    /// Target being pursued during this step, if any.
    pub target: Option<GridPos>,
}

/// A learner placed in the world with its own seeded random stream.
#[derive(Debug, Clone)]
pub struct Agent {
    layout: WorldLayout,
    params: LearnerParams,
    form: TempValueForm,
    curiosity_enabled: bool,
    values: ValueTable,
    state: CuriosityState,
    pos: GridPos,
    rng: ChaCha8Rng,
}

impl Agent {
    /// Starts at the inducing cell with `V == 0` and no active curiosity.
    pub fn new(
        layout: WorldLayout,
        params: LearnerParams,
        form: TempValueForm,
        seed: u64,
    ) -> Result<Self, ConfigError> {
        params.validate()?;
        form.validate(params.gamma)?;
        Ok(Agent {
            values: Grid::filled(layout.size(), 0.0),
            pos: layout.inducing(),
            layout,
            params,
            form,
            curiosity_enabled: true,
            state: CuriosityState::Idle,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// With curiosity disabled the agent never triggers and learns by
    /// ordinary TD(0).
    pub fn with_curiosity(mut self, enabled: bool) -> Self {
        self.curiosity_enabled = enabled;
        self
    }

    pub fn layout(&self) -> &WorldLayout {
        &self.layout
    }

    pub fn values(&self) -> &ValueTable {
        &self.values
    }

    pub fn into_values(self) -> ValueTable {
        self.values
    }

    pub fn state(&self) -> &CuriosityState {
        &self.state
    }

    pub fn pos(&self) -> GridPos {
        self.pos
    }

    /// Trigger, act, move, update, satisfy. The update reads the temporary
    /// value at the pre-move cell before the satisfaction check at the new
    /// cell.
    pub fn step(&mut self) -> Transition {
        let from = self.pos;
        let mut triggered = false;
        if self.curiosity_enabled && !self.state.is_curious() {
            let state = std::mem::take(&mut self.state);
            self.state = state
                .maybe_trigger(
                    from,
                    &self.layout,
                    self.form,
                    self.params.gamma,
                    &mut self.rng,
                )
                .expect("agent parameters validated at construction");
            triggered = self.state.is_curious();
        }
        let target = self.state.target();

        let action = select_action(
            &self.values,
            &self.state,
            from,
            &self.layout,
            &self.params,
            &mut self.rng,
        );
        let to = self.layout.step(from, action);
        let temp_at_from = self.state.temp_value(from);
        let delta = td_update(&mut self.values, from, to, 0.0, temp_at_from, &self.params);

        let state = std::mem::take(&mut self.state);
        self.state = state.maybe_satisfy(to);
        let satisfied = target.is_some() && !self.state.is_curious();
        self.pos = to;

        Transition {
            from,
            action,
            to,
            delta,
            temp_at_from,
            value_after: self.values[from],
            triggered,
            satisfied,
            target,
        }
    }
}
