//! Hard-coded specific-curiosity module.
//!
//! Visiting the inducing cell while idle samples a target uniformly from the
//! satisfying candidates and builds a temporary value table from the known
//! dynamics. The table is zero at the target and strictly negative elsewhere,
//! so greedy ascent on it walks a shortest path to the target. Reaching the
//! target discards the table.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::gridworld::{Action, Grid, GridPos, WorldLayout};

/// Shape of the temporary value function as a function of the shortest-path
/// distance `d` to the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TempValueForm {
    /// `-d`.
    #[default]
    NegativeDistance,
    /// `-(1 - gamma^d) / (1 - gamma)`: the discounted return of paying 1 per
    /// step until the target is reached.
    Discounted,
}

impl TempValueForm {
    pub fn value(self, distance: u32, gamma: f64) -> f64 {
        match self {
            TempValueForm::NegativeDistance => -f64::from(distance),
            TempValueForm::Discounted => -(1.0 - gamma.powi(distance as i32)) / (1.0 - gamma),
        }
    }

    /// The discounted form collapses every non-target cell to -1 when
    /// `gamma == 0`, which loses the ordering greedy pursuit relies on.
    pub fn validate(self, gamma: f64) -> Result<(), ConfigError> {
        match self {
            TempValueForm::Discounted if gamma.is_nan() || gamma <= 0.0 => {
                Err(ConfigError::Gamma(gamma))
            }
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for TempValueForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "negative-distance" => Ok(TempValueForm::NegativeDistance),
            "discounted" => Ok(TempValueForm::Discounted),
            other => Err(format!(
                "unknown form `{other}` (expected `negative-distance` or `discounted`)"
            )),
        }
    }
}

impl std::fmt::Display for TempValueForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TempValueForm::NegativeDistance => "negative-distance",
            TempValueForm::Discounted => "discounted",
        })
    }
}

/// Minimal number of transitions from every cell to `target`.
///
/// Breadth-first search outward from the target over reversed edges.
pub fn plan_distance(layout: &WorldLayout, target: GridPos) -> Grid<u32> {
    let size = layout.size();
    let mut predecessors: Grid<Vec<GridPos>> = Grid::filled(size, Vec::new());
    for cell in layout.cells() {
        for (_, next) in layout.successors(cell) {
            let preds = &mut predecessors[next];
            if !preds.contains(&cell) {
                preds.push(cell);
            }
        }
    }

    let mut dist: Grid<Option<u32>> = Grid::filled(size, None);
    dist[target] = Some(0);
    let mut frontier = VecDeque::from([target]);
    while let Some(cell) = frontier.pop_front() {
        let d = dist[cell].expect("queued cells have a distance");
        for &pred in &predecessors[cell] {
            if dist[pred].is_none() {
                dist[pred] = Some(d + 1);
                frontier.push_back(pred);
            }
        }
    }
    dist.map(|d| d.expect("every cell reaches every other cell"))
}

/// Same distances as [`plan_distance`], computed by synchronous Bellman
/// backups `d(c) = 1 + min_a d(step(c, a))` until nothing changes.
pub fn plan_distance_dp(layout: &WorldLayout, target: GridPos) -> Grid<u32> {
    let mut dist = Grid::filled(layout.size(), u32::MAX);
    dist[target] = 0;
    loop {
        let next = Grid::from_fn(layout.size(), |cell| {
            if cell == target {
                return 0;
            }
            layout
                .successors(cell)
                .iter()
                .map(|&(_, s)| dist[s].saturating_add(1))
                .min()
                .expect("five successors")
        });
        if next == dist {
            return dist;
        }
        dist = next;
    }
}

/// The temporary value function for one pursuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TempValueTable {
    target: GridPos,
    values: Grid<f64>,
}

impl TempValueTable {
    pub fn target(&self) -> GridPos {
        self.target
    }

    pub fn values(&self) -> &Grid<f64> {
        &self.values
    }

    pub fn get(&self, pos: GridPos) -> f64 {
        self.values[pos]
    }
}

/// Builds the temporary value table guiding the agent to `target`.
///
/// `gamma` is only read by [`TempValueForm::Discounted`].
pub fn synthesize_temp_values(
    layout: &WorldLayout,
    target: GridPos,
    form: TempValueForm,
    gamma: f64,
) -> Result<TempValueTable, ConfigError> {
    if !layout.is_satisfying(target) {
        return Err(ConfigError::NotSatisfying(target));
    }
    form.validate(gamma)?;
    let dist = plan_distance(layout, target);
    let values = dist.map(|&d| form.value(d, gamma));
    debug_assert!(values
        .iter()
        .all(|(c, &v)| if c == target { v == 0.0 } else { v < 0.0 }));
    Ok(TempValueTable { target, values })
}

/// Whether the agent currently pursues a curiosity target.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub enum CuriosityState {
    #[default]
    Idle,
    Curious {
        target: GridPos,
        temp: TempValueTable,
    },
}

impl CuriosityState {
    pub fn is_curious(&self) -> bool {
        matches!(self, CuriosityState::Curious { .. })
    }

    pub fn target(&self) -> Option<GridPos> {
        match self {
            CuriosityState::Idle => None,
            CuriosityState::Curious { target, .. } => Some(*target),
        }
    }

    /// Enters the curious state when idle at the inducing cell.
    ///
    /// Draws exactly one random index when it triggers and nothing otherwise.
    /// A visit to the inducing cell while already curious changes nothing.
    pub fn maybe_trigger<R: Rng + ?Sized>(
        self,
        pos: GridPos,
        layout: &WorldLayout,
        form: TempValueForm,
        gamma: f64,
        rng: &mut R,
    ) -> Result<Self, ConfigError> {
        match self {
            CuriosityState::Idle if pos == layout.inducing() => {
                let candidates = layout.satisfying();
                let target = candidates[rng.gen_range(0..candidates.len())];
                let temp = synthesize_temp_values(layout, target, form, gamma)?;
                Ok(CuriosityState::Curious { target, temp })
            }
            state => Ok(state),
        }
    }

    /// Returns to idle once the target is visited.
    pub fn maybe_satisfy(self, pos: GridPos) -> Self {
        match self {
            CuriosityState::Curious { target, .. } if target == pos => CuriosityState::Idle,
            state => state,
        }
    }

    /// Temporary value at `pos`; zero whenever idle.
    pub fn temp_value(&self, pos: GridPos) -> f64 {
        match self {
            CuriosityState::Idle => 0.0,
            CuriosityState::Curious { temp, .. } => temp.get(pos),
        }
    }
}

/// Greedy successor set on a temporary table, used by tests and benches to
/// follow a pursuit without an agent.
pub fn pursuit_actions(layout: &WorldLayout, temp: &TempValueTable, pos: GridPos) -> Vec<Action> {
    crate::agent::greedy_actions(|c| temp.get(c), pos, layout)
}
