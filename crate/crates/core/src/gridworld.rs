//! Deterministic dynamics of the square teleporting grid.
//!
//! The agent can move sideways or upwards (diagonals included) but never
//! down. Sideways components that would leave the grid are clamped in place,
//! and any upward move from the top row teleports the agent to the middle of
//! the bottom row, which keeps the task continuing with no terminal states.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

pub const DEFAULT_GRID_SIZE: usize = 11;
pub const MIN_GRID_SIZE: usize = 5;

/// A cell coordinate. Row 0 is the top row, column 0 the leftmost column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPos {
    pub row: usize,
    pub col: usize,
}

impl GridPos {
    pub const fn new(row: usize, col: usize) -> Self {
        GridPos { row, col }
    }
}

impl fmt::Display for GridPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Left,
    Right,
    Up,
    UpLeft,
    UpRight,
}

impl Action {
    /// Fixed enumeration order used everywhere actions are listed.
    pub const ALL: [Action; 5] = [
        Action::Left,
        Action::Right,
        Action::Up,
        Action::UpLeft,
        Action::UpRight,
    ];

    pub fn is_upward(self) -> bool {
        matches!(self, Action::Up | Action::UpLeft | Action::UpRight)
    }

    /// `(row_delta, col_delta)`.
    pub fn delta(self) -> (isize, isize) {
        match self {
            Action::Left => (0, -1),
            Action::Right => (0, 1),
            Action::Up => (-1, 0),
            Action::UpLeft => (-1, -1),
            Action::UpRight => (-1, 1),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Action::Left => "left",
            Action::Right => "right",
            Action::Up => "up",
            Action::UpLeft => "up-left",
            Action::UpRight => "up-right",
        };
        f.write_str(name)
    }
}

/// Square array with one entry per cell, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    size: usize,
    cells: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(size: usize, value: T) -> Self {
        Grid {
            size,
            cells: vec![value; size * size],
        }
    }
}

impl<T> Grid<T> {
    pub fn from_fn(size: usize, mut f: impl FnMut(GridPos) -> T) -> Self {
        let cells = (0..size * size)
            .map(|i| f(GridPos::new(i / size, i % size)))
            .collect();
        Grid { size, cells }
    }

    /// Builds a grid from row-major data. Returns `None` if the length is not
    /// `size * size`.
    pub fn from_row_major(size: usize, cells: Vec<T>) -> Option<Self> {
        (cells.len() == size * size).then_some(Grid { size, cells })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn as_slice(&self) -> &[T] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.cells.chunks(self.size)
    }

    /// Cells paired with their values, in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (GridPos, &T)> {
        let size = self.size;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, v)| (GridPos::new(i / size, i % size), v))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            size: self.size,
            cells: self.cells.iter().map(f).collect(),
        }
    }

    fn offset(&self, pos: GridPos) -> usize {
        assert!(
            pos.row < self.size && pos.col < self.size,
            "{pos} outside {0}x{0} grid",
            self.size
        );
        pos.row * self.size + pos.col
    }
}

impl<T> Index<GridPos> for Grid<T> {
    type Output = T;

    fn index(&self, pos: GridPos) -> &T {
        &self.cells[self.offset(pos)]
    }
}

impl<T> IndexMut<GridPos> for Grid<T> {
    fn index_mut(&mut self, pos: GridPos) -> &mut T {
        let i = self.offset(pos);
        &mut self.cells[i]
    }
}

/// Geometry of the world: grid size plus the special cells derived from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldLayout {
    size: usize,
    inducing: GridPos,
    satisfying: Vec<GridPos>,
    teleport_dest: GridPos,
}

impl WorldLayout {
    /// Layout for an odd `size >= 5`: the curiosity-inducing cell is the grid
    /// centre, the satisfying candidates are the non-edge cells of row 1 and
    /// the teleport destination is the middle of the bottom row.
    pub fn new(size: usize) -> Result<Self, ConfigError> {
        if size < MIN_GRID_SIZE {
            return Err(ConfigError::GridTooSmall(size));
        }
        if size.is_multiple_of(2) {
            return Err(ConfigError::EvenGridSize(size));
        }
        let mid = (size - 1) / 2;
        let layout = WorldLayout {
            size,
            inducing: GridPos::new(mid, mid),
            satisfying: (1..size - 1).map(|c| GridPos::new(1, c)).collect(),
            teleport_dest: GridPos::new(size - 1, mid),
        };
        assert!(!layout.satisfying.contains(&layout.inducing));
        Ok(layout)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn inducing(&self) -> GridPos {
        self.inducing
    }

    pub fn satisfying(&self) -> &[GridPos] {
        &self.satisfying
    }

    pub fn is_satisfying(&self, pos: GridPos) -> bool {
        pos.row == 1 && pos.col >= 1 && pos.col + 1 < self.size
    }

    pub fn teleport_dest(&self) -> GridPos {
        self.teleport_dest
    }

    pub fn contains(&self, pos: GridPos) -> bool {
        pos.row < self.size && pos.col < self.size
    }

    pub fn check(&self, pos: GridPos) -> Result<GridPos, ConfigError> {
        if self.contains(pos) {
            Ok(pos)
        } else {
            Err(ConfigError::OutOfBounds(pos, self.size))
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = GridPos> {
        let size = self.size;
        (0..size * size).map(move |i| GridPos::new(i / size, i % size))
    }

    /// Successor of `pos` under `action`.
    pub fn step(&self, pos: GridPos, action: Action) -> GridPos {
        debug_assert!(self.contains(pos));
        if pos.row == 0 && action.is_upward() {
            return self.teleport_dest;
        }
        let (dr, dc) = action.delta();
        let row = pos.row.wrapping_add_signed(dr);
        let col = pos
            .col
            .checked_add_signed(dc)
            .unwrap_or(0)
            .min(self.size - 1);
        GridPos::new(row, col)
    }

    /// All five `(action, successor)` pairs in [`Action::ALL`] order.
    pub fn successors(&self, pos: GridPos) -> [(Action, GridPos); 5] {
        Action::ALL.map(|a| (a, self.step(pos, a)))
    }
}

impl Default for WorldLayout {
    fn default() -> Self {
        WorldLayout::new(DEFAULT_GRID_SIZE).expect("default size is valid")
    }
}
