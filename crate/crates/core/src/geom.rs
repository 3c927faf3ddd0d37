//! Grid coordinates, directions and axis-aligned rectangles.

use serde::{Deserialize, Serialize};

/// A tile coordinate. Row grows southward, column grows eastward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct Pos {
    pub row: i32,
    pub col: i32,
}

impl Pos {
    pub const fn new(row: i32, col: i32) -> Self {
        Pos { row, col }
    }

    pub fn chebyshev(self, other: Pos) -> i32 {
        (self.row - other.row).abs().max((self.col - other.col).abs())
    }

    pub fn manhattan(self, other: Pos) -> i32 {
        (self.row - other.row).abs() + (self.col - other.col).abs()
    }

    pub fn step(self, dir: Direction) -> Pos {
        let (dr, dc) = dir.delta();
        Pos::new(self.row + dr, self.col + dc)
    }

    /// The four orthogonal neighbours in N, E, S, W order.
    pub fn neighbours4(self) -> [Pos; 4] {
        [
            self.step(Direction::North),
            self.step(Direction::East),
            self.step(Direction::South),
            self.step(Direction::West),
        ]
    }
}

impl From<(i32, i32)> for Pos {
    fn from((row, col): (i32, i32)) -> Self {
        Pos { row, col }
    }
}

impl From<Pos> for (i32, i32) {
    fn from(p: Pos) -> Self {
        (p.row, p.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Direction {
    North,
    South,
    East,
    West,
    #[default]
    Stay,
}

impl Direction {
    pub const MOVES: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::North => (-1, 0),
            Direction::South => (1, 0),
            Direction::East => (0, 1),
            Direction::West => (0, -1),
            Direction::Stay => (0, 0),
        }
    }
}

/// Inclusive rectangle `[min, max]` on both axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Pos,
    pub max: Pos,
}

impl Rect {
    pub fn contains(&self, p: Pos) -> bool {
        p.row >= self.min.row && p.row <= self.max.row && p.col >= self.min.col && p.col <= self.max.col
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    /// Chebyshev distance from `p` to the nearest tile of the rectangle; 0 inside.
    pub fn distance(&self, p: Pos) -> i32 {
        let dr = (self.min.row - p.row).max(p.row - self.max.row).max(0);
        let dc = (self.min.col - p.col).max(p.col - self.max.col).max(0);
        dr.max(dc)
    }

    pub fn width(&self) -> i32 {
        self.max.col - self.min.col + 1
    }

    pub fn height(&self) -> i32 {
        self.max.row - self.min.row + 1
    }

    pub fn inset(&self, by: i32) -> Rect {
        Rect {
            min: Pos::new(self.min.row + by, self.min.col + by),
            max: Pos::new(self.max.row - by, self.max.col - by),
        }
    }
}
