//! Cell-by-cell traversal along a ray (Amanatides & Woo, 1987).
//!
//! Distances are metric: with a unit direction, `t` is meters from the ray
//! origin. Both the ray caster and the map integrator walk rays with this
//! iterator, so a range produced by one lands in the same cell for the other.

use crate::geometry::Point2D;
use crate::grid::{Cell, GridFrame};

/// A cell crossed by a ray and the ray parameter interval spent inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpan {
    pub cell: Cell,
    pub t_enter: f64,
    pub t_exit: f64,
}

impl CellSpan {
    /// Whether distance `t` falls inside this cell, using half-open `[enter, exit)`.
    pub fn contains(&self, t: f64) -> bool {
        self.t_enter <= t && t < self.t_exit
    }
}

#[derive(Debug, Clone)]
pub struct GridWalk {
    col: i64,
    row: i64,
    step_col: i64,
    step_row: i64,
    origin: Point2D,
    direction: (f64, f64),
    grid_origin: Point2D,
    resolution: f64,
    t: f64,
    width: i64,
    height: i64,
    done: bool,
}

impl GridWalk {
    /// Starts a walk at `origin` heading along `direction`. Returns `None` if
    /// the origin lies outside the grid or the direction is zero/non-finite.
    pub fn new(frame: &GridFrame, origin: Point2D, direction: (f64, f64)) -> Option<Self> {
        let start = frame.world_to_cell(origin)?;
        let (dx, dy) = direction;
        if !(dx.is_finite() && dy.is_finite()) || (dx == 0.0 && dy == 0.0) {
            return None;
        }
        let sign = |d: f64| if d > 0.0 { 1 } else if d < 0.0 { -1 } else { 0 };
        Some(Self {
            col: start.col as i64,
            row: start.row as i64,
            step_col: sign(dx),
            step_row: sign(dy),
            origin,
            direction,
            grid_origin: frame.origin,
            resolution: frame.resolution,
            t: 0.0,
            width: frame.width as i64,
            height: frame.height as i64,
            done: false,
        })
    }

    // Distance to the next cell boundary along one axis. Computed from the
    // cell index each time, so exit distances carry no accumulated error.
    fn boundary_t(&self, cell: i64, step: i64, o: f64, grid_o: f64, d: f64) -> f64 {
        if step == 0 {
            return f64::INFINITY;
        }
        let edge = if step > 0 { cell + 1 } else { cell };
        let b = grid_o + edge as f64 * self.resolution;
        ((b - o) / d).max(self.t)
    }
}

impl Iterator for GridWalk {
    type Item = CellSpan;

    fn next(&mut self) -> Option<CellSpan> {
        if self.done {
            return None;
        }
        let cell = Cell::new(self.col as usize, self.row as usize);
        let t_enter = self.t;
        let tx = self.boundary_t(self.col, self.step_col, self.origin.x, self.grid_origin.x, self.direction.0);
        let ty = self.boundary_t(self.row, self.step_row, self.origin.y, self.grid_origin.y, self.direction.1);
        // Ties step along x first; the y neighbour is then entered with zero length.
        if tx <= ty {
            self.t = tx;
            self.col += self.step_col;
        } else {
            self.t = ty;
            self.row += self.step_row;
        }
        if self.col < 0 || self.row < 0 || self.col >= self.width || self.row >= self.height {
            self.done = true;
        }
        Some(CellSpan { cell, t_enter, t_exit: self.t })
    }
}
