//! Dense 2-D log-odds occupancy grid.
//!
//! Cells are half-open squares `[k·res, (k+1)·res)` measured from the grid
//! origin, which is the world position of the corner of cell `(0, 0)`. Row 0 is
//! the row with the smallest `y`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Point2D;

/// Lower log-odds clamp. `p(L_MIN) ≈ 4.54e-5`.
pub const L_MIN: f64 = -10.0;
/// Upper log-odds clamp.
pub const L_MAX: f64 = 10.0;

/// Occupancy probability of a log-odds value: `1 − 1/(1 + e^L)`.
pub fn logodds_to_prob(l: f64) -> f64 {
    1.0 - 1.0 / (1.0 + libm::exp(l))
}

pub fn prob_to_logodds(p: f64) -> f64 {
    libm::log(p / (1.0 - p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub col: usize,
    pub row: usize,
}

impl Cell {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }
}

/// Placement and size of a grid, without cell contents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridFrame {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    pub origin: Point2D,
}

impl GridFrame {
    pub fn new(width: usize, height: usize, resolution: f64, origin: Point2D) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("grid", "width and height must be at least 1"));
        }
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::invalid("resolution", "must be positive and finite"));
        }
        if !origin.is_finite() {
            return Err(Error::invalid("origin", "must be finite"));
        }
        Ok(Self { width, height, resolution, origin })
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell containing `p`, or `None` when `p` falls outside the grid.
    pub fn world_to_cell(&self, p: Point2D) -> Option<Cell> {
        let fc = libm::floor((p.x - self.origin.x) / self.resolution);
        let fr = libm::floor((p.y - self.origin.y) / self.resolution);
        // NaN fails both comparisons.
        if !(fc >= 0.0 && fc < self.width as f64 && fr >= 0.0 && fr < self.height as f64) {
            return None;
        }
        Some(Cell::new(fc as usize, fr as usize))
    }

    pub fn cell_center(&self, cell: Cell) -> Point2D {
        Point2D::new(
            self.origin.x + (cell.col as f64 + 0.5) * self.resolution,
            self.origin.y + (cell.row as f64 + 0.5) * self.resolution,
        )
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.col < self.width && cell.row < self.height
    }

    pub fn index(&self, cell: Cell) -> Option<usize> {
        self.contains(cell).then(|| cell.row * self.width + cell.col)
    }

    /// Same dimensions, resolution and origin, compared bit-for-bit.
    pub fn aligned_with(&self, other: &GridFrame) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.resolution == other.resolution
            && self.origin == other.origin
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    frame: GridFrame,
    cells: Vec<f64>,
}

impl OccupancyGrid {
    /// Uniform unknown grid (`L = 0`, `p = 0.5`).
    pub fn new(frame: GridFrame) -> Self {
        Self::filled(frame, 0.0)
    }

    /// Grid with every cell set to `value` clamped into `[L_MIN, L_MAX]`.
    pub fn filled(frame: GridFrame, value: f64) -> Self {
        Self { frame, cells: vec![clamp_logodds(value); frame.len()] }
    }

    /// Grid from row-major cells (row 0 first).
    pub fn from_cells(frame: GridFrame, cells: Vec<f64>) -> Result<Self> {
        if cells.len() != frame.len() {
            return Err(Error::invalid(
                "cells",
                alloc::format!("expected {} values, found {}", frame.len(), cells.len()),
            ));
        }
        if let Some(i) = cells.iter().position(|l| !(L_MIN..=L_MAX).contains(l)) {
            return Err(Error::invalid(
                "cells",
                alloc::format!("value {} at index {i} outside [{L_MIN}, {L_MAX}]", cells[i]),
            ));
        }
        Ok(Self { frame, cells })
    }

    pub fn frame(&self) -> &GridFrame {
        &self.frame
    }

    pub fn width(&self) -> usize {
        self.frame.width
    }

    pub fn height(&self) -> usize {
        self.frame.height
    }

    pub fn resolution(&self) -> f64 {
        self.frame.resolution
    }

    pub fn origin(&self) -> Point2D {
        self.frame.origin
    }

    /// Row-major log-odds values.
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn world_to_cell(&self, p: Point2D) -> Option<Cell> {
        self.frame.world_to_cell(p)
    }

    pub fn cell_center(&self, cell: Cell) -> Point2D {
        self.frame.cell_center(cell)
    }

    pub fn log_odds(&self, cell: Cell) -> Option<f64> {
        self.frame.index(cell).map(|i| self.cells[i])
    }

    pub fn probability(&self, cell: Cell) -> Option<f64> {
        self.log_odds(cell).map(logodds_to_prob)
    }

    pub fn is_occupied(&self, cell: Cell) -> bool {
        self.log_odds(cell).is_some_and(|l| l > 0.0)
    }

    /// Adds `delta` to a cell and clamps into `[L_MIN, L_MAX]`. Returns the new value.
    pub fn update_cell(&mut self, cell: Cell, delta: f64) -> Result<f64> {
        let i = self.frame.index(cell).ok_or(Error::CellOutOfBounds {
            cell,
            width: self.frame.width,
            height: self.frame.height,
        })?;
        let l = clamp_logodds(self.cells[i] + delta);
        self.cells[i] = l;
        Ok(l)
    }

    /// Overwrites a cell, clamping into range.
    pub fn set_cell(&mut self, cell: Cell, value: f64) -> Result<()> {
        let i = self.frame.index(cell).ok_or(Error::CellOutOfBounds {
            cell,
            width: self.frame.width,
            height: self.frame.height,
        })?;
        self.cells[i] = clamp_logodds(value);
        Ok(())
    }

    pub(crate) fn update_index(&mut self, index: usize, delta: f64) {
        self.cells[index] = clamp_logodds(self.cells[index] + delta);
    }

    /// Adds another grid's evidence cell-by-cell, then clamps.
    ///
    /// Equals sequential accumulation into one grid whenever no intermediate
    /// value reaches a clamp.
    pub fn merge_evidence(&mut self, other: &OccupancyGrid) -> Result<()> {
        if !self.frame.aligned_with(&other.frame) {
            return Err(Error::NotAligned);
        }
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            *a = clamp_logodds(*a + *b);
        }
        Ok(())
    }
}

fn clamp_logodds(l: f64) -> f64 {
    l.clamp(L_MIN, L_MAX)
}

/// Boolean overlay with a grid's dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl CellMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: (width, height),
                found: (bits.len(), 1),
            });
        }
        Ok(Self { width, height, bits })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        Self { width, height, bits: vec![value; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, cell: Cell) -> bool {
        cell.col < self.width && cell.row < self.height && self.bits[cell.row * self.width + cell.col]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}
