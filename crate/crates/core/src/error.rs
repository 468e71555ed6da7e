use alloc::string::String;
use core::fmt;

use crate::grid::Cell;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates its documented range. `field` names the offending input.
    InvalidParameter { field: &'static str, reason: String },
    CellOutOfBounds { cell: Cell, width: usize, height: usize },
    /// A sensor pose fell outside the grid.
    PoseOutOfBounds { frame_id: u64, x: f64, y: f64 },
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    /// Grids share dimensions but not resolution or origin.
    NotAligned,
    EmptyMask,
    /// An internal invariant failed; indicates a bug rather than bad input.
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { field, reason: reason.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { field, reason } => write!(f, "invalid `{field}`: {reason}"),
            Error::CellOutOfBounds { cell, width, height } => write!(
                f,
                "cell ({}, {}) outside {width}x{height} grid",
                cell.col, cell.row
            ),
            Error::PoseOutOfBounds { frame_id, x, y } => {
                write!(f, "frame {frame_id}: pose ({x}, {y}) lies outside the grid")
            }
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "grid dimensions differ: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NotAligned => f.write_str("grids not geographically aligned"),
            Error::EmptyMask => f.write_str("comparison mask is empty"),
            Error::Invariant(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
