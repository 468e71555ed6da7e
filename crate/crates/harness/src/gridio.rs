//! `PGTGRID 1` text grids and binary PGM previews.
//!
//! ```text
//! PGTGRID 1 <width> <height> <resolution> <origin_x> <origin_y>
//! <width log-odds values for row 0>
//! ...
//! ```
//!
//! Cell values are written with 17 significant digits, enough to restore
//! every `f64` exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use pgt_core::{logodds_to_prob, GridFrame, OccupancyGrid, Point2D};

use crate::error::{HarnessError, Result};

const MAGIC: &str = "PGTGRID";

pub fn grid_to_string(g: &OccupancyGrid) -> String {
    let f = g.frame();
    let mut out = format!("{MAGIC} 1 {} {} {} {} {}\n", f.width, f.height, f.resolution, f.origin.x, f.origin.y);
    for row in g.cells().chunks(f.width) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&format!("{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

pub fn grid_from_str(text: &str, name: &str) -> Result<OccupancyGrid> {
    let err = |line: usize, msg: String| HarnessError::data(format!("{name}:{line}"), msg);
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let fields: Vec<&str> = header.split_ascii_whitespace().collect();
    if fields.len() != 7 || fields[0] != MAGIC {
        return Err(err(1, format!("expected `{MAGIC} 1 <width> <height> <resolution> <origin_x> <origin_y>`")));
    }
    if fields[1] != "1" {
        return Err(err(1, format!("unsupported version `{}`", fields[1])));
    }
    let int = |s: &str, what: &str| s.parse::<usize>().map_err(|_| err(1, format!("bad {what} `{s}`")));
    let float = |s: &str, what: &str| s.parse::<f64>().map_err(|_| err(1, format!("bad {what} `{s}`")));
    let (width, height) = (int(fields[2], "width")?, int(fields[3], "height")?);
    let resolution = float(fields[4], "resolution")?;
    let origin = Point2D::new(float(fields[5], "origin_x")?, float(fields[6], "origin_y")?);
    let frame = GridFrame::new(width, height, resolution, origin).map_err(|e| err(1, e.to_string()))?;

    let mut cells = Vec::with_capacity(width * height);
    for row in 0..height {
        let n = row + 2;
        let line = lines.next().ok_or_else(|| err(n, format!("expected {height} rows, found {row}")))?;
        let before = cells.len();
        for tok in line.split_ascii_whitespace() {
            let v: f64 = tok.parse().map_err(|_| err(n, format!("bad value `{tok}`")))?;
            cells.push(v);
        }
        if cells.len() - before != width {
            return Err(err(n, format!("expected {width} values, found {}", cells.len() - before)));
        }
    }
    if let Some((i, _)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(height + 2 + i, "trailing data after last row".into()));
    }
    OccupancyGrid::from_cells(frame, cells).map_err(|e| HarnessError::data(name, e))
}

pub fn write_grid(g: &OccupancyGrid, path: &Path) -> Result<()> {
    fs::write(path, grid_to_string(g)).map_err(|e| HarnessError::io(path, e))
}

pub fn read_grid(path: &Path) -> Result<OccupancyGrid> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    grid_from_str(&text, &path.display().to_string())
}

/// Binary PGM (P5), one pixel per cell, `round(255·(1−p))` so occupied is
/// dark. Grid row 0 is the top image row, so the world's y axis points down
/// in the picture.
pub fn grid_to_pgm(g: &OccupancyGrid) -> Vec<u8> {
    let (w, h) = (g.width(), g.height());
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h);
    for row in g.cells().chunks(w) {
        out.extend(row.iter().map(|l| (255.0 * (1.0 - logodds_to_prob(*l))).round() as u8));
    }
    out
}

pub fn export_grid_image(g: &OccupancyGrid, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    f.write_all(&grid_to_pgm(g)).map_err(|e| HarnessError::io(path, e))
}
