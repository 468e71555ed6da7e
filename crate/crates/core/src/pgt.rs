//! Pseudo ground truth: outlier filtering and log-odds accumulation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::geometry::{Point2D, Pose2D};
use crate::grid::{CellMask, GridFrame, OccupancyGrid};
use crate::sensor::beam_direction;
use crate::walk::GridWalk;

/// Dynamic-radius outlier removal settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    pub enabled: bool,
    /// Neighbours required to keep a point.
    pub k_min: usize,
    /// Multiplier on the beam spacing `r·Δθ`.
    pub beta: f64,
    /// Smallest search radius, meters.
    pub sr_min: f64,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self { enabled: true, k_min: 2, beta: 3.0, sr_min: 0.1 }
    }
}

impl FilterParams {
    pub fn disabled() -> Self {
        Self { enabled: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::invalid("filter.beta", "must be positive"));
        }
        if !(self.sr_min > 0.0 && self.sr_min.is_finite()) {
            return Err(Error::invalid("filter.sr_min", "must be positive"));
        }
        Ok(())
    }

    /// Search radius for a return at sensor range `r`.
    pub fn search_radius(&self, r: f64, angular_resolution: f64) -> f64 {
        self.sr_min.max(self.beta * r * angular_resolution)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredCloud {
    /// Input minus the removed beams. Non-returns are kept.
    pub kept: PointCloud,
    /// Indices into the input cloud's beams, ascending.
    pub removed: Vec<usize>,
}

/// Keep-mask for points with per-point search radii: point `i` survives iff
/// at least `k_min` other points lie within `radii[i]` of it.
///
/// Uses a uniform hash grid bucketed at the largest radius, so each query
/// only inspects the 3×3 neighbouring buckets.
pub fn dror_keep_mask(points: &[Point2D], radii: &[f64], k_min: usize) -> Vec<bool> {
    assert_eq!(points.len(), radii.len());
    if k_min == 0 || points.is_empty() {
        return alloc::vec![true; points.len()];
    }
    let bucket = radii.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
    let key = |p: &Point2D| (libm::floor(p.x / bucket) as i64, libm::floor(p.y / bucket) as i64);
    let mut buckets: BTreeMap<(i64, i64), Vec<u32>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i as u32);
    }

    let mut keep = alloc::vec![false; points.len()];
    for (i, p) in points.iter().enumerate() {
        let sr2 = radii[i] * radii[i];
        let (bx, by) = key(p);
        let mut count = 0;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(members) = buckets.get(&(bx + dx, by + dy)) else { continue };
                for &j in members {
                    let j = j as usize;
                    if j == i {
                        continue;
                    }
                    let q = &points[j];
                    let (ex, ey) = (q.x - p.x, q.y - p.y);
                    if ex * ex + ey * ey <= sr2 {
                        count += 1;
                        if count >= k_min {
                            break 'search;
                        }
                    }
                }
            }
        }
        keep[i] = count >= k_min;
    }
    keep
}

/// Removes isolated returns from one frame. Points are compared in the world
/// frame after projecting through `pose`; non-returns never count as neighbours.
pub fn dror_filter(
    cloud: &PointCloud,
    pose: &Pose2D,
    angular_resolution: f64,
    params: &FilterParams,
) -> Result<FilteredCloud> {
    params.validate()?;
    if !params.enabled || params.k_min == 0 {
        return Ok(FilteredCloud { kept: cloud.clone(), removed: Vec::new() });
    }
    let mut index = Vec::new();
    let mut points = Vec::new();
    let mut radii = Vec::new();
    for (i, beam) in cloud.returns() {
        let r = beam.range.unwrap_or_default();
        let (s, c) = libm::sincos(beam.azimuth);
        index.push(i);
        points.push(pose.transform(Point2D::new(r * c, r * s)));
        radii.push(params.search_radius(r, angular_resolution));
    }
    let keep = dror_keep_mask(&points, &radii, params.k_min);
    let removed: Vec<usize> = index.iter().zip(&keep).filter(|(_, k)| !**k).map(|(i, _)| *i).collect();

    let mut kept = PointCloud::new(cloud.frame_id, cloud.timestamp, Vec::with_capacity(cloud.len()));
    let mut next_removed = removed.iter().peekable();
    for (i, beam) in cloud.beams.iter().enumerate() {
        if next_removed.peek() == Some(&&i) {
            next_removed.next();
            continue;
        }
        kept.beams.push(*beam);
    }
    Ok(FilteredCloud { kept, removed })
}

/// Log-odds increments applied per beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSensorModel {
    /// Added to the cell holding the return.
    pub l_occ: f64,
    /// Added to cells the beam passed through.
    pub l_free: f64,
}

impl Default for InverseSensorModel {
    fn default() -> Self {
        Self { l_occ: libm::log(0.7 / 0.3), l_free: libm::log(0.4 / 0.6) }
    }
}

impl InverseSensorModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.l_occ > 0.0 && 0.0 > self.l_free && self.l_occ.is_finite() && self.l_free.is_finite()) {
            return Err(Error::invalid("ism", "need l_occ > 0 > l_free"));
        }
        Ok(())
    }
}

/// Integrates frames into a global log-odds grid.
///
/// For a return at range `r` the beam is walked from the sensor: cells left
/// before `r` get `l_free`, the cell containing `r` gets `l_occ`. A
/// non-return marks the whole ray free out to `max_range`. The sensor's own
/// cell is never marked free.
#[derive(Debug, Clone)]
pub struct Accumulator {
    grid: OccupancyGrid,
    ism: InverseSensorModel,
    max_range: f64,
}

impl Accumulator {
    pub fn new(frame: GridFrame, ism: InverseSensorModel, max_range: f64) -> Result<Self> {
        ism.validate()?;
        if !(max_range > 0.0) {
            return Err(Error::invalid("max_range", "must be positive"));
        }
        Ok(Self { grid: OccupancyGrid::new(frame), ism, max_range })
    }

    pub fn integrate(&mut self, pose: &Pose2D, cloud: &PointCloud) -> Result<()> {
        let frame = *self.grid.frame();
        if frame.world_to_cell(pose.position()).is_none() {
            return Err(Error::PoseOutOfBounds { frame_id: cloud.frame_id, x: pose.x(), y: pose.y() });
        }
        let width = frame.width;
        for beam in &cloud.beams {
            let dir = beam_direction(pose, beam.azimuth);
            let walk = GridWalk::new(&frame, pose.position(), dir)
                .ok_or_else(|| Error::Invariant("beam walk failed from an in-bounds pose".into()))?;
            match beam.range {
                Some(r) => {
                    for (i, span) in walk.enumerate() {
                        let idx = span.cell.row * width + span.cell.col;
                        if span.contains(r) {
                            self.grid.update_index(idx, self.ism.l_occ);
                            break;
                        }
                        if span.t_enter > r {
                            break;
                        }
                        if i > 0 {
                            self.grid.update_index(idx, self.ism.l_free);
                        }
                    }
                }
                None => {
                    for (i, span) in walk.enumerate() {
                        if span.t_enter >= self.max_range {
                            break;
                        }
                        if i > 0 {
                            self.grid.update_index(span.cell.row * width + span.cell.col, self.ism.l_free);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn into_grid(self) -> OccupancyGrid {
        self.grid
    }
}

/// Accumulates `(pose, cloud)` frames into a fresh grid starting at `L = 0`.
pub fn accumulate<'a, I>(frames: I, frame: GridFrame, max_range: f64, ism: InverseSensorModel) -> Result<OccupancyGrid>
where
    I: IntoIterator<Item = (&'a Pose2D, &'a PointCloud)>,
{
    let mut acc = Accumulator::new(frame, ism, max_range)?;
    for (pose, cloud) in frames {
        acc.integrate(pose, cloud)?;
    }
    Ok(acc.into_grid())
}

/// Cells that received at least one update (`L ≠ 0`).
pub fn observed_mask(pgt: &OccupancyGrid) -> CellMask {
    let bits = pgt.cells().iter().map(|l| *l != 0.0).collect();
    CellMask::new(pgt.width(), pgt.height(), bits).expect("mask matches grid size")
}
