//! Static world geometry, ground-truth rasterization and trajectories.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{Point2D, Pose2D};
use crate::grid::{GridFrame, OccupancyGrid, L_MAX, L_MIN};
use crate::metrics::KpiThresholds;
use crate::pgt::FilterParams;
use crate::sensor::SensorSpec;
use crate::weather::WeatherCondition;

/// Axis-aligned rectangular obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub min: Point2D,
    pub max: Point2D,
    /// Diffuse reflectivity in `(0, 1]`.
    pub reflectivity: f64,
}

impl Obstacle {
    pub fn new(min: Point2D, max: Point2D, reflectivity: f64) -> Self {
        Self { min, max, reflectivity }
    }

    /// Half-open containment `[min, max)` per axis.
    pub fn contains(&self, p: Point2D) -> bool {
        self.min.x <= p.x && p.x < self.max.x && self.min.y <= p.y && p.y < self.max.y
    }

    pub fn distance_to(&self, p: Point2D) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        libm::hypot(dx, dy)
    }
}

/// World spanning `[0, width] × [0, height]` meters.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldModel {
    pub width: f64,
    pub height: f64,
    pub obstacles: Vec<Obstacle>,
    pub surface_wet: bool,
}

impl WorldModel {
    pub fn new(width: f64, height: f64, obstacles: Vec<Obstacle>, surface_wet: bool) -> Result<Self> {
        let w = Self { width, height, obstacles, surface_wet };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return Err(Error::invalid("world.bounds", "width and height must be positive and finite"));
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            if !(o.min.is_finite() && o.max.is_finite()) {
                return Err(Error::invalid("world.obstacles", alloc::format!("obstacle {i} has non-finite corners")));
            }
            if !(o.min.x < o.max.x && o.min.y < o.max.y) {
                return Err(Error::invalid("world.obstacles", alloc::format!("obstacle {i}: min must be below max on both axes")));
            }
            if o.min.x < 0.0 || o.min.y < 0.0 || o.max.x > self.width || o.max.y > self.height {
                return Err(Error::invalid("world.obstacles", alloc::format!("obstacle {i} extends past the world bounds")));
            }
            if !(o.reflectivity > 0.0 && o.reflectivity <= 1.0) {
                return Err(Error::invalid("world.obstacles", alloc::format!("obstacle {i}: reflectivity must lie in (0, 1]")));
            }
        }
        Ok(())
    }

    /// Reflectivity of the obstacle nearest to `p`; 1.0 in an empty world.
    /// Ties go to the obstacle listed first.
    pub fn reflectivity_near(&self, p: Point2D) -> f64 {
        let mut best: Option<(f64, f64)> = None;
        for o in &self.obstacles {
            let d = o.distance_to(p);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, o.reflectivity));
            }
        }
        best.map_or(1.0, |(_, rho)| rho)
    }
}

/// `ceil(extent / res)`, snapping ratios within 1e-9 of an integer.
fn cells_covering(extent: f64, res: f64) -> usize {
    let n = extent / res;
    let r = libm::round(n);
    let cells = if (n - r).abs() <= 1e-9 * r.max(1.0) { r } else { libm::ceil(n) };
    (cells as usize).max(1)
}

/// Binary GT grid: a cell is `L_MAX` iff its center lies inside an obstacle.
pub fn rasterize_world(world: &WorldModel, resolution: f64) -> Result<OccupancyGrid> {
    world.validate()?;
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::invalid("grid_resolution", "must be positive and finite"));
    }
    let frame = GridFrame::new(
        cells_covering(world.width, resolution),
        cells_covering(world.height, resolution),
        resolution,
        Point2D::new(0.0, 0.0),
    )?;
    let mut cells = alloc::vec![L_MIN; frame.len()];
    for o in &world.obstacles {
        // Only scan the cell range that can hold centers inside the rectangle.
        let c0 = (libm::floor(o.min.x / resolution - 0.5).max(0.0)) as usize;
        let c1 = ((libm::ceil(o.max.x / resolution)) as usize).min(frame.width);
        let r0 = (libm::floor(o.min.y / resolution - 0.5).max(0.0)) as usize;
        let r1 = ((libm::ceil(o.max.y / resolution)) as usize).min(frame.height);
        for row in r0..r1 {
            for col in c0..c1 {
                let center = frame.cell_center(crate::grid::Cell::new(col, row));
                if o.contains(center) {
                    cells[row * frame.width + col] = L_MAX;
                }
            }
        }
    }
    OccupancyGrid::from_cells(frame, cells)
}

/// Piecewise-linear path driven at constant speed.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<Point2D>,
    /// m/s.
    pub speed: f64,
}

impl Trajectory {
    pub fn new(waypoints: Vec<Point2D>, speed: f64) -> Result<Self> {
        let t = Self { waypoints, speed };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.waypoints.is_empty() {
            return Err(Error::invalid("trajectory.waypoints", "need at least one waypoint"));
        }
        if self.waypoints.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("trajectory.waypoints", "waypoints must be finite"));
        }
        if self.waypoints.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("trajectory.waypoints", "consecutive waypoints must differ"));
        }
        if !(self.speed > 0.0 && self.speed.is_finite()) {
            return Err(Error::invalid("trajectory.speed", "must be positive"));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }
}

/// Poses every `cycle_time` seconds along the path, spaced `speed·cycle_time`
/// in arc length. The first sample is the start; the last is the final
/// waypoint, reached without overshoot. Headings follow the current segment.
pub fn sample_trajectory(traj: &Trajectory, cycle_time: f64) -> Result<Vec<(f64, Pose2D)>> {
    traj.validate()?;
    if !(cycle_time > 0.0 && cycle_time.is_finite()) {
        return Err(Error::invalid("cycle_time", "must be positive"));
    }
    let wps = &traj.waypoints;
    if wps.len() == 1 {
        return Ok(alloc::vec![(0.0, Pose2D::new(wps[0].x, wps[0].y, 0.0))]);
    }
    let seg_len: Vec<f64> = wps.windows(2).map(|w| w[0].distance(&w[1])).collect();
    let headings: Vec<f64> = wps.windows(2).map(|w| libm::atan2(w[1].y - w[0].y, w[1].x - w[0].x)).collect();
    let total: f64 = seg_len.iter().sum();
    let step = traj.speed * cycle_time;
    let eps = 1e-9 * total.max(1.0);

    let mut out = Vec::new();
    let mut seg = 0;
    let mut seg_start = 0.0;
    let mut k = 0usize;
    loop {
        let s = k as f64 * step;
        if s >= total - eps {
            break;
        }
        while seg + 1 < seg_len.len() && s >= seg_start + seg_len[seg] {
            seg_start += seg_len[seg];
            seg += 1;
        }
        let f = ((s - seg_start) / seg_len[seg]).clamp(0.0, 1.0);
        let (a, b) = (wps[seg], wps[seg + 1]);
        let pose = Pose2D::new(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), headings[seg]);
        out.push((k as f64 * cycle_time, pose));
        k += 1;
    }
    let end = wps[wps.len() - 1];
    out.push((k as f64 * cycle_time, Pose2D::new(end.x, end.y, headings[headings.len() - 1])));
    Ok(out)
}

/// One benchmarking case: world, drive, sensor, conditions and evaluation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: alloc::string::String,
    pub world: WorldModel,
    pub trajectory: Trajectory,
    pub sensor: SensorSpec,
    pub weather: WeatherCondition,
    /// Meters per cell.
    pub grid_resolution: f64,
    pub seed: u64,
    pub filter: FilterParams,
    pub thresholds: KpiThresholds,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.world.validate()?;
        self.trajectory.validate()?;
        self.sensor.validate()?;
        self.weather.validate()?;
        self.filter.validate()?;
        self.thresholds.validate()?;
        if !(self.grid_resolution > 0.0 && self.grid_resolution.is_finite()) {
            return Err(Error::invalid("grid_resolution", "must be positive"));
        }
        Ok(())
    }
}
