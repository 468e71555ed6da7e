//! Scan-line LiDAR model: product catalog, ray casting and scan synthesis.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::cloud::{BeamReturn, PointCloud};
use crate::error::{Error, Result};
use crate::geometry::{Point2D, Pose2D};
use crate::grid::OccupancyGrid;
use crate::rng::{Stage, StreamKey};
use crate::walk::GridWalk;

/// Blind-zone radius used when a product sheet does not state one.
pub const DEFAULT_MIN_RANGE: f64 = 0.3;
/// Stand-in angular accuracy for catalog rows that leave it blank, in degrees.
pub const DEFAULT_ANGULAR_ACCURACY_DEG: f64 = 0.25;
/// Stand-in distance accuracy for catalog rows that leave it blank, in meters.
pub const DEFAULT_DISTANCE_ACCURACY: f64 = 0.03;

/// Which fields of a [`SensorSpec`] are stand-ins rather than datasheet values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssumedFields {
    pub min_range: bool,
    pub angular_resolution: bool,
    pub range_accuracy: bool,
}

impl AssumedFields {
    pub fn any(&self) -> bool {
        self.min_range || self.angular_resolution || self.range_accuracy
    }
}

/// Physical parameters of a LiDAR product, reduced to its horizontal scan line.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSpec {
    pub model_name: String,
    /// Meters.
    pub max_range: f64,
    /// Blind zone, meters.
    pub min_range: f64,
    /// Radians, in `(0, 2π]`.
    pub fov_horizontal: f64,
    /// Radians between neighbouring beams.
    pub angular_resolution: f64,
    /// Gaussian 1σ range error, meters.
    pub range_accuracy_sigma: f64,
    /// Seconds per sweep.
    pub cycle_time: f64,
    pub assumed: AssumedFields,
}

impl SensorSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.max_range,
            self.min_range,
            self.fov_horizontal,
            self.angular_resolution,
            self.range_accuracy_sigma,
            self.cycle_time,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sensor", "all parameters must be finite"));
        }
        if !(0.0 <= self.min_range && self.min_range < self.max_range) {
            return Err(Error::invalid("min_range", "need 0 ≤ min_range < max_range"));
        }
        if !(self.fov_horizontal > 0.0 && self.fov_horizontal <= 2.0 * PI + 1e-12) {
            return Err(Error::invalid("fov_horizontal", "must lie in (0, 360°]"));
        }
        if !(self.angular_resolution > 0.0) {
            return Err(Error::invalid("angular_resolution", "must be positive"));
        }
        if !(self.range_accuracy_sigma >= 0.0) {
            return Err(Error::invalid("range_accuracy_sigma", "must be non-negative"));
        }
        if !(self.cycle_time > 0.0) {
            return Err(Error::invalid("cycle_time", "must be positive"));
        }
        Ok(())
    }

    /// `floor(fov / resolution) + 1`, tolerant of the ratio landing a hair
    /// under an integer.
    pub fn beam_count(&self) -> usize {
        let ratio = self.fov_horizontal / self.angular_resolution;
        libm::floor(ratio + 1e-9) as usize + 1
    }

    /// Sensor-frame azimuth of beam `k`.
    pub fn beam_azimuth(&self, k: usize) -> f64 {
        -self.fov_horizontal / 2.0 + k as f64 * self.angular_resolution
    }

    /// Upper bound on a reported range: `max_range` plus 3σ slack.
    pub fn range_ceiling(&self) -> f64 {
        self.max_range + 3.0 * self.range_accuracy_sigma
    }
}

/// A catalog row as published, in datasheet units. `None` marks a blank cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogRow {
    pub model: &'static str,
    pub range_m: f64,
    pub fov_deg: f64,
    pub accuracy_m: Option<f64>,
    pub accuracy_deg: Option<f64>,
    pub cycle_ms: f64,
}

const CATALOG: [CatalogRow; 6] = [
    CatalogRow { model: "Quanergy M8-1", range_m: 150.0, fov_deg: 360.0, accuracy_m: Some(0.05), accuracy_deg: Some(0.03), cycle_ms: 33.0 },
    CatalogRow { model: "Ibeo LUX", range_m: 200.0, fov_deg: 110.0, accuracy_m: Some(0.10), accuracy_deg: Some(0.125), cycle_ms: 20.0 },
    CatalogRow { model: "Continental SRL1", range_m: 10.0, fov_deg: 27.0, accuracy_m: Some(0.10), accuracy_deg: None, cycle_ms: 10.0 },
    CatalogRow { model: "Velodyne HDL-64ES2", range_m: 120.0, fov_deg: 360.0, accuracy_m: Some(0.02), accuracy_deg: Some(0.09), cycle_ms: 50.0 },
    CatalogRow { model: "Velodyne Alpha Puck", range_m: 300.0, fov_deg: 360.0, accuracy_m: Some(0.03), accuracy_deg: Some(0.11), cycle_ms: 50.0 },
    CatalogRow { model: "Ouster OS-2", range_m: 250.0, fov_deg: 45.0, accuracy_m: None, accuracy_deg: Some(0.175), cycle_ms: 50.0 },
];

/// Raw catalog rows in publication order.
pub fn sensor_catalog_rows() -> &'static [CatalogRow] {
    &CATALOG
}

/// The six market products with their published range, horizontal field of
/// view, accuracy and cycle time. Blank datasheet cells and the blind zone use
/// the `DEFAULT_*` constants and are flagged in [`SensorSpec::assumed`].
pub fn builtin_sensor_catalog() -> Vec<SensorSpec> {
    CATALOG
        .iter()
        .map(|row| SensorSpec {
            model_name: row.model.to_string(),
            max_range: row.range_m,
            min_range: DEFAULT_MIN_RANGE,
            fov_horizontal: row.fov_deg.to_radians(),
            angular_resolution: row.accuracy_deg.unwrap_or(DEFAULT_ANGULAR_ACCURACY_DEG).to_radians(),
            range_accuracy_sigma: row.accuracy_m.unwrap_or(DEFAULT_DISTANCE_ACCURACY),
            cycle_time: row.cycle_ms / 1000.0,
            assumed: AssumedFields {
                min_range: true,
                angular_resolution: row.accuracy_deg.is_none(),
                range_accuracy: row.accuracy_m.is_none(),
            },
        })
        .collect()
}

/// Case-insensitive catalog lookup by model name.
pub fn lookup_sensor(name: &str) -> Option<SensorSpec> {
    builtin_sensor_catalog().into_iter().find(|s| s.model_name.eq_ignore_ascii_case(name.trim()))
}

/// Distance from `origin` to the entry boundary of the first occupied cell
/// along `direction`, or `None` if the ray leaves the grid or runs past
/// `max_range` first. An origin inside an occupied cell yields `Some(0.0)`.
///
/// Cells with positive log-odds count as occupied.
pub fn raycast(
    gt: &OccupancyGrid,
    origin: Point2D,
    direction: (f64, f64),
    max_range: f64,
) -> Result<Option<f64>> {
    let norm = libm::hypot(direction.0, direction.1);
    if !((norm - 1.0).abs() <= 1e-9) {
        return Err(Error::invalid("direction", "must be a unit vector"));
    }
    let walk = GridWalk::new(gt.frame(), origin, direction)
        .ok_or_else(|| Error::invalid("origin", "ray origin lies outside the grid"))?;
    let cells = gt.cells();
    let width = gt.width();
    for span in walk {
        if span.t_enter > max_range {
            return Ok(None);
        }
        if cells[span.cell.row * width + span.cell.col] > 0.0 {
            return Ok(Some(span.t_enter));
        }
    }
    Ok(None)
}

/// World-frame unit direction of a beam.
pub(crate) fn beam_direction(pose: &Pose2D, azimuth: f64) -> (f64, f64) {
    let (s, c) = libm::sincos(pose.heading() + azimuth);
    (c, s)
}

/// Simulates one sweep from `pose`.
///
/// Beam `k` points at sensor-frame azimuth `-fov/2 + k·resolution`. A hit at
/// distance `d` inside `[min_range, max_range]` reports `d + ε` with
/// `ε ~ N(0, σ)` from stream `(seed, frame_id, k, RangeNoise)`, clamped to
/// `[min_range, max_range + 3σ]`. Everything else is a non-return.
pub fn scan(
    gt: &OccupancyGrid,
    pose: &Pose2D,
    spec: &SensorSpec,
    key: StreamKey,
    timestamp: f64,
) -> Result<PointCloud> {
    if gt.world_to_cell(pose.position()).is_none() {
        return Err(Error::PoseOutOfBounds { frame_id: key.frame_id, x: pose.x(), y: pose.y() });
    }
    let n = spec.beam_count();
    let mut beams = Vec::with_capacity(n);
    for k in 0..n {
        let azimuth = spec.beam_azimuth(k);
        let dir = beam_direction(pose, azimuth);
        let hit = raycast(gt, pose.position(), dir, spec.max_range)?;
        let range = match hit {
            Some(d) if d >= spec.min_range && d <= spec.max_range => {
                let r = if spec.range_accuracy_sigma > 0.0 {
                    let mut rng = key.stream(k as u32, Stage::RangeNoise);
                    rng.normal(d, spec.range_accuracy_sigma)
                } else {
                    d
                };
                Some(r.clamp(spec.min_range.max(f64::MIN_POSITIVE), spec.range_ceiling()))
            }
            _ => None,
        };
        beams.push(BeamReturn::new(azimuth, range));
    }
    Ok(PointCloud::new(key.frame_id, timestamp, beams))
}
