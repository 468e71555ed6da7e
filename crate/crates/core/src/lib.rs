//! Deterministic LiDAR benchmarking core.
//!
//! Simulates a planar scan-line LiDAR inside a rasterized world, degrades the
//! scans with weather and sensor limitation models, builds a pseudo ground
//! truth (PGT) occupancy grid by de-noising and accumulating the scans, and
//! scores that grid against the rasterized ground truth (GT).
//!
//! The crate is `no_std` and only needs `alloc`. All transcendental math goes
//! through `libm`, so results do not depend on the platform's libc.

#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms, unused_qualifications)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cloud;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod metrics;
pub mod pgt;
pub mod pipeline;
pub mod rng;
pub mod sensor;
pub mod walk;
pub mod weather;
pub mod world;

pub use cloud::{BeamLabel, BeamReturn, PerturbedCloud, PointCloud};
pub use error::{Error, Result};
pub use geometry::{normalize_angle, Point2D, Pose2D};
pub use grid::{logodds_to_prob, Cell, CellMask, GridFrame, OccupancyGrid, L_MAX, L_MIN};
pub use metrics::{evaluate, KpiReport, KpiThresholds};
pub use pgt::{accumulate, dror_filter, observed_mask, FilterParams, FilteredCloud, InverseSensorModel};
pub use pipeline::{run_scenario, FilterStats, FrameRecord, ScenarioRun};
pub use rng::{rng_stream, RngStream, Stage, StreamKey};
pub use sensor::{builtin_sensor_catalog, lookup_sensor, raycast, scan, sensor_catalog_rows, CatalogRow, SensorSpec};
pub use weather::{
    apply_weather, extinction_coefficient, limitation_catalog, wet_surface_reflectivity,
    WeatherCondition, WeatherKind, WeatherModel, Wavelength,
};
pub use world::{rasterize_world, sample_trajectory, Obstacle, Scenario, Trajectory, WorldModel};
