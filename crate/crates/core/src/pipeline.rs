//! End-to-end scenario execution: GT → scans → weather → filter → PGT → KPIs.

use alloc::vec::Vec;

use crate::cloud::{BeamLabel, PerturbedCloud, PointCloud};
use crate::error::Result;
use crate::geometry::Pose2D;
use crate::grid::OccupancyGrid;
use crate::metrics::{evaluate, KpiReport};
use crate::pgt::{dror_filter, Accumulator, InverseSensorModel};
use crate::rng::StreamKey;
use crate::sensor::scan;
use crate::weather::WeatherModel;
use crate::world::{rasterize_world, sample_trajectory, Scenario};

/// What the logger stores for one sensor sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub seq_id: u64,
    pub timestamp: f64,
    pub pose: Pose2D,
    pub raw_cloud: PerturbedCloud,
    pub filtered_cloud: PointCloud,
    /// Beam indices of `raw_cloud` removed by the filter.
    pub removed_indices: Vec<usize>,
}

/// Filter outcome scored against the clutter labels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterStats {
    /// Clutter returns removed.
    pub true_positives: usize,
    /// Genuine returns removed.
    pub false_positives: usize,
    /// Clutter returns kept.
    pub false_negatives: usize,
}

impl FilterStats {
    pub fn record(&mut self, raw: &PointCloud, removed: &[usize]) {
        let mut removed_clutter = 0;
        for &i in removed {
            match raw.beams[i].label {
                BeamLabel::Clutter => removed_clutter += 1,
                BeamLabel::Genuine => self.false_positives += 1,
                BeamLabel::Dropped => {}
            }
        }
        self.true_positives += removed_clutter;
        self.false_negatives += raw.count_label(BeamLabel::Clutter) - removed_clutter;
    }

    /// `None` when nothing was removed.
    pub fn precision(&self) -> Option<f64> {
        let d = self.true_positives + self.false_positives;
        (d > 0).then(|| self.true_positives as f64 / d as f64)
    }

    /// `None` when there was no clutter.
    pub fn recall(&self) -> Option<f64> {
        let d = self.true_positives + self.false_negatives;
        (d > 0).then(|| self.true_positives as f64 / d as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub gt: OccupancyGrid,
    pub pgt: OccupancyGrid,
    pub frames: Vec<FrameRecord>,
    pub report: KpiReport,
    pub filter_stats: FilterStats,
}

/// Runs a scenario. Deterministic in the scenario, seed included.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioRun> {
    scenario.validate()?;
    let gt = rasterize_world(&scenario.world, scenario.grid_resolution)?;
    let poses = sample_trajectory(&scenario.trajectory, scenario.sensor.cycle_time)?;
    let model = WeatherModel::default();
    let mut acc = Accumulator::new(*gt.frame(), InverseSensorModel::default(), scenario.sensor.max_range)?;
    let mut frames = Vec::with_capacity(poses.len());
    let mut stats = FilterStats::default();

    for (k, (timestamp, pose)) in poses.into_iter().enumerate() {
        let key = StreamKey::new(scenario.seed, k as u64);
        let clean = scan(&gt, &pose, &scenario.sensor, key, timestamp)?;
        let raw = model.apply(&clean, &scenario.weather, &scenario.sensor, &scenario.world, &pose, scenario.seed);
        let filtered = dror_filter(&raw, &pose, scenario.sensor.angular_resolution, &scenario.filter)?;
        stats.record(&raw, &filtered.removed);
        acc.integrate(&pose, &filtered.kept)?;
        frames.push(FrameRecord {
            seq_id: k as u64,
            timestamp,
            pose,
            raw_cloud: raw,
            filtered_cloud: filtered.kept,
            removed_indices: filtered.removed,
        });
    }

    let pgt = acc.into_grid();
    let report = evaluate(&pgt, &gt, &scenario.thresholds)?;
    Ok(ScenarioRun { gt, pgt, frames, report, filter_stats: stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::geometry::Point2D;
    use crate::metrics::KpiThresholds;
    use crate::pgt::FilterParams;
    use crate::sensor::lookup_sensor;
    use crate::weather::{WeatherCondition, WeatherKind, Wavelength};
    use crate::world::{Obstacle, Trajectory, WorldModel};
    use alloc::string::String;
    use alloc::vec;

    fn room() -> WorldModel {
        let w = 0.3;
        let walls = [
            ((0.0, 0.0), (10.0, w)),
            ((0.0, 10.0 - w), (10.0, 10.0)),
            ((0.0, 0.0), (w, 10.0)),
            ((10.0 - w, 0.0), (10.0, 10.0)),
            ((4.0, 4.0), (6.0, 6.0)),
        ];
        let obstacles = walls.iter().map(|(a, b)| Obstacle::new(Point2D::new(a.0, a.1), Point2D::new(b.0, b.1), 0.8)).collect();
        WorldModel::new(10.0, 10.0, obstacles, false).unwrap()
    }

    fn scenario() -> Scenario {
        let mut sensor = lookup_sensor("Ouster OS-2").unwrap();
        sensor.fov_horizontal = core::f64::consts::TAU;
        sensor.range_accuracy_sigma = 0.0;
        let waypoints = vec![Point2D::new(2.0, 2.0), Point2D::new(8.0, 2.0), Point2D::new(8.0, 8.0)];
        Scenario {
            name: String::from("small-room"),
            world: room(),
            trajectory: Trajectory::new(waypoints, 10.0).unwrap(),
            sensor,
            weather: WeatherCondition::clear(),
            grid_resolution: 0.1,
            seed: 5,
            filter: FilterParams::disabled(),
            thresholds: KpiThresholds::default(),
        }
    }

    #[test]
    fn clean_room_is_valid() {
        let run = run_scenario(&scenario()).unwrap();
        assert!(run.report.valid, "{:?}", run.report);
        assert_eq!(run.filter_stats, FilterStats::default());
        for (i, f) in run.frames.iter().enumerate() {
            assert_eq!(f.seq_id, i as u64);
            assert_eq!(f.raw_cloud, f.filtered_cloud);
        }
    }

    #[test]
    fn clean_pipeline_classifies_observed_cells() {
        let run = run_scenario(&scenario()).unwrap();
        let hit_cells: alloc::collections::BTreeSet<usize> = run
            .frames
            .iter()
            .flat_map(|f| {
                let pose = f.pose;
                let gt = &run.gt;
                f.filtered_cloud.returns().filter_map(move |(_, b)| {
                    let r = b.range.unwrap();
                    let (s, c) = (b.azimuth.sin(), b.azimuth.cos());
                    let p = pose.transform(Point2D::new(r * c, r * s));
                    gt.frame().world_to_cell(p).and_then(|cell| gt.frame().index(cell))
                })
            })
            .collect();
        for (i, (l, g)) in run.pgt.cells().iter().zip(run.gt.cells()).enumerate() {
            if *l == 0.0 {
                continue;
            }
            if *g > 0.0 && hit_cells.contains(&i) {
                assert!(*l > 0.0, "occupied cell {i} has L={l}");
            }
            if *g < 0.0 {
                assert!(*l < 0.0, "free cell {i} has L={l}");
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let mut s = scenario();
        s.weather = WeatherCondition::new(WeatherKind::Snow { rate: 3.0 }, Wavelength::Nm905);
        s.filter = FilterParams::default();
        s.sensor.range_accuracy_sigma = 0.03;
        let a = run_scenario(&s).unwrap();
        let b = run_scenario(&s).unwrap();
        assert_eq!(a, b);
        assert!(a.filter_stats.true_positives + a.filter_stats.false_negatives > 0);
        s.seed += 1;
        assert_ne!(run_scenario(&s).unwrap().pgt, a.pgt);
    }

    #[test]
    fn filter_stats_match_labels() {
        let mut s = scenario();
        s.weather = WeatherCondition::new(WeatherKind::Snow { rate: 3.0 }, Wavelength::Nm905);
        s.filter = FilterParams::default();
        let run = run_scenario(&s).unwrap();
        let clutter: usize = run.frames.iter().map(|f| f.raw_cloud.count_label(BeamLabel::Clutter)).sum();
        let st = run.filter_stats;
        assert_eq!(st.true_positives + st.false_negatives, clutter);
        let genuine_removed: usize = run
            .frames
            .iter()
            .map(|f| f.removed_indices.iter().filter(|i| f.raw_cloud.beams[**i].label == BeamLabel::Genuine).count())
            .sum();
        assert_eq!(st.false_positives, genuine_removed);
    }

    #[test]
    fn pose_leaving_grid_names_frame() {
        let mut s = scenario();
        s.trajectory = Trajectory::new(vec![Point2D::new(2.0, 2.0), Point2D::new(12.0, 2.0)], 10.0).unwrap();
        match run_scenario(&s) {
            Err(Error::PoseOutOfBounds { frame_id, .. }) => assert_eq!(frame_id, 16),
            other => panic!("expected pose error, got {other:?}"),
        }
    }
}
