//! Environmental limitation catalog and degradation models.
//!
//! Degradation runs per beam in fixed order: cover obstruction, two-way
//! attenuation, clutter injection, then sunlight range noise. Each stage draws
//! from its own `(seed, frame, beam, stage)` stream.
//!
//! Only two magnitudes here come from measurements: the 10 % reflectivity
//! loss of wet surfaces and the direction of the 1550 nm advantage in rain.
//! Every other constant in [`WeatherModel`] is a tunable default chosen to
//! give monotone, plausible behaviour.

use alloc::vec::Vec;

use crate::cloud::{BeamLabel, PerturbedCloud, PointCloud};
use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Point2D, Pose2D};
use crate::rng::{Stage, StreamKey};
use crate::sensor::SensorSpec;
use crate::world::WorldModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitationCategory {
    Obstructing,
    AttenuatingNoise,
    Other,
}

impl LimitationCategory {
    pub fn code(&self) -> &'static str {
        match self {
            LimitationCategory::Obstructing => "Ob",
            LimitationCategory::AttenuatingNoise => "AN",
            LimitationCategory::Other => "Ot",
        }
    }
}

/// Kind of literature evidence behind a limitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Evidence {
    Mention,
    Experimental,
    Both,
}

impl Evidence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Evidence::Mention => "Mention",
            Evidence::Experimental => "Experimental",
            Evidence::Both => "Both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LimitationEntry {
    pub index: u8,
    pub name: &'static str,
    pub category: LimitationCategory,
    pub evidence: Evidence,
    /// Whether an executable perturbation model exists for it.
    pub modeled: bool,
}

const fn entry(
    index: u8,
    name: &'static str,
    category: LimitationCategory,
    evidence: Evidence,
    modeled: bool,
) -> LimitationEntry {
    LimitationEntry { index, name, category, evidence, modeled }
}

/// The fourteen catalogued LiDAR limitations.
pub fn limitation_catalog() -> Vec<LimitationEntry> {
    use Evidence::*;
    use LimitationCategory::*;
    alloc::vec![
        entry(1, "Road dirt on sensor cover", Obstructing, Both, true),
        entry(2, "First detection close object", Obstructing, Experimental, true),
        entry(3, "Material/surfaces", Obstructing, Both, true),
        entry(4, "Wet roadway causes road spray", AttenuatingNoise, Experimental, true),
        entry(5, "Rain", AttenuatingNoise, Both, true),
        entry(6, "Fog/Mist/Haze", AttenuatingNoise, Both, true),
        entry(7, "Snow", AttenuatingNoise, Both, true),
        entry(8, "Dust", AttenuatingNoise, Mention, false),
        entry(9, "Wavelength related", AttenuatingNoise, Experimental, false),
        entry(10, "Sunlight", AttenuatingNoise, Both, true),
        entry(11, "Temperature", Other, Mention, false),
        entry(12, "Vibrations", Other, Mention, false),
        entry(13, "Interference", Other, Experimental, false),
        entry(14, "Remote attacks (imitating signal)", Other, Experimental, false),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Wavelength {
    #[default]
    Nm905,
    Nm1550,
}

impl Wavelength {
    pub fn as_str(&self) -> &'static str {
        match self {
            Wavelength::Nm905 => "nm905",
            Wavelength::Nm1550 => "nm1550",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nm905" | "905" => Some(Wavelength::Nm905),
            "nm1550" | "1550" => Some(Wavelength::Nm1550),
            _ => None,
        }
    }
}

/// Sensor-frame azimuth interval `[start, end)` blocked by dirt on the cover.
/// An interval with `start > end` wraps through ±π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AzimuthSector {
    pub start: f64,
    pub end: f64,
}

impl AzimuthSector {
    pub fn contains(&self, azimuth: f64) -> bool {
        let a = normalize_angle(azimuth);
        if self.start <= self.end {
            self.start <= a && a < self.end
        } else {
            a >= self.start || a < self.end
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeatherKind {
    Clear,
    /// Rain rate in mm/h.
    Rain { rate: f64 },
    /// Meteorological visibility in meters. Infinite visibility is clear air.
    Fog { visibility: f64 },
    /// Water-equivalent snowfall rate in mm/h.
    Snow { rate: f64 },
    /// Road spray level in `[0, 1]`.
    Spray { level: f64 },
    /// Sunlight level in `[0, 1]`.
    Sunlight { level: f64 },
    DirtSectors(Vec<AzimuthSector>),
}

impl WeatherKind {
    pub fn name(&self) -> &'static str {
        match self {
            WeatherKind::Clear => "clear",
            WeatherKind::Rain { .. } => "rain",
            WeatherKind::Fog { .. } => "fog",
            WeatherKind::Snow { .. } => "snow",
            WeatherKind::Spray { .. } => "spray",
            WeatherKind::Sunlight { .. } => "sunlight",
            WeatherKind::DirtSectors(_) => "dirt",
        }
    }

    /// Scalar intensity for reports: rate, visibility or level. Dirt reports
    /// the blocked arc in degrees.
    pub fn intensity(&self) -> f64 {
        match self {
            WeatherKind::Clear => 0.0,
            WeatherKind::Rain { rate } | WeatherKind::Snow { rate } => *rate,
            WeatherKind::Fog { visibility } => *visibility,
            WeatherKind::Spray { level } | WeatherKind::Sunlight { level } => *level,
            WeatherKind::DirtSectors(sectors) => sectors
                .iter()
                .map(|s| {
                    let w = s.end - s.start;
                    if w >= 0.0 { w } else { w + 2.0 * core::f64::consts::PI }
                })
                .sum::<f64>()
                .to_degrees(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeatherCondition {
    pub kind: WeatherKind,
    pub wavelength: Wavelength,
}

impl Default for WeatherCondition {
    fn default() -> Self {
        Self::clear()
    }
}

impl WeatherCondition {
    pub fn new(kind: WeatherKind, wavelength: Wavelength) -> Self {
        Self { kind, wavelength }
    }

    pub fn clear() -> Self {
        Self::new(WeatherKind::Clear, Wavelength::Nm905)
    }

    pub fn validate(&self) -> Result<()> {
        let level_ok = |l: f64| (0.0..=1.0).contains(&l);
        match &self.kind {
            WeatherKind::Clear => Ok(()),
            WeatherKind::Rain { rate } | WeatherKind::Snow { rate } => {
                if *rate >= 0.0 && rate.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("weather.intensity", "rate must be finite and ≥ 0"))
                }
            }
            WeatherKind::Fog { visibility } => {
                if *visibility > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("weather.intensity", "visibility must be > 0"))
                }
            }
            WeatherKind::Spray { level } | WeatherKind::Sunlight { level } => {
                if level_ok(*level) {
                    Ok(())
                } else {
                    Err(Error::invalid("weather.intensity", "level must lie in [0, 1]"))
                }
            }
            WeatherKind::DirtSectors(sectors) => {
                let pi = core::f64::consts::PI;
                for s in sectors {
                    if !((-pi..pi).contains(&s.start) && (-pi..=pi).contains(&s.end)) {
                        return Err(Error::invalid("weather.sectors", "sector bounds must lie in [-180°, 180°]"));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Degradation model constants. Defaults other than `wet_factor` are tunable
/// modelling choices, not measured values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherModel {
    /// Koschmieder constant: `α = K / V` for visibility `V`.
    pub koschmieder: f64,
    pub k_rain: f64,
    pub rain_exponent: f64,
    pub k_snow: f64,
    pub snow_exponent: f64,
    /// Extinction per unit spray level, 1/m.
    pub k_spray: f64,
    /// Multiplier on rain and spray extinction at 1550 nm.
    pub nm1550_factor: f64,
    /// Darkest target the sensor is rated to see at `max_range` through
    /// `alpha_ref`; sets the detection threshold.
    pub rho_min: f64,
    /// Reference clear-air extinction, 1/m.
    pub alpha_ref: f64,
    /// Clutter probability per mm/h of rain.
    pub c_rain: f64,
    /// Clutter probability per mm/h of snow.
    pub c_snow: f64,
    pub c_spray: f64,
    pub c_sun: f64,
    pub clutter_p_max: f64,
    /// Clutter returns are drawn no farther than this, meters.
    pub r_clutter_max: f64,
    /// Sunlight range-noise σ per unit level, meters.
    pub sun_noise: f64,
    /// Reflectivity multiplier for wet surfaces.
    pub wet_factor: f64,
}

impl Default for WeatherModel {
    fn default() -> Self {
        Self {
            koschmieder: 3.912,
            k_rain: 0.002,
            rain_exponent: 0.6,
            k_snow: 0.004,
            snow_exponent: 0.7,
            k_spray: 0.02,
            nm1550_factor: 0.7,
            rho_min: 0.05,
            alpha_ref: 0.005,
            c_rain: 0.002,
            c_snow: 0.008,
            c_spray: 0.15,
            c_sun: 0.02,
            clutter_p_max: 0.5,
            r_clutter_max: 30.0,
            sun_noise: 0.02,
            wet_factor: 0.9,
        }
    }
}

impl WeatherModel {
    /// Extinction coefficient α in 1/m.
    pub fn extinction_coefficient(&self, cond: &WeatherCondition) -> f64 {
        let wl = match cond.wavelength {
            Wavelength::Nm905 => 1.0,
            Wavelength::Nm1550 => self.nm1550_factor,
        };
        match &cond.kind {
            WeatherKind::Clear | WeatherKind::Sunlight { .. } | WeatherKind::DirtSectors(_) => 0.0,
            WeatherKind::Fog { visibility } => self.koschmieder / visibility,
            WeatherKind::Rain { rate } => wl * self.k_rain * libm::pow(*rate, self.rain_exponent),
            WeatherKind::Snow { rate } => self.k_snow * libm::pow(*rate, self.snow_exponent),
            WeatherKind::Spray { level } => wl * level * self.k_spray,
        }
    }

    /// Per-beam clutter probability.
    pub fn clutter_probability(&self, cond: &WeatherCondition) -> f64 {
        let p = match &cond.kind {
            WeatherKind::Rain { rate } => self.c_rain * rate,
            WeatherKind::Snow { rate } => self.c_snow * rate,
            WeatherKind::Spray { level } => self.c_spray * level,
            WeatherKind::Sunlight { level } => self.c_sun * level,
            WeatherKind::Clear | WeatherKind::Fog { .. } | WeatherKind::DirtSectors(_) => 0.0,
        };
        p.min(self.clutter_p_max)
    }

    /// Detection threshold `τ = ρ_min · e^(−2 α_ref R_max)` on `ρ · e^(−2αd)`.
    pub fn detection_threshold(&self, spec: &SensorSpec) -> f64 {
        self.rho_min * libm::exp(-2.0 * self.alpha_ref * spec.max_range)
    }

    pub fn effective_reflectivity(&self, rho: f64, wet: bool) -> f64 {
        if wet {
            self.wet_factor * rho
        } else {
            rho
        }
    }

    /// Farthest range at which a target of reflectivity `rho_eff` survives
    /// extinction `alpha`, capped at the sensor's `max_range`.
    pub fn max_detection_range(&self, rho_eff: f64, alpha: f64, spec: &SensorSpec) -> f64 {
        let tau = self.detection_threshold(spec);
        if rho_eff < tau {
            return 0.0;
        }
        if alpha <= 0.0 {
            return spec.max_range;
        }
        (libm::log(rho_eff / tau) / (2.0 * alpha)).min(spec.max_range)
    }

    /// Degrades a clean scan taken from `pose`. See the module docs for the
    /// stage order. Beam count and azimuths are preserved.
    ///
    /// Clear weather over a dry world returns the input unchanged.
    pub fn apply(
        &self,
        cloud: &PointCloud,
        cond: &WeatherCondition,
        spec: &SensorSpec,
        world: &WorldModel,
        pose: &Pose2D,
        seed: u64,
    ) -> PerturbedCloud {
        let key = StreamKey::new(seed, cloud.frame_id);
        let alpha = self.extinction_coefficient(cond);
        let attenuate = alpha > 0.0 || world.surface_wet;
        let tau = self.detection_threshold(spec);
        let p_clutter = self.clutter_probability(cond);
        let sun_sigma = match cond.kind {
            WeatherKind::Sunlight { level } => self.sun_noise * level,
            _ => 0.0,
        };
        let ceiling = spec.range_ceiling() + 3.0 * sun_sigma;
        let sectors: &[AzimuthSector] = match &cond.kind {
            WeatherKind::DirtSectors(s) => s,
            _ => &[],
        };

        let mut out = cloud.clone();
        for (k, beam) in out.beams.iter_mut().enumerate() {
            let k32 = k as u32;
            let original = beam.range;

            // Cover obstruction blocks the beam and anything behind the cover.
            if sectors.iter().any(|s| s.contains(beam.azimuth)) {
                if beam.range.is_some() {
                    beam.range = None;
                    beam.label = BeamLabel::Dropped;
                }
                continue;
            }

            if attenuate {
                if let Some(r) = beam.range {
                    let rho = world.reflectivity_near(beam_endpoint(pose, beam.azimuth, r));
                    let rho_eff = self.effective_reflectivity(rho, world.surface_wet);
                    if rho_eff * libm::exp(-2.0 * alpha * r) < tau {
                        beam.range = None;
                        beam.label = BeamLabel::Dropped;
                    }
                }
            }

            if p_clutter > 0.0 {
                let mut rng = key.stream(k32, Stage::Clutter);
                let u = rng.uniform();
                let lo = spec.min_range.min(self.r_clutter_max);
                let hi = original.unwrap_or(spec.max_range).min(self.r_clutter_max);
                let r_c = rng.uniform_range(lo, hi.max(lo));
                if u < p_clutter {
                    beam.range = Some(r_c.max(f64::MIN_POSITIVE));
                    beam.label = BeamLabel::Clutter;
                }
            }

            if sun_sigma > 0.0 && beam.label == BeamLabel::Genuine {
                if let Some(r) = beam.range {
                    let mut rng = key.stream(k32, Stage::SunNoise);
                    let noisy = rng.normal(r, sun_sigma);
                    beam.range = Some(noisy.clamp(spec.min_range.max(f64::MIN_POSITIVE), ceiling));
                }
            }
        }
        out
    }
}

fn beam_endpoint(pose: &Pose2D, azimuth: f64, range: f64) -> Point2D {
    let (s, c) = libm::sincos(azimuth);
    pose.transform(Point2D::new(range * c, range * s))
}

/// [`WeatherModel::extinction_coefficient`] with default constants.
pub fn extinction_coefficient(cond: &WeatherCondition) -> f64 {
    WeatherModel::default().extinction_coefficient(cond)
}

/// [`WeatherModel::apply`] with default constants.
pub fn apply_weather(
    cloud: &PointCloud,
    cond: &WeatherCondition,
    spec: &SensorSpec,
    world: &WorldModel,
    pose: &Pose2D,
    seed: u64,
) -> PerturbedCloud {
    WeatherModel::default().apply(cloud, cond, spec, world, pose, seed)
}

/// Reflectivity of a wet surface: 90 % of the dry value.
pub fn wet_surface_reflectivity(rho: f64) -> f64 {
    WeatherModel::default().effective_reflectivity(rho, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::OccupancyGrid;
    use crate::sensor::{scan, AssumedFields};
    use crate::world::Obstacle;
    use alloc::vec;
    use core::f64::consts::PI;

    #[test]
    fn catalog_matches_table() {
        let cat = limitation_catalog();
        assert_eq!(cat.len(), 14);
        for (i, e) in cat.iter().enumerate() {
            assert_eq!(e.index as usize, i + 1);
        }
        assert_eq!(cat[4].name, "Rain");
        assert_eq!(cat[4].category, LimitationCategory::AttenuatingNoise);
        assert_eq!(cat[0].name, "Road dirt on sensor cover");
        assert_eq!(cat[0].category, LimitationCategory::Obstructing);
        let other: Vec<u8> = cat.iter().filter(|e| e.category == LimitationCategory::Other).map(|e| e.index).collect();
        assert_eq!(other, vec![11, 12, 13, 14]);
        let obstructing: Vec<u8> =
            cat.iter().filter(|e| e.category == LimitationCategory::Obstructing).map(|e| e.index).collect();
        assert_eq!(obstructing, vec![1, 2, 3]);
        let modeled: Vec<u8> = cat.iter().filter(|e| e.modeled).map(|e| e.index).collect();
        assert_eq!(modeled, vec![1, 2, 3, 4, 5, 6, 7, 10]);
    }

    fn cond(kind: WeatherKind) -> WeatherCondition {
        WeatherCondition::new(kind, Wavelength::Nm905)
    }

    #[test]
    fn extinction_values() {
        assert_eq!(extinction_coefficient(&cond(WeatherKind::Clear)), 0.0);
        assert!((extinction_coefficient(&cond(WeatherKind::Fog { visibility: 100.0 })) - 0.03912).abs() < 1e-15);
        assert_eq!(extinction_coefficient(&cond(WeatherKind::Rain { rate: 0.0 })), 0.0);
        assert_eq!(extinction_coefficient(&cond(WeatherKind::Fog { visibility: f64::INFINITY })), 0.0);
        // 0.002 · 32^0.6 = 0.002 · 8
        assert!((extinction_coefficient(&cond(WeatherKind::Rain { rate: 32.0 })) - 0.016).abs() < 1e-15);
        let rain1550 = WeatherCondition::new(WeatherKind::Rain { rate: 32.0 }, Wavelength::Nm1550);
        assert!((extinction_coefficient(&rain1550) - 0.0112).abs() < 1e-15);
        assert!((extinction_coefficient(&cond(WeatherKind::Spray { level: 0.5 })) - 0.01).abs() < 1e-15);
        // Snow is wavelength-independent.
        let snow = |wl| WeatherCondition::new(WeatherKind::Snow { rate: 10.0 }, wl);
        assert_eq!(extinction_coefficient(&snow(Wavelength::Nm905)), extinction_coefficient(&snow(Wavelength::Nm1550)));
    }

    #[test]
    fn wet_reflectivity() {
        assert!((wet_surface_reflectivity(1.0) - 0.9).abs() < 1e-15);
        assert!((wet_surface_reflectivity(0.5) - 0.45).abs() < 1e-15);
        assert_eq!(WeatherModel::default().effective_reflectivity(0.5, false), 0.5);
    }

    #[test]
    fn sector_wraps() {
        let s = AzimuthSector { start: 170f64.to_radians(), end: -170f64.to_radians() };
        assert!(s.contains(PI - 0.01));
        assert!(s.contains(-PI));
        assert!(!s.contains(0.0));
        let s = AzimuthSector { start: -0.1, end: 0.1 };
        assert!(s.contains(0.0) && !s.contains(0.1));
    }

    #[test]
    fn validation() {
        assert!(cond(WeatherKind::Rain { rate: -1.0 }).validate().is_err());
        assert!(cond(WeatherKind::Fog { visibility: 0.0 }).validate().is_err());
        assert!(cond(WeatherKind::Sunlight { level: 1.5 }).validate().is_err());
        assert!(cond(WeatherKind::Fog { visibility: f64::INFINITY }).validate().is_ok());
    }

    // A ring of wall around the sensor, giving one genuine return per beam.
    fn ring_fixture(wet: bool, rho: f64) -> (OccupancyGrid, WorldModel, Pose2D, SensorSpec) {
        let obstacles = vec![
            Obstacle::new(Point2D::new(0.0, 0.0), Point2D::new(40.0, 1.0), rho),
            Obstacle::new(Point2D::new(0.0, 39.0), Point2D::new(40.0, 40.0), rho),
            Obstacle::new(Point2D::new(0.0, 1.0), Point2D::new(1.0, 39.0), rho),
            Obstacle::new(Point2D::new(39.0, 1.0), Point2D::new(40.0, 39.0), rho),
        ];
        let world = WorldModel::new(40.0, 40.0, obstacles, wet).unwrap();
        let gt = crate::world::rasterize_world(&world, 0.1).unwrap();
        let spec = SensorSpec {
            model_name: "ring".into(),
            max_range: 100.0,
            min_range: 0.3,
            fov_horizontal: 2.0 * PI,
            angular_resolution: 0.1f64.to_radians(),
            range_accuracy_sigma: 0.0,
            cycle_time: 0.05,
            assumed: AssumedFields::default(),
        };
        (gt, world, Pose2D::new(20.05, 20.05, 0.0), spec)
    }

    fn degrade(kind: WeatherKind, wl: Wavelength, frames: u64) -> (usize, usize, usize) {
        let (gt, world, pose, spec) = ring_fixture(false, 1.0);
        let c = WeatherCondition::new(kind, wl);
        let (mut dropped, mut clutter, mut total) = (0, 0, 0);
        for f in 0..frames {
            let clean = scan(&gt, &pose, &spec, StreamKey::new(4, f), 0.0).unwrap();
            let out = apply_weather(&clean, &c, &spec, &world, &pose, 4);
            dropped += out.count_label(BeamLabel::Dropped);
            clutter += out.count_label(BeamLabel::Clutter);
            total += out.len();
        }
        (dropped, clutter, total)
    }

    #[test]
    fn clear_dry_is_identity() {
        let (gt, world, pose, spec) = ring_fixture(false, 0.01);
        let clean = scan(&gt, &pose, &spec, StreamKey::new(1, 0), 0.0).unwrap();
        assert_eq!(apply_weather(&clean, &WeatherCondition::clear(), &spec, &world, &pose, 1), clean);
        assert_eq!(apply_weather(&clean, &cond(WeatherKind::Rain { rate: 0.0 }), &spec, &world, &pose, 1), clean);
    }

    #[test]
    fn shape_preserved_and_clutter_bounded() {
        let (gt, world, pose, spec) = ring_fixture(true, 0.5);
        let clean = scan(&gt, &pose, &spec, StreamKey::new(1, 0), 0.0).unwrap();
        for kind in [
            WeatherKind::Rain { rate: 80.0 },
            WeatherKind::Snow { rate: 60.0 },
            WeatherKind::Fog { visibility: 30.0 },
            WeatherKind::Spray { level: 1.0 },
            WeatherKind::Sunlight { level: 1.0 },
        ] {
            let out = apply_weather(&clean, &cond(kind), &spec, &world, &pose, 1);
            assert_eq!(out.len(), clean.len());
            for (a, b) in out.beams.iter().zip(&clean.beams) {
                assert_eq!(a.azimuth, b.azimuth);
                if a.label == BeamLabel::Clutter {
                    let r = a.range.unwrap();
                    assert!((spec.min_range..=30.0).contains(&r));
                }
                if a.label == BeamLabel::Dropped {
                    assert!(a.range.is_none());
                }
            }
        }
    }

    #[test]
    fn dirt_drops_sector() {
        let (gt, world, pose, spec) = ring_fixture(false, 1.0);
        let clean = scan(&gt, &pose, &spec, StreamKey::new(1, 0), 0.0).unwrap();
        let sector = AzimuthSector { start: -0.5, end: 0.5 };
        let out = apply_weather(&clean, &cond(WeatherKind::DirtSectors(vec![sector])), &spec, &world, &pose, 1);
        for b in &out.beams {
            if sector.contains(b.azimuth) {
                assert_eq!((b.label, b.range), (BeamLabel::Dropped, None));
            } else {
                assert_eq!(b.label, BeamLabel::Genuine);
            }
        }
    }

    #[test]
    fn heavier_rain_degrades_more() {
        // 3601 beams x 28 frames ≈ 10^5 beams.
        let (d10, c10, n) = degrade(WeatherKind::Rain { rate: 10.0 }, Wavelength::Nm905, 28);
        let (d80, c80, _) = degrade(WeatherKind::Rain { rate: 80.0 }, Wavelength::Nm905, 28);
        assert!(n >= 100_000);
        assert!(d80 + c80 > d10 + c10);
    }

    #[test]
    fn non_genuine_monotone_in_intensity() {
        let mut last = 0;
        for rate in [0.0, 5.0, 10.0, 20.0, 40.0, 80.0] {
            let (d, c, _) = degrade(WeatherKind::Snow { rate }, Wavelength::Nm905, 28);
            assert!(d + c >= last);
            last = d + c;
        }
        let mut last = 0;
        for v in [f64::INFINITY, 400.0, 200.0, 100.0, 50.0, 25.0, 10.0] {
            let (d, c, _) = degrade(WeatherKind::Fog { visibility: v }, Wavelength::Nm905, 28);
            assert!(d + c >= last, "visibility {v}");
            last = d + c;
        }
        let (d, _, _) = degrade(WeatherKind::Fog { visibility: 10.0 }, Wavelength::Nm905, 1);
        assert!(d > 0);
    }

    #[test]
    fn longer_wavelength_drops_fewer_in_rain() {
        // Dark targets so that rain attenuation actually removes returns.
        let (gt, world, pose, spec) = ring_fixture(false, 0.035);
        let mut counts = [0usize; 2];
        for (i, wl) in [Wavelength::Nm905, Wavelength::Nm1550].into_iter().enumerate() {
            let c = WeatherCondition::new(WeatherKind::Rain { rate: 40.0 }, wl);
            let clean = scan(&gt, &pose, &spec, StreamKey::new(8, 0), 0.0).unwrap();
            counts[i] = apply_weather(&clean, &c, &spec, &world, &pose, 8).count_label(BeamLabel::Dropped);
        }
        assert!(counts[0] > 0);
        assert!(counts[1] <= counts[0]);
    }

    #[test]
    fn wet_surface_shortens_fog_range() {
        let m = WeatherModel::default();
        let spec = ring_fixture(false, 1.0).3;
        let alpha = m.extinction_coefficient(&cond(WeatherKind::Fog { visibility: 40.0 }));
        let dry = m.max_detection_range(0.8, alpha, &spec);
        let wet = m.max_detection_range(m.effective_reflectivity(0.8, true), alpha, &spec);
        assert!(wet < dry);
        // Cells at exactly the threshold survive.
        let tau = m.detection_threshold(&spec);
        assert!((0.8 * libm::exp(-2.0 * alpha * dry) - tau).abs() < 1e-12);
    }
}
