//! Per-frame beam returns.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Provenance of a beam after degradation, used to score the outlier filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BeamLabel {
    #[default]
    Genuine,
    /// Spurious return injected by precipitation, spray or sunlight.
    Clutter,
    /// A return suppressed by obstruction or attenuation.
    Dropped,
}

impl BeamLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            BeamLabel::Genuine => "genuine",
            BeamLabel::Clutter => "clutter",
            BeamLabel::Dropped => "dropped",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "genuine" => Some(BeamLabel::Genuine),
            "clutter" => Some(BeamLabel::Clutter),
            "dropped" => Some(BeamLabel::Dropped),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamReturn {
    /// Sensor-frame azimuth in radians; 0 points along the sensor heading.
    pub azimuth: f64,
    /// Measured range in meters; `None` is a non-return.
    pub range: Option<f64>,
    pub label: BeamLabel,
}

impl BeamReturn {
    pub fn new(azimuth: f64, range: Option<f64>) -> Self {
        Self { azimuth, range, label: BeamLabel::Genuine }
    }

    pub fn is_return(&self) -> bool {
        self.range.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub frame_id: u64,
    pub timestamp: f64,
    /// Ordered by strictly increasing azimuth.
    pub beams: Vec<BeamReturn>,
}

/// A cloud after weather degradation. Same shape, with labels carrying provenance.
pub type PerturbedCloud = PointCloud;

impl PointCloud {
    pub fn new(frame_id: u64, timestamp: f64, beams: Vec<BeamReturn>) -> Self {
        Self { frame_id, timestamp, beams }
    }

    pub fn len(&self) -> usize {
        self.beams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beams.is_empty()
    }

    pub fn returns(&self) -> impl Iterator<Item = (usize, &BeamReturn)> {
        self.beams.iter().enumerate().filter(|(_, b)| b.is_return())
    }

    pub fn count_label(&self, label: BeamLabel) -> usize {
        self.beams.iter().filter(|b| b.label == label).count()
    }

    /// Checks azimuth ordering and range sanity.
    pub fn validate(&self) -> Result<()> {
        for w in self.beams.windows(2) {
            if !(w[1].azimuth > w[0].azimuth) {
                return Err(Error::invalid("beams", "azimuths must be strictly increasing"));
            }
        }
        for b in &self.beams {
            if !b.azimuth.is_finite() {
                return Err(Error::invalid("azimuth", "must be finite"));
            }
            if let Some(r) = b.range {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::invalid("range", "returned ranges must be positive and finite"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn validate_catches_disorder() {
        let c = PointCloud::new(0, 0.0, vec![BeamReturn::new(0.1, None), BeamReturn::new(0.1, Some(1.0))]);
        assert!(c.validate().is_err());
        let c = PointCloud::new(0, 0.0, vec![BeamReturn::new(0.0, Some(0.0))]);
        assert!(c.validate().is_err());
        let c = PointCloud::new(0, 0.0, vec![BeamReturn::new(-0.1, None), BeamReturn::new(0.1, Some(1.0))]);
        assert!(c.validate().is_ok());
        assert_eq!(c.returns().count(), 1);
    }

    #[test]
    fn labels_round_trip_names() {
        for l in [BeamLabel::Genuine, BeamLabel::Clutter, BeamLabel::Dropped] {
            assert_eq!(BeamLabel::parse(l.as_str()), Some(l));
        }
        assert_eq!(BeamLabel::parse("noise"), None);
    }
}
