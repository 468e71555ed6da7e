//! Planar points and rigid poses.

use core::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = a - two_pi * libm::floor((a + PI) / two_pi);
    if r >= PI {
        r -= two_pi;
    }
    if r < -PI {
        r += two_pi;
    }
    r
}

/// Sensor or vehicle pose in the world frame. Heading is kept in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose2D {
    x: f64,
    y: f64,
    heading: f64,
}

impl Pose2D {
    /// Builds a pose, wrapping `heading` into `[-π, π)`.
    ///
    /// Non-finite components are accepted here; use [`Pose2D::try_new`] at
    /// input boundaries.
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self { x, y, heading: normalize_angle(heading) }
    }

    pub fn try_new(x: f64, y: f64, heading: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::invalid("pose", "position must be finite"));
        }
        if !heading.is_finite() {
            return Err(Error::invalid("pose", "heading must be finite"));
        }
        Ok(Self::new(x, y, heading))
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn heading(&self) -> f64 {
        self.heading
    }

    pub fn position(&self) -> Point2D {
        Point2D::new(self.x, self.y)
    }

    /// Maps a point from the pose's local frame into the parent frame:
    /// rotate by the heading, then translate.
    pub fn transform(&self, local: Point2D) -> Point2D {
        let (s, c) = libm::sincos(self.heading);
        Point2D::new(self.x + c * local.x - s * local.y, self.y + s * local.x + c * local.y)
    }

    pub fn inverse(&self) -> Pose2D {
        let (s, c) = libm::sincos(self.heading);
        Pose2D::new(-(c * self.x + s * self.y), s * self.x - c * self.y, -self.heading)
    }
}

/// Free-function form of [`Pose2D::transform`].
pub fn pose_transform(pose: &Pose2D, local: Point2D) -> Point2D {
    pose.transform(local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // 3x3 homogeneous matrix product, written out independently of `transform`.
    fn matrix_oracle(x: f64, y: f64, h: f64, p: Point2D) -> Point2D {
        let m = [
            [h.cos(), -h.sin(), x],
            [h.sin(), h.cos(), y],
            [0.0, 0.0, 1.0],
        ];
        let v = [p.x, p.y, 1.0];
        let mut out = [0.0; 3];
        for (i, row) in m.iter().enumerate() {
            out[i] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        Point2D::new(out[0] / out[2], out[1] / out[2])
    }

    #[test]
    fn identity_pose() {
        let p = Pose2D::new(0.0, 0.0, 0.0).transform(Point2D::new(3.0, 4.0));
        assert_eq!(p, Point2D::new(3.0, 4.0));
    }

    #[test]
    fn quarter_turn() {
        let p = Pose2D::new(1.0, 2.0, PI / 2.0).transform(Point2D::new(1.0, 0.0));
        assert!((p.x - 1.0).abs() < 1e-12);
        assert!((p.y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn heading_wraps_half_open() {
        assert_eq!(Pose2D::new(0.0, 0.0, PI).heading(), -PI);
        assert_eq!(Pose2D::new(0.0, 0.0, -PI).heading(), -PI);
        assert!((Pose2D::new(0.0, 0.0, 3.0 * PI / 2.0).heading() + PI / 2.0).abs() < 1e-12);
        assert!(Pose2D::try_new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn matches_matrix_oracle_on_random_pairs() {
        use crate::rng::{rng_stream, Stage};
        let mut rng = rng_stream(7, 0, 0, Stage::Test);
        for _ in 0..1000 {
            let x = rng.uniform_range(-100.0, 100.0);
            let y = rng.uniform_range(-100.0, 100.0);
            let h = rng.uniform_range(-PI, PI);
            let p = Point2D::new(rng.uniform_range(-50.0, 50.0), rng.uniform_range(-50.0, 50.0));
            let got = Pose2D::new(x, y, h).transform(p);
            let want = matrix_oracle(x, y, h, p);
            assert!((got.x - want.x).abs() < 1e-9 && (got.y - want.y).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn inverse_round_trips(x in -1e3..1e3f64, y in -1e3..1e3f64, h in -10.0..10.0f64,
                               px in -1e3..1e3f64, py in -1e3..1e3f64) {
            let pose = Pose2D::new(x, y, h);
            let p = Point2D::new(px, py);
            let back = pose.inverse().transform(pose.transform(p));
            prop_assert!((back.x - p.x).abs() < 1e-9);
            prop_assert!((back.y - p.y).abs() < 1e-9);
        }

        #[test]
        fn normalized_heading_in_range(h in -1e4..1e4f64) {
            let n = normalize_angle(h);
            prop_assert!((-PI..PI).contains(&n));
            let turns = (h - n) / (2.0 * PI);
            prop_assert!((turns - turns.round()).abs() < 1e-9);
        }
    }
}
