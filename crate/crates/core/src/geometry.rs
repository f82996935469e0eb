//! Ground-frame positions, array pose and secondary-user motion.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use crate::error::{domain, Error, Result};

/// A point in metres; right-handed ground frame with z up.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Point3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Direction and range of a point as seen from the array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Look {
    /// Polar angle from boresight, in `[0, π]`.
    pub theta: f64,
    /// Azimuth from the array's local x-axis, in `[-π, π)`.
    pub phi: f64,
    pub r: f64,
}

/// Array position and orientation.
///
/// The local frame has +z along the boresight. Local x is the world x-axis
/// projected onto the array plane (world y when the boresight is along world
/// x), and local y completes a right-handed frame. For the default downward
/// boresight this gives local x = world x and local y = -world y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayPose {
    origin: Point3,
    pointing: Point3,
    boresight: Point3,
    ex: Point3,
    ey: Point3,
}

impl ArrayPose {
    pub fn new(origin: Point3, boresight: Point3) -> Result<Self> {
        if !origin.is_finite() {
            return domain("array origin must be finite");
        }
        let n = boresight.norm();
        if !(n > 0.0) || !n.is_finite() {
            return domain("array boresight must be a nonzero finite vector");
        }
        let ez = boresight * (1.0 / n);
        let world_x = Point3::new(1.0, 0.0, 0.0);
        let mut ex = world_x - ez * world_x.dot(ez);
        if ex.norm() < 1e-9 {
            let world_y = Point3::new(0.0, 1.0, 0.0);
            ex = world_y - ez * world_y.dot(ez);
        }
        let ex = ex * (1.0 / ex.norm());
        let ey = ez.cross(ex);
        Ok(Self { origin, pointing: boresight, boresight: ez, ex, ey })
    }

    /// Array at `origin` looking straight down.
    pub fn downward(origin: Point3) -> Self {
        Self::new(origin, Point3::new(0.0, 0.0, -1.0)).expect("downward pose is valid")
    }

    pub fn origin(&self) -> Point3 {
        self.origin
    }

    /// Unit boresight.
    pub fn boresight(&self) -> Point3 {
        self.boresight
    }

    /// Boresight vector as supplied, before normalization.
    pub fn pointing(&self) -> Point3 {
        self.pointing
    }

    /// Polar angle, azimuth and range of `target`.
    pub fn angles_to(&self, target: Point3) -> Result<Look> {
        if !target.is_finite() {
            return domain("target coordinates must be finite");
        }
        let d = target - self.origin;
        let r = d.norm();
        if r == 0.0 {
            return Err(Error::SingularRange);
        }
        let lx = d.dot(self.ex);
        let ly = d.dot(self.ey);
        let lz = d.dot(self.boresight);
        let rho = lx.hypot(ly);
        let theta = rho.atan2(lz);
        let mut phi = if rho == 0.0 { 0.0 } else { ly.atan2(lx) };
        if phi >= PI {
            phi -= 2.0 * PI;
        }
        Ok(Look { theta, phi: phi + 0.0, r })
    }
}

/// Piecewise-linear path traversed at constant speed.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    waypoints: Vec<Point3>,
    speed: f64,
}

impl Trajectory {
    pub fn new(waypoints: Vec<Point3>, speed: f64) -> Result<Self> {
        if waypoints.is_empty() {
            return domain("trajectory needs at least one waypoint");
        }
        if waypoints.iter().any(|p| !p.is_finite()) {
            return domain("trajectory waypoints must be finite");
        }
        if !(speed >= 0.0) || !speed.is_finite() {
            return domain(format!("trajectory speed must be finite and nonnegative, got {speed}"));
        }
        Ok(Self { waypoints, speed })
    }

    pub fn fixed(p: Point3) -> Self {
        Self { waypoints: vec![p], speed: 0.0 }
    }

    pub fn waypoints(&self) -> &[Point3] {
        &self.waypoints
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn start(&self) -> Point3 {
        self.waypoints[0]
    }

    /// True when the position never changes.
    pub fn is_static(&self) -> bool {
        self.speed == 0.0 || self.waypoints.windows(2).all(|w| w[0] == w[1])
    }

    /// Position after travelling `speed·t` metres along the polyline.
    pub fn position_at(&self, t: f64) -> Result<Point3> {
        if !(t >= 0.0) {
            return domain(format!("time must be nonnegative, got {t}"));
        }
        let mut left = self.speed * t;
        for w in self.waypoints.windows(2) {
            let seg = w[1] - w[0];
            let len = seg.norm();
            if left <= len {
                if len == 0.0 {
                    continue;
                }
                return Ok(w[0] + seg * (left / len));
            }
            left -= len;
        }
        Ok(*self.waypoints.last().expect("nonempty"))
    }
}
