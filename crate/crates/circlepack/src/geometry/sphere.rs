//! Stereographic projection and spherical circles (unit normal + angular
//! radius). Projection is from the north pole onto the plane through the
//! equator, so the unit circle maps to the equator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::EuclCircle;

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn normalize(a: Vec3) -> Vec3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

pub fn neg(a: Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

/// Spherical circle: the boundary of the cap { x : x . center >= cos(radius) }.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCircle {
    pub center: Vec3,
    /// Angular radius in (0, pi).
    pub radius: f64,
}

impl SphericalCircle {
    pub fn distance_to(&self, other: &SphericalCircle) -> f64 {
        dot(self.center, other.center).clamp(-1.0, 1.0).acos()
    }

    /// Residual of external tangency: |dist(centers) - (r1 + r2)|.
    pub fn tangency_residual(&self, other: &SphericalCircle) -> f64 {
        (self.distance_to(other) - (self.radius + other.radius)).abs()
    }

    pub fn antipode(&self) -> Vec3 {
        neg(self.center)
    }
}

/// Image of a plane point on the unit sphere.
pub fn stereographic_point(z: Complex64) -> Vec3 {
    let n = z.norm_sqr();
    [2.0 * z.re / (n + 1.0), 2.0 * z.im / (n + 1.0), (n - 1.0) / (n + 1.0)]
}

/// Image of a plane circle. `interior` selects which cap the result bounds:
/// true takes the image of the circle's bounded interior, false the image of
/// its exterior (the cap containing the north pole).
pub fn stereographic_circle(c: &EuclCircle, interior: bool) -> SphericalCircle {
    let p1 = stereographic_point(c.center + c.radius);
    let p2 = stereographic_point(c.center + Complex64::new(0.0, c.radius));
    let p3 = stereographic_point(c.center - c.radius);
    let u = normalize(cross(
        [p2[0] - p1[0], p2[1] - p1[1], p2[2] - p1[2]],
        [p3[0] - p1[0], p3[1] - p1[1], p3[2] - p1[2]],
    ));
    let h = dot(u, p1);
    // Sample of the interior: the plane center maps into the interior cap.
    let q = stereographic_point(c.center);
    let (n, cos_r) = if dot(u, q) >= h {
        (u, h)
    } else {
        (neg(u), -h)
    };
    let (n, cos_r) = if interior { (n, cos_r) } else { (neg(n), -cos_r) };
    SphericalCircle {
        center: n,
        radius: cos_r.clamp(-1.0, 1.0).acos(),
    }
}
