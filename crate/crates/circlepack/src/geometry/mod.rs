//! Metric kernels: circle trigonometry with overlaps in hyperbolic and
//! euclidean geometry, Mobius maps, and stereographic projection.

pub mod mobius;
pub mod sphere;
pub mod trig;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use mobius::{Mobius, MobiusClass};
pub use sphere::{stereographic_point, SphericalCircle};
pub use trig::{edge_length, face_angle, measured_overlap, realize_triple};

/// Centralized tolerances. Algebraic identities, geometric round-trips, and
/// solver residuals get successively looser budgets.
pub mod tol {
    pub const ALGEBRAIC: f64 = 1e-12;
    pub const GEOMETRIC: f64 = 1e-10;
    pub const SOLVER: f64 = 1e-8;
    pub const HOLONOMY: f64 = 1e-6;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Hyperbolic,
    Euclidean,
}

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("both radii infinite on one edge")]
    BothInfinite,
    #[error("infinite radius is not meaningful in euclidean geometry")]
    InfiniteEuclidean,
    #[error("overlap angle {0} outside [0, pi]")]
    BadOverlap(f64),
    #[error("face overlaps sum above pi with a deep overlap present")]
    ViolatesStarStar,
    #[error("degenerate triple (coincident or doubly-zero circles)")]
    DegenerateTriple,
    #[error("triple violates realization hypotheses")]
    LemmaHypothesisViolated,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("circle passes through the pole of the map")]
    CircleThroughPole,
    #[error("point outside the open unit disc")]
    OutsideDisc,
}

/// A concrete circle in the plane (for hyperbolic circles, the euclidean
/// circle drawn in the Poincare disc model).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclCircle {
    pub center: Complex64,
    pub radius: f64,
}

impl EuclCircle {
    pub fn new(center: Complex64, radius: f64) -> Self {
        EuclCircle { center, radius }
    }
}

/// A realized circle: geometry-intrinsic center and radius plus the drawn
/// euclidean representation.
///
/// Hyperbolic finite circles carry their hyperbolic center (a disc point) and
/// hyperbolic radius; horocycles carry the ideal boundary point as `center`
/// and `radius == f64::INFINITY`. Euclidean circles duplicate `eucl`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
    pub eucl: EuclCircle,
}

impl Circle {
    pub fn euclidean(center: Complex64, radius: f64) -> Self {
        Circle {
            center,
            radius,
            eucl: EuclCircle::new(center, radius),
        }
    }

    /// Finite hyperbolic circle from hyperbolic center (in the open disc) and
    /// hyperbolic radius.
    pub fn hyperbolic(center: Complex64, radius: f64) -> Self {
        let eucl = hyp_to_eucl(center, radius);
        Circle {
            center,
            radius,
            eucl,
        }
    }

    /// Horocycle with ideal center `ideal` (unit modulus) and the given
    /// euclidean radius of its drawn circle.
    pub fn horocycle(ideal: Complex64, eucl_radius: f64) -> Self {
        let ideal = ideal / ideal.norm();
        Circle {
            center: ideal,
            radius: f64::INFINITY,
            eucl: EuclCircle::new(ideal * (1.0 - eucl_radius), eucl_radius),
        }
    }

    pub fn is_horocycle(&self) -> bool {
        self.radius.is_infinite()
    }

    /// Rebuild intrinsic center/radius of a hyperbolic circle from its drawn
    /// euclidean representation.
    pub fn from_eucl_hyperbolic(eucl: EuclCircle, horocycle: bool) -> Self {
        if horocycle {
            let n = eucl.center.norm();
            let ideal = if n > 0.0 {
                eucl.center / n * 1.0
            } else {
                Complex64::new(1.0, 0.0)
            };
            Circle {
                center: ideal,
                radius: f64::INFINITY,
                eucl,
            }
        } else {
            let (center, radius) = eucl_to_hyp(eucl);
            Circle {
                center,
                radius,
                eucl,
            }
        }
    }
}

/// Hyperbolic distance between two points of the open unit disc.
pub fn hyp_dist(z1: Complex64, z2: Complex64) -> f64 {
    let num = (z1 - z2).norm();
    let den = (Complex64::new(1.0, 0.0) - z1.conj() * z2).norm();
    2.0 * (num / den).atanh()
}

/// Drawn euclidean circle of a finite hyperbolic circle.
pub fn hyp_to_eucl(center: Complex64, radius: f64) -> EuclCircle {
    let s = center.norm();
    let dir = if s > 0.0 {
        center / s
    } else {
        Complex64::new(1.0, 0.0)
    };
    let dist = 2.0 * s.atanh();
    let near = ((dist - radius) / 2.0).tanh();
    let far = ((dist + radius) / 2.0).tanh();
    EuclCircle::new(dir * ((near + far) / 2.0), (far - near) / 2.0)
}

/// Hyperbolic center and radius of a drawn circle strictly inside the disc.
pub fn eucl_to_hyp(c: EuclCircle) -> (Complex64, f64) {
    let s = c.center.norm();
    let dir = if s > 0.0 {
        c.center / s
    } else {
        Complex64::new(1.0, 0.0)
    };
    let d_far = 2.0 * (s + c.radius).atanh();
    let d_near = 2.0 * (s - c.radius).atanh();
    let center = dir * ((d_far + d_near) / 4.0).tanh();
    (center, (d_far - d_near) / 2.0)
}

/// Hyperbolic midpoint of two disc points.
pub fn hyp_midpoint(z1: Complex64, z2: Complex64) -> Complex64 {
    let t = Mobius::disc_automorphism(z1, 0.0);
    let w = t.apply(z2);
    let d = 2.0 * w.norm().atanh();
    let m = if w.norm() > 0.0 {
        w / w.norm() * (d / 4.0).tanh()
    } else {
        Complex64::new(0.0, 0.0)
    };
    t.inverse().apply(m)
}
