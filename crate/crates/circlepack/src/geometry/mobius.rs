//! Mobius transformations: composition, classification, circle images, and
//! the disc automorphisms used for layout and normalization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hyp_dist, EuclCircle, GeomError};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MobiusClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
}

/// z -> (a z + b) / (c z + d), det != 0, considered modulo scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Mobius {
    pub fn new(a: C, b: C, c: C, d: C) -> Result<Self, GeomError> {
        let m = Mobius { a, b, c, d };
        if m.det().norm() < 1e-300 {
            Err(GeomError::SingularMatrix)
        } else {
            Ok(m)
        }
    }

    pub fn identity() -> Self {
        Mobius {
            a: C::new(1.0, 0.0),
            b: C::new(0.0, 0.0),
            c: C::new(0.0, 0.0),
            d: C::new(1.0, 0.0),
        }
    }

    /// Disc automorphism z -> e^{i theta} (z - z0) / (1 - conj(z0) z).
    pub fn disc_automorphism(z0: C, theta: f64) -> Self {
        let rot = C::from_polar(1.0, theta);
        Mobius {
            a: rot,
            b: -rot * z0,
            c: -z0.conj(),
            d: C::new(1.0, 0.0),
        }
    }

    /// Plane similarity z -> a z + b.
    pub fn similarity(a: C, b: C) -> Self {
        Mobius {
            a,
            b,
            c: C::new(0.0, 0.0),
            d: C::new(1.0, 0.0),
        }
    }

    pub fn det(&self) -> C {
        self.a * self.d - self.b * self.c
    }

    /// Scale so that det = 1.
    pub fn normalized(&self) -> Self {
        let s = self.det().sqrt();
        Mobius {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        }
    }

    /// self after other: (self * other)(z) = self(other(z)).
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Image of a circle; fails if the circle passes through the pole.
    pub fn apply_circle(&self, circle: &EuclCircle) -> Result<EuclCircle, GeomError> {
        if self.c.norm() < 1e-14 {
            let scale = self.a / self.d;
            return Ok(EuclCircle::new(
                scale * circle.center + self.b / self.d,
                scale.norm() * circle.radius,
            ));
        }
        if circle.radius == 0.0 {
            return Ok(EuclCircle::new(self.apply(circle.center), 0.0));
        }
        let pole = -self.d / self.c;
        let off = pole - circle.center;
        if (off.norm() - circle.radius).abs() < 1e-13 {
            return Err(GeomError::CircleThroughPole);
        }
        // Inversion of the pole in the circle maps to the image center.
        let w = circle.center + C::new(circle.radius * circle.radius, 0.0) / off.conj();
        let center = self.apply(w);
        let radius = (self.apply(circle.center + circle.radius) - center).norm();
        Ok(EuclCircle::new(center, radius))
    }

    pub fn trace_sq(&self) -> C {
        let t = self.a + self.d;
        t * t / self.det()
    }

    /// Deviation from the identity of the det-normalized matrix, minimized
    /// over the +-1 scalar ambiguity.
    pub fn identity_deviation(&self) -> f64 {
        let n = self.normalized();
        let one = C::new(1.0, 0.0);
        let frob = |s: f64| {
            ((n.a * s - one).norm_sqr()
                + (n.b * s).norm_sqr()
                + (n.c * s).norm_sqr()
                + (n.d * s - one).norm_sqr())
            .sqrt()
        };
        frob(1.0).min(frob(-1.0))
    }

    pub fn classify(&self, tol: f64) -> MobiusClass {
        if self.identity_deviation() < tol {
            return MobiusClass::Identity;
        }
        let t = self.trace_sq();
        if t.im.abs() > tol {
            return MobiusClass::Loxodromic;
        }
        if (t.re - 4.0).abs() < tol {
            MobiusClass::Parabolic
        } else if t.re < 4.0 && t.re >= -tol {
            MobiusClass::Elliptic
        } else if t.re > 4.0 {
            MobiusClass::Hyperbolic
        } else {
            MobiusClass::Loxodromic
        }
    }

    /// Hyperbolic distance from `base` (in the disc) to its image.
    pub fn displacement(&self, base: C) -> f64 {
        hyp_dist(base, self.apply(base))
    }

    /// Translation length along the axis for a hyperbolic map (0 otherwise).
    pub fn translation_length(&self) -> f64 {
        let t = self.trace_sq().re;
        if t > 4.0 {
            let half = (t.sqrt() / 2.0).acosh();
            2.0 * half
        } else {
            0.0
        }
    }

    /// Disc automorphism sending (z1, z2) to (w1, w2); the pairs must have
    /// equal hyperbolic separation for this to be an exact isometry match.
    pub fn disc_map_from_pairs(z1: C, z2: C, w1: C, w2: C) -> Mobius {
        let frame = |p: C, q: C| {
            let t = Mobius::disc_automorphism(p, 0.0);
            let dir = t.apply(q);
            let theta = dir.im.atan2(dir.re);
            Mobius::disc_automorphism(C::new(0.0, 0.0), -theta).compose(&t)
        };
        frame(w1, w2).inverse().compose(&frame(z1, z2))
    }

    /// Plane similarity sending (z1, z2) to (w1, w2).
    pub fn similarity_from_pairs(z1: C, z2: C, w1: C, w2: C) -> Mobius {
        let a = (w2 - w1) / (z2 - z1);
        Mobius::similarity(a, w1 - a * z1)
    }
}
