//! Edge lengths and face angles from radii and overlap angles, with zero and
//! infinite radii handled through closed-form limits, plus triple realization.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Circle, EuclCircle, GeomError, Geometry};

fn check_radius(r: f64) -> Result<(), GeomError> {
    if r < 0.0 || r.is_nan() {
        Err(GeomError::NegativeRadius(r))
    } else {
        Ok(())
    }
}

fn check_overlap(phi: f64) -> Result<(), GeomError> {
    if !(0.0..=PI + 1e-12).contains(&phi) {
        Err(GeomError::BadOverlap(phi))
    } else {
        Ok(())
    }
}

/// Asymptotic edge factor at the finite end of an edge whose far end is a
/// horocycle: cosh(len) ~ (e^R/2) * (cosh r + cos(phi) sinh r) as R -> inf.
fn horo_factor(r: f64, phi: f64) -> f64 {
    r.cosh() + phi.cos() * r.sinh()
}

/// Distance between circle centers given radii and overlap angle.
///
/// Euclidean: l^2 = r1^2 + r2^2 + 2 r1 r2 cos(phi).
/// Hyperbolic: cosh l = cosh r1 cosh r2 + cos(phi) sinh r1 sinh r2.
pub fn edge_length(geom: Geometry, r1: f64, r2: f64, phi: f64) -> Result<f64, GeomError> {
    check_radius(r1)?;
    check_radius(r2)?;
    check_overlap(phi)?;
    match geom {
        Geometry::Euclidean => {
            if r1.is_infinite() || r2.is_infinite() {
                return Err(GeomError::InfiniteEuclidean);
            }
            Ok((r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * phi.cos()).max(0.0).sqrt())
        }
        Geometry::Hyperbolic => {
            if r1.is_infinite() && r2.is_infinite() {
                return Err(GeomError::BothInfinite);
            }
            if r1.is_infinite() || r2.is_infinite() {
                return Ok(f64::INFINITY);
            }
            let c = r1.cosh() * r2.cosh() + phi.cos() * r1.sinh() * r2.sinh();
            Ok(c.max(1.0).acosh())
        }
    }
}

fn clamp_cos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Angle limit when a side at the measured corner vanishes (deep overlap,
/// internal tangency at equal radii): cos(alpha) blows up with the sign of
/// the remaining side comparison, so the angle snaps to 0 or pi. The limit
/// agrees from both sides, making the angle continuous in the radius. The
/// arguments may be any strictly increasing function of the side lengths.
fn degenerate_side_limit(la: f64, lb: f64, lab: f64) -> Result<f64, GeomError> {
    if la == 0.0 && lb == 0.0 {
        return Err(GeomError::DegenerateTriple);
    }
    let other = if la == 0.0 { lb } else { la };
    Ok(if other >= lab { 0.0 } else { PI })
}

/// Interior angle at the circle of radius `r` in the triangle it forms with
/// neighbors of radii `ra`, `rb`; `phi_a` and `phi_b` are the overlaps on the
/// edges from `r`, `phi_ab` on the opposite edge. Angle is 0 at a horocycle.
pub fn face_angle(
    geom: Geometry,
    r: f64,
    ra: f64,
    rb: f64,
    phi_a: f64,
    phi_b: f64,
    phi_ab: f64,
) -> Result<f64, GeomError> {
    for x in [r, ra, rb] {
        check_radius(x)?;
    }
    for p in [phi_a, phi_b, phi_ab] {
        check_overlap(p)?;
    }
    let deep = phi_a.max(phi_b).max(phi_ab) > PI / 2.0;
    if deep && phi_a + phi_b + phi_ab > PI + 1e-9 {
        return Err(GeomError::ViolatesStarStar);
    }
    let zeros = [r, ra, rb].iter().filter(|&&x| x == 0.0).count();
    if zeros >= 2 {
        return Err(GeomError::DegenerateTriple);
    }
    let infs = [r, ra, rb].iter().filter(|&&x| x.is_infinite()).count();
    if infs >= 2 && !matches!(geom, Geometry::Hyperbolic) {
        return Err(GeomError::InfiniteEuclidean);
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    match geom {
        Geometry::Euclidean => {
            if ra.is_infinite() || rb.is_infinite() {
                return Err(GeomError::InfiniteEuclidean);
            }
            let la = edge_length(geom, r, ra, phi_a)?;
            let lb = edge_length(geom, r, rb, phi_b)?;
            let lab = edge_length(geom, ra, rb, phi_ab)?;
            if la == 0.0 || lb == 0.0 {
                return degenerate_side_limit(la, lb, lab);
            }
            Ok(clamp_cos((la * la + lb * lb - lab * lab) / (2.0 * la * lb)).acos())
        }
        Geometry::Hyperbolic => {
            let cos_alpha = match (ra.is_infinite(), rb.is_infinite()) {
                (false, false) => {
                    // cosh(edge) - 1 without cancellation for small radii:
                    // cosh l = cosh(x - y) + (1 + cos phi) sinh x sinh y.
                    let cm1 = |x: f64, y: f64, phi: f64| {
                        2.0 * (0.5 * (x - y)).sinh().powi(2)
                            + (1.0 + phi.cos()) * x.sinh() * y.sinh()
                    };
                    let ca1 = cm1(r, ra, phi_a);
                    let cb1 = cm1(r, rb, phi_b);
                    let cab1 = cm1(ra, rb, phi_ab);
                    let (sa2, sb2) = (ca1 * (ca1 + 2.0), cb1 * (cb1 + 2.0));
                    if sa2 <= 0.0 || sb2 <= 0.0 {
                        // A vanished edge (internal tangency at equal radii);
                        // cosh(l) - 1 is monotone in l, so it can stand in
                        // for the lengths in the limit comparison.
                        return degenerate_side_limit(ca1, cb1, cab1);
                    }
                    // ca cb - cab with the shared 1's cancelled symbolically.
                    (ca1 + cb1 + ca1 * cb1 - cab1) / (sa2.sqrt() * sb2.sqrt())
                }
                (true, false) => {
                    let ua = horo_factor(r, phi_a);
                    let uab = horo_factor(rb, phi_ab);
                    let cb = r.cosh() * rb.cosh() + phi_b.cos() * r.sinh() * rb.sinh();
                    let sb2 = cb * cb - 1.0;
                    if sb2 <= 0.0 {
                        return Err(GeomError::DegenerateTriple);
                    }
                    (ua * cb - uab) / (ua * sb2.sqrt())
                }
                (false, true) => {
                    let ub = horo_factor(r, phi_b);
                    let uab = horo_factor(ra, phi_ab);
                    let ca = r.cosh() * ra.cosh() + phi_a.cos() * r.sinh() * ra.sinh();
                    let sa2 = ca * ca - 1.0;
                    if sa2 <= 0.0 {
                        return Err(GeomError::DegenerateTriple);
                    }
                    (ub * ca - uab) / (ub * sa2.sqrt())
                }
                (true, true) => {
                    // Limit of the general formula as both neighbor radii
                    // grow: cos(alpha) = 1 - (1 + cos(phi_ab))/(u_a u_b).
                    let ua = horo_factor(r, phi_a);
                    let ub = horo_factor(r, phi_b);
                    1.0 - (1.0 + phi_ab.cos()) / (ua * ub)
                }
            };
            Ok(clamp_cos(cos_alpha).acos())
        }
    }
}

/// Euclidean radius of a horocycle with a given ideal direction that overlaps
/// a circle centered at the disc origin with drawn euclidean radius `rho1` at
/// angle `phi`.
pub fn horocycle_eucl_radius_at_origin(rho1: f64, phi: f64) -> f64 {
    (1.0 - rho1 * rho1) / (2.0 * (1.0 + rho1 * phi.cos()))
}

/// Realize a triple of circles with the given radii and pairwise overlaps,
/// canonically placed: first center at the origin, second on the positive
/// real axis, third in the upper half plane.
///
/// `overlaps = [phi12, phi23, phi31]`. In hyperbolic geometry the third
/// radius may be infinite; the first two must be finite.
pub fn realize_triple(
    geom: Geometry,
    radii: [f64; 3],
    overlaps: [f64; 3],
) -> Result<[Circle; 3], GeomError> {
    let [r1, r2, r3] = radii;
    let [phi12, phi23, phi31] = overlaps;
    for r in radii {
        check_radius(r)?;
    }
    for p in overlaps {
        check_overlap(p)?;
    }
    if phi12 + phi23 + phi31 > PI + 1e-9 {
        return Err(GeomError::LemmaHypothesisViolated);
    }
    if radii.iter().filter(|&&r| r == 0.0).count() >= 2 {
        return Err(GeomError::LemmaHypothesisViolated);
    }
    if r1.is_infinite() || r2.is_infinite() {
        return Err(GeomError::LemmaHypothesisViolated);
    }
    let alpha = face_angle(geom, r1, r2, r3, phi12, phi31, phi23)?;
    let l12 = edge_length(geom, r1, r2, phi12)?;
    let dir3 = Complex64::new(alpha.cos(), alpha.sin());
    match geom {
        Geometry::Euclidean => {
            let l13 = edge_length(geom, r1, r3, phi31)?;
            Ok([
                Circle::euclidean(Complex64::new(0.0, 0.0), r1),
                Circle::euclidean(Complex64::new(l12, 0.0), r2),
                Circle::euclidean(dir3 * l13, r3),
            ])
        }
        Geometry::Hyperbolic => {
            let c1 = Circle::hyperbolic(Complex64::new(0.0, 0.0), r1);
            let c2 = Circle::hyperbolic(Complex64::new((l12 / 2.0).tanh(), 0.0), r2);
            let c3 = if r3.is_infinite() {
                let rho = horocycle_eucl_radius_at_origin((r1 / 2.0).tanh(), phi31);
                Circle::horocycle(dir3, rho)
            } else {
                let l13 = edge_length(geom, r1, r3, phi31)?;
                Circle::hyperbolic(dir3 * (l13 / 2.0).tanh(), r3)
            };
            Ok([c1, c2, c3])
        }
    }
}

/// External overlap angle realized by two drawn circles.
pub fn measured_overlap(c1: &EuclCircle, c2: &EuclCircle) -> f64 {
    let d2 = (c1.center - c2.center).norm_sqr();
    clamp_cos((d2 - c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * c1.radius * c2.radius))
        .acos()
}
