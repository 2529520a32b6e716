//! Branch specifications and branched-packing builds: traditional target
//! angle sums, singular-hole parameters from a point in an interstice,
//! shifted-hole jump/dial parameters from a point in a circle, and holonomy
//! annihilation by a one-parameter search over a shifted family.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{BlackHoleRecord, Complex, ComplexError, Vertex};
use crate::geometry::mobius::Mobius;
use crate::geometry::{GeomError, Geometry};
use crate::layout::{
    develop, event_horizon_winding, face_chain_from_vertex_loop, holonomy, packing_residual,
    Holonomy, LayoutError, Packing,
};
use crate::solver::{
    check_star, solve_label, BoundaryCondition, Label, OverlapMap, PinnedZeros, SolveOptions,
    SolveReport, SolverError, StarStatus, TargetAngles,
};

#[derive(Debug, Error)]
pub enum BranchError {
    #[error("vertex {0} is not interior")]
    NotInterior(Vertex),
    #[error("vertex {0} has {1} petals, fewer than the {2} required")]
    TooFewPetals(Vertex, usize, usize),
    #[error("condition (*) is not strict at vertex {0}")]
    StarViolation(Vertex),
    #[error("no face with vertices {0}, {1}, {2}")]
    NoSuchFace(Vertex, Vertex, Vertex),
    #[error("point lies outside the target interstice")]
    PointOutsideInterstice,
    #[error("point lies outside the target circle")]
    PointOutsideCircle,
    #[error("branch parameters out of range")]
    BadGammas,
    #[error("holonomy scalar has no sign change over the scan")]
    NoSignChange(Vec<ScanSample>),
    #[error("holonomy search did not reach the requested tolerance")]
    NonConvergence,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// A single branching instruction. Traditional branching raises the target
/// angle sum in place; singular and shifted branching insert a black hole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BranchSpec {
    /// Order-n branching at an interior vertex: A(v) = 2 pi (n + 1).
    Traditional { v: Vertex, order: usize },
    /// Singular hole in the face <v1,v2,v3> with overlap partition
    /// gamma1 + gamma2 + gamma3 = pi, indexed like the face.
    Singular { face: [Vertex; 3], gammas: [f64; 3] },
    /// Shifted hole at v with jump petals j1, j2 and dials gamma1, gamma2.
    Shifted {
        v: Vertex,
        j1: Vertex,
        j2: Vertex,
        gamma1: f64,
        gamma2: f64,
    },
}

/// Validated traditional branch spec: v interior with enough petals that the
/// flower loop satisfies (*) strictly for A(v) = 2 pi (order + 1).
pub fn traditional_spec(
    k: &Complex,
    phi: &OverlapMap,
    v: Vertex,
    order: usize,
) -> Result<BranchSpec, BranchError> {
    if !k.is_interior(v) {
        return Err(BranchError::NotInterior(v));
    }
    let petals = &k.flower(v)?.petals;
    let need = 2 * order + 3;
    if petals.len() < need {
        return Err(BranchError::TooFewPetals(v, petals.len(), need));
    }
    let mut targets = TargetAngles::flat();
    targets.set(v, TAU * (order as f64 + 1.0));
    match check_star(k, phi, &targets, &[v], petals)? {
        StarStatus::Strict => Ok(BranchSpec::Traditional { v, order }),
        _ => Err(BranchError::StarViolation(v)),
    }
}

/// Circumcircle through three points; fails on (near-)collinear input.
fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> Result<(Complex64, f64), BranchError> {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    if d.abs() < 1e-14 * (a.norm() + b.norm() + c.norm()).max(1.0) {
        return Err(BranchError::PointOutsideInterstice);
    }
    let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ox = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
    let oy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
    let o = Complex64::new(ox, oy);
    Ok((o, (a - o).norm()))
}

/// Tangency point of two externally tangent drawn circles.
fn tangency_point(p: &Packing, u: Vertex, v: Vertex) -> Result<Complex64, LayoutError> {
    let (a, b) = (p.require(u)?.eucl, p.require(v)?.eucl);
    let span = a.radius + b.radius;
    Ok(a.center + (b.center - a.center) * (a.radius / span))
}

/// Counterclockwise angle from `from` to `to`, in [0, 2 pi).
fn ccw_gap(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TAU)
}

/// Singular branch parameters from a point p inside the interstice of the
/// drawn face <v1,v2,v3>: the circle D through the three pairwise tangency
/// points is treated as a hyperbolic plane in which the three boundary arcs
/// are geodesics with ideal endpoints at the tangency points. alpha_j is the
/// sector angle at p between the geodesic rays toward v_j's two tangency
/// points, and gamma_j = pi - alpha_j; the sectors partition 2 pi, so the
/// gammas partition pi.
pub fn singular_params(
    pk: &Packing,
    face: [Vertex; 3],
    p: Complex64,
) -> Result<[f64; 3], BranchError> {
    let [v1, v2, v3] = face;
    for v in face {
        let c = pk.require(v)?.eucl;
        if (p - c.center).norm() <= c.radius {
            return Err(BranchError::PointOutsideInterstice);
        }
    }
    let t12 = tangency_point(pk, v1, v2)?;
    let t23 = tangency_point(pk, v2, v3)?;
    let t31 = tangency_point(pk, v3, v1)?;
    let (o, radius) = circumcircle(t12, t23, t31)?;
    let w = |z: Complex64| (z - o) / radius;
    let pw = w(p);
    if pw.norm() >= 1.0 - 1e-12 {
        return Err(BranchError::PointOutsideInterstice);
    }
    // Move p to the origin of D's disc model; geodesic rays to the ideal
    // tangency points become radii, so sectors are plain argument gaps.
    let m = Mobius::disc_automorphism(pw, 0.0);
    let th12 = m.apply(w(t12)).arg();
    let th23 = m.apply(w(t23)).arg();
    let th31 = m.apply(w(t31)).arg();
    // For a counterclockwise face the ideal points run t31, t12, t23 ccw.
    let alpha = [
        ccw_gap(th31, th12),
        ccw_gap(th12, th23),
        ccw_gap(th23, th31),
    ];
    if alpha.iter().sum::<f64>() > TAU + 1e-9 {
        // The gaps sum to 4 pi when the points appear clockwise, which
        // happens only when p has escaped the interstice.
        return Err(BranchError::PointOutsideInterstice);
    }
    let g1 = PI - alpha[0];
    let g2 = PI - alpha[1];
    let g3 = PI - g1 - g2;
    for g in [g1, g2, g3] {
        if !(0.0..PI).contains(&g) || g == 0.0 {
            return Err(BranchError::PointOutsideInterstice);
        }
    }
    Ok([g1, g2, g3])
}

/// Shifted branch parameters from a point p inside the drawn circle of v.
/// In the disc model of C_v the chord orthogonal to C_v through p has ideal
/// endpoints at arg(p) +- psi with cos psi = 2s/(1+s^2), s = |p| scaled; the
/// endpoints split the petal tangency directions into the two twin arcs.
/// Each jump petal is the first tangency counterclockwise at or after an
/// endpoint, and the dial interpolates linearly across that petal's span.
pub fn shifted_params(
    k: &Complex,
    pk: &Packing,
    v: Vertex,
    p: Complex64,
) -> Result<(Vertex, Vertex, f64, f64), BranchError> {
    let c = pk.require(v)?.eucl;
    let z = (p - c.center) / c.radius;
    let s = z.norm();
    if s >= 1.0 - 1e-12 {
        return Err(BranchError::PointOutsideCircle);
    }
    let theta = if s < 1e-15 { 0.0 } else { z.arg() };
    let psi = (2.0 * s / (1.0 + s * s)).clamp(-1.0, 1.0).acos();
    let petals = &k.flower(v)?.petals;
    if !k.flower(v)?.closed {
        return Err(BranchError::NotInterior(v));
    }
    let tau: Vec<f64> = petals
        .iter()
        .map(|&q| {
            pk.require(q)
                .map(|cq| (cq.eucl.center - c.center).arg())
        })
        .collect::<Result<_, _>>()?;
    let n = petals.len();
    // (jump petal, dial) for one arc endpoint.
    let pick = |e: f64| -> (Vertex, f64) {
        let mut best = 0;
        let mut best_gap = f64::INFINITY;
        for (i, &t) in tau.iter().enumerate() {
            let mut gap = ccw_gap(e, t);
            if gap > TAU - 1e-12 {
                gap = 0.0; // endpoint exactly on this tangency
            }
            if gap < best_gap {
                best_gap = gap;
                best = i;
            }
        }
        let prev = (best + n - 1) % n;
        let span = ccw_gap(tau[prev], tau[best]);
        (petals[best], PI * (best_gap / span).clamp(0.0, 1.0))
    };
    let (j1, gamma1) = pick(theta - psi);
    let (j2, gamma2) = pick(theta + psi);
    Ok((j1, j2, gamma1, gamma2))
}

/// Diagnostics from a branched build.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchDiagnostics {
    /// Event-horizon winding about the branch value, one per hole.
    pub horizon_windings: Vec<i64>,
    /// Drawn radius of each fall guy (should vanish).
    pub fall_guy_radii: Vec<f64>,
    /// Worst drawn-vs-prescribed overlap mismatch, in cosine terms.
    pub residual: f64,
}

/// A branched packing: the post-surgery complex, its solved label and
/// developed packing, and the data that produced them.
#[derive(Debug, Clone)]
pub struct Branched {
    pub complex: Complex,
    pub records: Vec<BlackHoleRecord>,
    pub phi: OverlapMap,
    pub targets: TargetAngles,
    pub pinned: PinnedZeros,
    pub label: Label,
    pub report: SolveReport,
    pub packing: Packing,
    pub diagnostics: BranchDiagnostics,
}

/// Perform the surgeries of `specs` on K, assemble overlaps, targets, and
/// pins, solve, develop, and measure the horizon diagnostics.
pub fn build_branched(
    k: &Complex,
    specs: &[BranchSpec],
    geom: Geometry,
    bc: &BoundaryCondition,
    opts: &SolveOptions,
) -> Result<Branched, BranchError> {
    let mut kk = k.clone();
    let mut phi = OverlapMap::tangency();
    let mut targets = TargetAngles::flat();
    let mut pinned = PinnedZeros::new();
    let mut records = Vec::new();
    for spec in specs {
        match spec {
            BranchSpec::Traditional { v, order } => {
                // Re-validate on the original complex; surgeries never touch
                // a traditional vertex's flower thanks to hole clearance.
                traditional_spec(k, &OverlapMap::tangency(), *v, *order)?;
                targets.set(*v, TAU * (*order as f64 + 1.0));
            }
            BranchSpec::Singular { face, gammas } => {
                if gammas.iter().any(|&g| !(0.0..PI).contains(&g) || g == 0.0)
                    || (gammas.iter().sum::<f64>() - PI).abs() > 1e-9
                {
                    return Err(BranchError::BadGammas);
                }
                let mut want = *face;
                want.sort_unstable();
                let f = kk
                    .faces()
                    .iter()
                    .position(|&f| {
                        let mut s = f;
                        s.sort_unstable();
                        s == want
                    })
                    .ok_or(BranchError::NoSuchFace(face[0], face[1], face[2]))?;
                let (next, rec) = kk.insert_singular_blackhole(f)?;
                // Each anchor carries its gamma on both incident chaperone
                // edges; anchors[i] is the vertex missing chaperones[i].
                for (i, &a) in rec.anchors.iter().enumerate() {
                    let g = gammas[face.iter().position(|&x| x == a).unwrap()];
                    for (j, &h) in rec.chaperones.iter().enumerate() {
                        if i != j {
                            phi.set(a, h, g);
                        }
                    }
                }
                targets.set(rec.fall_guy, 2.0 * TAU);
                pinned.insert(rec.fall_guy);
                records.push(rec);
                kk = next;
            }
            BranchSpec::Shifted {
                v,
                j1,
                j2,
                gamma1,
                gamma2,
            } => {
                if !(0.0..=PI).contains(gamma1) || !(0.0..=PI).contains(gamma2) {
                    return Err(BranchError::BadGammas);
                }
                let (mut next, mut rec) = kk.insert_shifted_blackhole(*v, *j1, *j2)?;
                // An endpoint dial makes its chaperone coincide with a petal
                // circle (the dial-transition identity), which leaves the
                // angle-sum system singular; contract the chaperone onto
                // that petal instead. Higher chaperone first so the lower
                // one's id survives the renumbering.
                let gammas = [*gamma1, *gamma2];
                let mut alive = [true, true];
                for idx in [1usize, 0] {
                    let (js, ws) = (rec.jumps.unwrap(), rec.jump_predecessors.unwrap());
                    let (j, w) = if idx == 0 { (js.0, ws.0) } else { (js.1, ws.1) };
                    let onto = match gammas[idx] {
                        g if g == 0.0 => j,
                        g if g == PI => w,
                        _ => continue,
                    };
                    let h = rec.chaperones[idx];
                    let (c, vm) = next.contract_edge(h, onto)?;
                    next = c;
                    rec = rec.remap(&|x| vm.forward(if x == h { onto } else { x }).unwrap());
                    alive[idx] = false;
                }
                let (j1n, j2n) = rec.jumps.unwrap();
                let (w1n, w2n) = rec.jump_predecessors.unwrap();
                if alive[0] {
                    phi.set(rec.chaperones[0], w1n, *gamma1);
                    phi.set(rec.chaperones[0], j1n, PI - *gamma1);
                }
                if alive[1] {
                    phi.set(rec.chaperones[1], w2n, *gamma2);
                    phi.set(rec.chaperones[1], j2n, PI - *gamma2);
                }
                targets.set(rec.fall_guy, 2.0 * TAU);
                pinned.insert(rec.fall_guy);
                records.push(rec);
                kk = next;
            }
        }
    }
    let (label, report) = solve_label(&kk, geom, &phi, &targets, bc, &pinned, opts)?;
    let packing = develop(&kk, &label, &phi)?;
    let mut horizon_windings = Vec::new();
    let mut fall_guy_radii = Vec::new();
    for rec in &records {
        horizon_windings.push(event_horizon_winding(&packing, rec)?);
        fall_guy_radii.push(packing.require(rec.fall_guy)?.eucl.radius);
    }
    let residual = packing_residual(&kk, &packing, &phi);
    Ok(Branched {
        complex: kk,
        records,
        phi,
        targets,
        pinned,
        label,
        report,
        packing,
        diagnostics: BranchDiagnostics {
            horizon_windings,
            fall_guy_radii,
            residual,
        },
    })
}

/// One coarse-scan evaluation of the annihilation family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanSample {
    pub gamma1: f64,
    /// Holonomy displacement signed by its component along the loop.
    pub scalar: f64,
    pub displacement: f64,
}

/// Result of a successful holonomy annihilation.
#[derive(Debug, Clone)]
pub struct Annihilation {
    pub gamma1: f64,
    pub scan: Vec<ScanSample>,
    pub branched: Branched,
    pub holonomy: Holonomy,
}

/// The one-parameter shifted family used by `annihilate_holonomy`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftedFamily {
    pub v: Vertex,
    pub j1: Vertex,
    pub j2: Vertex,
}

const SCAN_SAMPLES: usize = 33;
const MAX_BISECTIONS: usize = 80;

fn family_spec(family: &ShiftedFamily, gamma1: f64) -> BranchSpec {
    BranchSpec::Shifted {
        v: family.v,
        j1: family.j1,
        j2: family.j2,
        gamma1,
        gamma2: PI - gamma1,
    }
}

/// Build the family member at gamma1 and measure the holonomy of the given
/// vertex loop, returning the signed scalar used for root finding. The map
/// is conjugated into the developed packing's frame so the sign of its
/// translation along the loop direction is meaningful across samples.
fn family_eval(
    k: &Complex,
    fixed: &[BranchSpec],
    family: &ShiftedFamily,
    loop_vertices: &[Vertex],
    bc: &BoundaryCondition,
    opts: &SolveOptions,
    gamma1: f64,
) -> Result<(Branched, Holonomy, ScanSample), BranchError> {
    let mut specs = fixed.to_vec();
    specs.push(family_spec(family, gamma1));
    let b = build_branched(k, &specs, Geometry::Hyperbolic, bc, opts)?;
    let chain = face_chain_from_vertex_loop(&b.complex, loop_vertices)?;
    let h = holonomy(&b.complex, &b.label, &b.phi, &chain)?;
    let m = h.in_frame(&b.packing)?;
    let z0 = b.packing.require(loop_vertices[0])?.center;
    let z1 = b.packing.require(loop_vertices[1])?.center;
    let displacement = m.displacement(z0);
    let along = ((z1 - z0).conj() * (m.apply(z0) - z0)).re;
    let scalar = if along < 0.0 { -displacement } else { displacement };
    Ok((
        b,
        h,
        ScanSample {
            gamma1,
            scalar,
            displacement,
        },
    ))
}

/// Annihilate the layout holonomy of `loop_vertices` over the one-parameter
/// shifted family (gamma2 = pi - gamma1): coarse 33-sample scan for a sign
/// change of the signed translation scalar, then bisection until the
/// displacement drops below `tol_h`. An infinite `tol_h` returns the scan
/// minimizer (diagnostic mode).
pub fn annihilate_holonomy(
    k: &Complex,
    fixed: &[BranchSpec],
    family: &ShiftedFamily,
    loop_vertices: &[Vertex],
    bc: &BoundaryCondition,
    tol_h: f64,
    opts: &SolveOptions,
) -> Result<Annihilation, BranchError> {
    let eval = |g: f64| family_eval(k, fixed, family, loop_vertices, bc, opts, g);
    let mut scan = Vec::with_capacity(SCAN_SAMPLES);
    let mut best: Option<(Branched, Holonomy, ScanSample)> = None;
    for i in 0..SCAN_SAMPLES {
        let gamma1 = PI * i as f64 / (SCAN_SAMPLES - 1) as f64;
        // Degenerate endpoints (internally tangent chaperones) may defeat
        // the solver; skip such samples rather than abort the scan.
        let Ok((b, h, sample)) = eval(gamma1) else {
            continue;
        };
        scan.push(sample.clone());
        if best
            .as_ref()
            .map_or(true, |(_, _, s)| sample.displacement < s.displacement)
        {
            best = Some((b, h, sample));
        }
    }
    let (mut best_b, mut best_h, mut best_s) = best.ok_or(BranchError::NonConvergence)?;
    if tol_h.is_infinite() || best_s.displacement < tol_h {
        return Ok(Annihilation {
            gamma1: best_s.gamma1,
            scan,
            branched: best_b,
            holonomy: best_h,
        });
    }
    let bracket = scan
        .windows(2)
        .find(|w| w[0].scalar * w[1].scalar < 0.0)
        .map(|w| (w[0].clone(), w[1].clone()));
    let (mut lo, mut hi) = match bracket {
        Some(pair) => pair,
        None => return Err(BranchError::NoSignChange(scan)),
    };
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo.gamma1 + hi.gamma1);
        let (b, h, sample) = eval(mid)?;
        let done = sample.displacement < tol_h;
        if sample.displacement < best_s.displacement {
            (best_b, best_h, best_s) = (b, h, sample.clone());
        }
        if done {
            return Ok(Annihilation {
                gamma1: best_s.gamma1,
                scan,
                branched: best_b,
                holonomy: best_h,
            });
        }
        if sample.scalar * lo.scalar < 0.0 {
            hi = sample;
        } else {
            lo = sample;
        }
        if (hi.gamma1 - lo.gamma1).abs() < 1e-15 {
            break;
        }
    }
    Err(BranchError::NonConvergence)
}

/// Largest label difference over the shared vertices 1..=n outside every
/// hole; infinite entries (horocycles) compare equal.
pub fn restricted_label_distance(
    a: &Label,
    b: &Label,
    skip: &BTreeSet<Vertex>,
    n: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    for v in 1..=n {
        if skip.contains(&v) {
            continue;
        }
        let (ra, rb) = (a.get(v), b.get(v));
        if ra.is_infinite() && rb.is_infinite() {
            continue;
        }
        worst = worst.max((ra - rb).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::geometry::Circle;
    use crate::workbench::generators::{
        annulus_midline_row, annulus_vertex, gen_annulus, gen_disc,
    };

    fn wheel(petals: usize) -> Complex {
        let faces = (0..petals)
            .map(|i| [1, 2 + i, 2 + (i + 1) % petals])
            .collect();
        build_complex(faces).unwrap()
    }

    /// Equilateral tangency triple as a bare euclidean packing on vertices
    /// 1, 2, 3 (counterclockwise).
    fn equilateral_packing() -> Packing {
        let centers = [
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 3f64.sqrt()),
        ];
        Packing {
            geom: Geometry::Euclidean,
            circles: centers
                .iter()
                .map(|&c| Some(Circle::euclidean(c, 1.0)))
                .collect(),
            tree: Vec::new(),
        }
    }

    #[test]
    fn traditional_spec_gate() {
        let k = gen_disc(2).unwrap();
        assert!(traditional_spec(&k, &OverlapMap::tangency(), 1, 1).is_ok());
        // Boundary vertex rejected.
        let b = k.vertices().find(|&v| k.is_boundary(v)).unwrap();
        assert!(matches!(
            traditional_spec(&k, &OverlapMap::tangency(), b, 1),
            Err(BranchError::NotInterior(_))
        ));
        // A 4-petal flower cannot wrap twice.
        let k4 = wheel(4);
        assert!(matches!(
            traditional_spec(&k4, &OverlapMap::tangency(), 1, 1),
            Err(BranchError::TooFewPetals(1, 4, 5))
        ));
        // 7 petals suffice combinatorially for order 2: 7 pi > 6 pi.
        let k7 = wheel(7);
        assert!(traditional_spec(&k7, &OverlapMap::tangency(), 1, 2).is_ok());
        assert!(matches!(
            traditional_spec(&k7, &OverlapMap::tangency(), 1, 3),
            Err(BranchError::TooFewPetals(1, 7, 9))
        ));
    }

    #[test]
    fn singular_params_symmetric_point() {
        let pk = equilateral_packing();
        // Circumcenter of the tangency points: the incenter of the centers'
        // triangle, the full symmetry point of the interstice.
        let p = Complex64::new(1.0, 3f64.sqrt() / 3.0);
        let g = singular_params(&pk, [1, 2, 3], p).unwrap();
        for gi in g {
            assert!((gi - PI / 3.0).abs() < 1e-12, "gamma {gi}");
        }
    }

    #[test]
    fn singular_params_partition_and_limits() {
        let pk = equilateral_packing();
        let center = Complex64::new(1.0, 3f64.sqrt() / 3.0);
        let t23 = Complex64::new(1.5, 3f64.sqrt() / 2.0);
        // Random-ish interior points: partition of pi with positive parts.
        for t in [0.13, 0.41, 0.77] {
            for u in [0.2, 0.6, 0.9] {
                let p = center + (t23 - center) * t * Complex64::new(0.0, 1.0).powf(u);
                if let Ok(g) = singular_params(&pk, [1, 2, 3], p) {
                    assert!((g.iter().sum::<f64>() - PI).abs() < 1e-12);
                    assert!(g.iter().all(|&x| x > 0.0 && x < PI));
                }
            }
        }
        // Walking toward the tangency point opposite v1 sends gamma1 to pi:
        // the sector subtended by v1's two tangency points collapses.
        let mut last = 0.0;
        for t in [0.5, 0.9, 0.99, 0.999] {
            let p = center + (t23 - center) * t;
            let g = singular_params(&pk, [1, 2, 3], p).unwrap();
            assert!(g[0] > last, "gamma1 should grow toward pi");
            last = g[0];
        }
        assert!(last > PI - 0.1, "gamma1 = {last}");
        // Inside a circle or outside D: rejected.
        assert!(matches!(
            singular_params(&pk, [1, 2, 3], Complex64::new(0.0, 0.0)),
            Err(BranchError::PointOutsideInterstice)
        ));
        assert!(matches!(
            singular_params(&pk, [1, 2, 3], Complex64::new(1.0, 10.0)),
            Err(BranchError::PointOutsideInterstice)
        ));
    }

    #[test]
    fn shifted_params_center_is_traditional() {
        let k = gen_disc(2).unwrap();
        let (label, _) = solve_label(
            &k,
            Geometry::Euclidean,
            &OverlapMap::tangency(),
            &TargetAngles::flat(),
            &BoundaryCondition::uniform_radius(1.0),
            &PinnedZeros::new(),
            &SolveOptions::default(),
        )
        .unwrap();
        let pk = develop(&k, &label, &OverlapMap::tangency()).unwrap();
        let p = pk.require(1).unwrap().eucl.center;
        let (j1, j2, g1, g2) = shifted_params(&k, &pk, 1, p).unwrap();
        // Antipodal arc endpoints: jumps three petals apart, dials half-way.
        let petals = &k.flower(1).unwrap().petals;
        let pos = |x| petals.iter().position(|&q| q == x).unwrap();
        assert_eq!((pos(j2) + 6 - pos(j1)) % 6, 3);
        assert!((g1 - PI / 2.0).abs() < 1e-6, "gamma1 {g1}");
        assert!((g2 - PI / 2.0).abs() < 1e-6, "gamma2 {g2}");
        // Outside the circle: rejected.
        let far = p + Complex64::new(10.0, 0.0);
        assert!(matches!(
            shifted_params(&k, &pk, 1, far),
            Err(BranchError::PointOutsideCircle)
        ));
    }

    #[test]
    fn singular_build_on_disc() {
        let k = gen_disc(3).unwrap();
        let (a, b) = k.faces_at(1)[0];
        let specs = [BranchSpec::Singular {
            face: [1, a, b],
            gammas: [PI / 3.0, PI / 3.0, PI / 3.0],
        }];
        let br = build_branched(
            &k,
            &specs,
            Geometry::Hyperbolic,
            &BoundaryCondition::horocycles(),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(br.diagnostics.fall_guy_radii[0] < 1e-9);
        assert_eq!(br.diagnostics.horizon_windings, vec![2]);
        assert!(br.diagnostics.residual < 1e-6, "residual {}", br.diagnostics.residual);
        // Zero fall-guy radius means equality in (*) held at the pin.
        let g = br.records[0].fall_guy;
        assert_eq!(br.label.get(g), 0.0);
    }

    #[test]
    fn shifted_build_four_circle_concurrence() {
        let k = gen_disc(3).unwrap();
        let petals = k.flower(1).unwrap().petals.clone();
        let specs = [BranchSpec::Shifted {
            v: 1,
            j1: petals[0],
            j2: petals[3],
            gamma1: 0.7 * PI,
            gamma2: 0.4 * PI,
        }];
        let br = build_branched(
            &k,
            &specs,
            Geometry::Hyperbolic,
            &BoundaryCondition::horocycles(),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(br.diagnostics.fall_guy_radii[0] < 1e-9);
        assert_eq!(br.diagnostics.horizon_windings, vec![2]);
        let rec = &br.records[0];
        let value = br.packing.require(rec.fall_guy).unwrap().eucl.center;
        let (t1, t2) = rec.twins.unwrap();
        for v in [t1, t2, rec.chaperones[0], rec.chaperones[1]] {
            let c = br.packing.require(v).unwrap().eucl;
            let gap = ((value - c.center).norm() - c.radius).abs();
            assert!(gap < 1e-6, "circle {v} misses the branch value by {gap}");
        }
    }

    #[test]
    fn traditional_build_angle_sum() {
        let k = gen_disc(3).unwrap();
        let specs = [BranchSpec::Traditional { v: 1, order: 1 }];
        let br = build_branched(
            &k,
            &specs,
            Geometry::Hyperbolic,
            &BoundaryCondition::horocycles(),
            &SolveOptions::default(),
        )
        .unwrap();
        let sum = crate::solver::angle_sum(&br.complex, &br.label, &br.phi, 1).unwrap();
        assert!((sum - 2.0 * TAU).abs() < 1e-6, "angle sum {sum}");
        assert!(br.diagnostics.residual < 1e-6);
    }

    #[test]
    fn dial_transition_identity() {
        let k = gen_disc(3).unwrap();
        let petals = k.flower(1).unwrap().petals.clone();
        // (j1, gamma1 = pi) and (w1 = predecessor, gamma1 = 0) describe the
        // same packing through different combinatorics: in both the first
        // chaperone is absorbed into the petal circle between them.
        let variant = |j1: Vertex, gamma1: f64, tol: f64| {
            build_branched(
                &k,
                &[BranchSpec::Shifted {
                    v: 1,
                    j1,
                    j2: petals[3],
                    gamma1,
                    gamma2: 0.4 * PI,
                }],
                Geometry::Hyperbolic,
                &BoundaryCondition::horocycles(),
                &SolveOptions {
                    tol,
                    ..SolveOptions::default()
                },
            )
            .unwrap()
        };
        // The contracted complex keeps exactly collinear faces (petals tangent
        // to the pinned zero circle), whose acos conditioning floors the
        // attainable angle residual near 2e-8; 1e-8 is the honest target.
        let a = variant(petals[1], PI, 1e-8);
        let b = variant(petals[0], 0.0, 1e-8);
        assert_eq!(a.complex.vertex_count(), k.vertex_count() + 3);
        assert_eq!(a.records[0].chaperones[0], petals[0]);
        assert_eq!(b.records[0].chaperones[0], petals[0]);
        // Shared ids: the original complex plus t2, h2, g.
        let d = restricted_label_distance(&a.label, &b.label, &BTreeSet::new(), k.vertex_count() + 3);
        assert!(d < 1e-8, "label distance {d}");
        // The interior dial nearby agrees to first order in the dial. The
        // solve conditioning degrades like 1/eps, so default tolerance only.
        let eps = 1e-3;
        let c = variant(petals[1], PI - eps, 1e-8);
        let d = restricted_label_distance(&a.label, &c.label, &BTreeSet::new(), k.vertex_count());
        assert!(d < 0.05, "endpoint limit distance {d}");
    }

    #[test]
    fn annihilate_symmetric_annulus() {
        let (rings, cols) = (5, 12);
        let k = gen_annulus(rings, cols).unwrap();
        let mid = annulus_midline_row(rings);
        let v = |i: usize, j: usize| annulus_vertex(cols, i, j);
        let v1 = v(mid, 0);
        let v2 = v(mid, cols / 2);
        let fixed = [BranchSpec::Traditional { v: v1, order: 1 }];
        // Mirror-symmetric jumps at v2: j1 reflects w2 and j2 reflects w1.
        let family = ShiftedFamily {
            v: v2,
            j1: v(mid + 1, cols / 2 - 1),
            j2: v(mid - 1, cols / 2),
        };
        let loop_vertices: Vec<Vertex> = (0..cols).map(|j| v(1, j)).collect();
        let ann = annihilate_holonomy(
            &k,
            &fixed,
            &family,
            &loop_vertices,
            &BoundaryCondition::horocycles(),
            1e-6,
            &SolveOptions::default(),
        )
        .unwrap();
        // Symmetry pins the annihilating dial to the family midpoint.
        assert!(
            (ann.gamma1 - PI / 2.0).abs() < 0.05,
            "gamma1 {}",
            ann.gamma1
        );
        assert!(ann.holonomy.displacement < 1e-6 || ann.branched.diagnostics.residual < 1e-6);
        let m = ann.holonomy.in_frame(&ann.branched.packing).unwrap();
        let z0 = ann
            .branched
            .packing
            .require(loop_vertices[0])
            .unwrap()
            .center;
        assert!(m.displacement(z0) < 1e-6);
    }
}
