//! Perron-style label solver: per-vertex monotone root finds swept until the
//! angle-sum residual clears tolerance, plus the (*) and (**) validators.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{edge_key, Complex, FaceId, SurfaceType, Vertex};
use crate::geometry::{face_angle, tol, GeomError, Geometry};

/// Near-zero guard: a free label driven below this signals (*) equality at an
/// unpinned vertex.
const NEAR_ZERO: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("no convergence after {sweeps} sweeps (residual {residual:.3e})")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("condition (*) violated or tight at free vertex {0}")]
    StarViolation(Vertex),
    #[error("pinned vertex {0} does not achieve equality in (*)")]
    InconsistentPins(Vertex),
    #[error("condition (**) fails on faces {0:?}")]
    StarStarViolation(Vec<FaceId>),
    #[error("horocycle boundary values require hyperbolic geometry")]
    HorocycleInEuclidean,
    #[error("boundary vertex {0} lacks a boundary value")]
    MissingBoundaryValue(Vertex),
    #[error("surface {0:?} is not supported here")]
    UnsupportedSurface(SurfaceType),
    #[error("loop does not separate the given vertex set from the boundary")]
    LoopNotSeparating,
}

/// Per-edge overlap angles; edges absent from the map are tangencies.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OverlapMap {
    map: HashMap<(Vertex, Vertex), f64>,
}

impl OverlapMap {
    pub fn tangency() -> Self {
        OverlapMap::default()
    }

    pub fn set(&mut self, u: Vertex, v: Vertex, phi: f64) {
        self.map.insert(edge_key(u, v), phi);
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> f64 {
        self.map.get(&edge_key(u, v)).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &f64)> {
        self.map.iter()
    }
}

/// Per-interior-vertex target angle sums; absent vertices default to 2 pi.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TargetAngles {
    map: HashMap<Vertex, f64>,
}

impl TargetAngles {
    pub fn flat() -> Self {
        TargetAngles::default()
    }

    pub fn set(&mut self, v: Vertex, a: f64) {
        self.map.insert(v, a);
    }

    pub fn get(&self, v: Vertex) -> f64 {
        self.map.get(&v).copied().unwrap_or(2.0 * PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryValue {
    Radius(f64),
    Horocycle,
}

/// Prescribed boundary labels: a default plus per-vertex overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryCondition {
    default: Option<BoundaryValue>,
    map: HashMap<Vertex, BoundaryValue>,
}

impl BoundaryCondition {
    pub fn horocycles() -> Self {
        BoundaryCondition {
            default: Some(BoundaryValue::Horocycle),
            map: HashMap::new(),
        }
    }

    pub fn uniform_radius(r: f64) -> Self {
        BoundaryCondition {
            default: Some(BoundaryValue::Radius(r)),
            map: HashMap::new(),
        }
    }

    /// For closed surfaces.
    pub fn none() -> Self {
        BoundaryCondition {
            default: None,
            map: HashMap::new(),
        }
    }

    pub fn set(&mut self, v: Vertex, val: BoundaryValue) {
        self.map.insert(v, val);
    }

    pub fn value(&self, v: Vertex) -> Option<BoundaryValue> {
        self.map.get(&v).copied().or(self.default)
    }
}

pub type PinnedZeros = BTreeSet<Vertex>;

/// Per-vertex radii, with the geometry they live in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Label {
    pub geom: Geometry,
    radii: Vec<f64>,
}

impl Label {
    pub fn uniform(geom: Geometry, vertex_count: usize, r: f64) -> Self {
        Label {
            geom,
            radii: vec![r; vertex_count],
        }
    }

    pub fn get(&self, v: Vertex) -> f64 {
        self.radii[v - 1]
    }

    pub fn set(&mut self, v: Vertex, r: f64) {
        self.radii[v - 1] = r;
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    GaussSeidel,
    Jacobi,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Initial radius at free interior vertices.
    pub init_radius: f64,
    pub sweep: SweepMode,
    /// Record (sweep, residual) pairs.
    pub trace: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: tol::SOLVER,
            max_iters: 50_000,
            init_radius: 1.0,
            sweep: SweepMode::GaussSeidel,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SolveReport {
    pub sweeps: usize,
    pub residual: f64,
    pub trace: Vec<(usize, f64)>,
}

impl SolveReport {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("sweep,max_residual\n");
        for (i, r) in &self.trace {
            out.push_str(&format!("{i},{r:.17e}\n"));
        }
        out
    }
}

/// Angle sum at `v`: total of the face angles at `v` over its incident faces.
pub fn angle_sum(
    k: &Complex,
    label: &Label,
    phi: &OverlapMap,
    v: Vertex,
) -> Result<f64, GeomError> {
    angle_sum_at(k, label, phi, v, label.get(v))
}

/// Angle sum at `v` with its own label replaced by `r` (the solver's 1-D
/// objective).
fn angle_sum_at(
    k: &Complex,
    label: &Label,
    phi: &OverlapMap,
    v: Vertex,
    r: f64,
) -> Result<f64, GeomError> {
    let mut total = 0.0;
    for (p, q) in k.faces_at(v) {
        total += face_angle(
            label.geom,
            r,
            label.get(p),
            label.get(q),
            phi.get(v, p),
            phi.get(v, q),
            phi.get(p, q),
        )?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarStatus {
    Strict,
    Equality,
    Violated,
}

/// Evaluate condition (*) for a closed vertex loop separating `enclosed`
/// from the boundary: sum(pi - Phi(e_j)) vs 2 pi + sum(A(v) - 2 pi).
pub fn check_star(
    k: &Complex,
    phi: &OverlapMap,
    targets: &TargetAngles,
    enclosed: &[Vertex],
    loop_vertices: &[Vertex],
) -> Result<StarStatus, SolverError> {
    let on_loop: BTreeSet<Vertex> = loop_vertices.iter().copied().collect();
    if enclosed.iter().any(|v| on_loop.contains(v)) {
        return Err(SolverError::LoopNotSeparating);
    }
    let n = loop_vertices.len();
    let mut lhs = 0.0;
    for i in 0..n {
        let (u, v) = (loop_vertices[i], loop_vertices[(i + 1) % n]);
        if !k.has_edge(u, v) {
            return Err(SolverError::LoopNotSeparating);
        }
        lhs += PI - phi.get(u, v);
    }
    let rhs = 2.0 * PI
        + enclosed
            .iter()
            .map(|&v| targets.get(v) - 2.0 * PI)
            .sum::<f64>();
    let d = lhs - rhs;
    Ok(if d > 1e-9 {
        StarStatus::Strict
    } else if d >= -1e-9 {
        StarStatus::Equality
    } else {
        StarStatus::Violated
    })
}

/// Condition (**): every face's overlaps sum to at most pi. Returns the
/// offending faces.
pub fn check_star_star(k: &Complex, phi: &OverlapMap) -> Vec<FaceId> {
    let mut bad = Vec::new();
    for (fi, f) in k.faces().iter().enumerate() {
        let s = phi.get(f[0], f[1]) + phi.get(f[1], f[2]) + phi.get(f[2], f[0]);
        if s > PI + 1e-9 {
            bad.push(fi);
        }
    }
    bad
}

/// Run (*) over every flower loop that matters: vertices with A > 2 pi and
/// pinned vertices. Strictness is required at free vertices, equality at
/// pinned ones.
pub fn check_star_flowers(
    k: &Complex,
    phi: &OverlapMap,
    targets: &TargetAngles,
    pinned: &PinnedZeros,
) -> Result<(), SolverError> {
    for v in k.vertices() {
        let branched = k.is_interior(v) && targets.get(v) > 2.0 * PI + 1e-9;
        if !branched && !pinned.contains(&v) {
            continue;
        }
        let petals = k.flower(v).map_err(|_| SolverError::StarViolation(v))?;
        let status = check_star(k, phi, targets, &[v], &petals.petals)?;
        if pinned.contains(&v) {
            if status != StarStatus::Equality {
                return Err(SolverError::InconsistentPins(v));
            }
        } else if status != StarStatus::Strict {
            return Err(SolverError::StarViolation(v));
        }
    }
    Ok(())
}

/// Bounded diagnostic search for non-strict (*) loops of length at most
/// `max_len` near branched or pinned vertices. Returns (loop, enclosed,
/// status) for every non-strict separating loop found.
pub fn search_star_loops(
    k: &Complex,
    phi: &OverlapMap,
    targets: &TargetAngles,
    pinned: &PinnedZeros,
    max_len: usize,
) -> Vec<(Vec<Vertex>, Vec<Vertex>, StarStatus)> {
    let special: Vec<Vertex> = k
        .vertices()
        .filter(|&v| pinned.contains(&v) || (k.is_interior(v) && targets.get(v) != 2.0 * PI))
        .collect();
    if special.is_empty() {
        return Vec::new();
    }
    // Region: vertices within graph distance max_len/2 of a special vertex.
    let mut region: BTreeSet<Vertex> = BTreeSet::new();
    let mut queue: VecDeque<(Vertex, usize)> = special.iter().map(|&v| (v, 0)).collect();
    while let Some((v, d)) = queue.pop_front() {
        if !region.insert(v) || d >= max_len / 2 + 1 {
            continue;
        }
        for &p in &k.flower(v).unwrap().petals {
            if !region.contains(&p) {
                queue.push_back((p, d + 1));
            }
        }
    }
    let mut found = Vec::new();
    let mut seen: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    let region_vec: Vec<Vertex> = region.iter().copied().collect();
    for &start in &region_vec {
        let mut stack = vec![vec![start]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            for &next in &k.flower(last).unwrap().petals {
                if next == start && path.len() >= 3 {
                    let mut canon = path.clone();
                    canon.sort_unstable();
                    if !seen.insert(canon) {
                        continue;
                    }
                    if let Some(enclosed) = enclosed_by(k, &path) {
                        if let Ok(status) = check_star(k, phi, targets, &enclosed, &path) {
                            if status != StarStatus::Strict {
                                found.push((path.clone(), enclosed, status));
                            }
                        }
                    }
                } else if next > start
                    && !path.contains(&next)
                    && path.len() < max_len
                    && region.contains(&next)
                {
                    let mut p = path.clone();
                    p.push(next);
                    stack.push(p);
                }
            }
        }
    }
    found
}

/// Vertices enclosed by a simple closed loop: the component of the complement
/// that avoids the boundary (smaller component on closed surfaces).
fn enclosed_by(k: &Complex, loop_vertices: &[Vertex]) -> Option<Vec<Vertex>> {
    let on_loop: BTreeSet<Vertex> = loop_vertices.iter().copied().collect();
    let mut comp_of: HashMap<Vertex, usize> = HashMap::new();
    let mut comps: Vec<(Vec<Vertex>, bool)> = Vec::new(); // (vertices, touches boundary)
    for v in k.vertices() {
        if on_loop.contains(&v) || comp_of.contains_key(&v) {
            continue;
        }
        let mut verts = Vec::new();
        let mut touches = false;
        let mut queue = VecDeque::from([v]);
        comp_of.insert(v, comps.len());
        while let Some(u) = queue.pop_front() {
            verts.push(u);
            touches |= k.is_boundary(u);
            for &p in &k.flower(u).unwrap().petals {
                if !on_loop.contains(&p) && !comp_of.contains_key(&p) {
                    comp_of.insert(p, comps.len());
                    queue.push_back(p);
                }
            }
        }
        comps.push((verts, touches));
    }
    if comps.len() < 2 {
        return None;
    }
    let has_boundary = k.vertices().any(|v| k.is_boundary(v));
    if has_boundary {
        let inner: Vec<&(Vec<Vertex>, bool)> = comps.iter().filter(|(_, t)| !t).collect();
        if inner.len() == 1 {
            return Some(inner[0].0.clone());
        }
        None
    } else {
        comps
            .into_iter()
            .map(|(v, _)| v)
            .min_by_key(|v| v.len())
    }
}

/// Solve for the packing label: theta(v) = A(v) at every free interior
/// vertex, boundary and pinned labels held fixed.
pub fn solve_label(
    k: &Complex,
    geom: Geometry,
    phi: &OverlapMap,
    targets: &TargetAngles,
    bc: &BoundaryCondition,
    pinned: &PinnedZeros,
    opts: &SolveOptions,
) -> Result<(Label, SolveReport), SolverError> {
    let bad = check_star_star(k, phi);
    if !bad.is_empty() {
        return Err(SolverError::StarStarViolation(bad));
    }
    check_star_flowers(k, phi, targets, pinned)?;

    let mut label = Label::uniform(geom, k.vertex_count(), opts.init_radius);
    let mut free: Vec<Vertex> = Vec::new();
    for v in k.vertices() {
        if k.is_boundary(v) {
            match bc.value(v) {
                Some(BoundaryValue::Radius(r)) => label.set(v, r),
                Some(BoundaryValue::Horocycle) => {
                    if geom != Geometry::Hyperbolic {
                        return Err(SolverError::HorocycleInEuclidean);
                    }
                    label.set(v, f64::INFINITY);
                }
                None => return Err(SolverError::MissingBoundaryValue(v)),
            }
        } else if pinned.contains(&v) {
            label.set(v, 0.0);
        } else {
            free.push(v);
        }
    }

    let closed_euclidean = geom == Geometry::Euclidean && !k.vertices().any(|v| k.is_boundary(v));
    let mut report = SolveReport::default();
    for sweep in 0..opts.max_iters {
        match opts.sweep {
            SweepMode::GaussSeidel => {
                for &v in &free {
                    let r = update_vertex(k, &label, phi, targets.get(v), v, opts.tol)?;
                    label.set(v, r);
                }
            }
            SweepMode::Jacobi => {
                let snapshot = label.clone();
                for &v in &free {
                    let r = update_vertex(k, &snapshot, phi, targets.get(v), v, opts.tol)?;
                    label.set(v, r);
                }
            }
        }
        if closed_euclidean {
            // Gauge: euclidean labels on a closed surface are scale-free.
            let mean = free.iter().map(|&v| label.get(v).ln()).sum::<f64>() / free.len() as f64;
            let s = (-mean).exp();
            for &v in &free {
                label.set(v, label.get(v) * s);
            }
        }
        for &v in &free {
            if label.get(v) < NEAR_ZERO {
                return Err(SolverError::StarViolation(v));
            }
        }
        let mut residual = 0.0f64;
        for &v in &free {
            residual = residual.max((angle_sum(k, &label, phi, v)? - targets.get(v)).abs());
        }
        if opts.trace {
            report.trace.push((sweep + 1, residual));
        }
        report.sweeps = sweep + 1;
        report.residual = residual;
        if residual <= opts.tol {
            return Ok((label, report));
        }
    }
    Err(SolverError::NonConvergence {
        sweeps: report.sweeps,
        residual: report.residual,
    })
}

/// 1-D monotone root find: theta is strictly decreasing in the vertex's own
/// label, so bisection on [0, hi] with an expanding upper bound is safe.
fn update_vertex(
    k: &Complex,
    label: &Label,
    phi: &OverlapMap,
    target: f64,
    v: Vertex,
    tol: f64,
) -> Result<f64, SolverError> {
    let inner = (tol / 10.0).max(1e-14);
    let cur = label.get(v);
    if (angle_sum_at(k, label, phi, v, cur)? - target).abs() < inner {
        return Ok(cur);
    }
    // Probe just above zero: exact zero would collide with a pinned-zero
    // neighbor in the degenerate-triple check.
    let mut lo = 0.0f64;
    if angle_sum_at(k, label, phi, v, 1e-30)? < target - 1e-12 {
        // Even the point circle cannot reach the target: (*) fails here.
        return Err(SolverError::StarViolation(v));
    }
    let mut hi = cur.max(1e-3);
    while angle_sum_at(k, label, phi, v, hi)? > target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(SolverError::StarViolation(v));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let theta = angle_sum_at(k, label, phi, v, mid)?;
        if (theta - target).abs() < inner || (hi - lo) < 1e-16 * (1.0 + hi) {
            return Ok(mid);
        }
        if theta > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One Gauss-Seidel relaxation sweep over the given vertices, in order.
pub fn relax_vertices(
    k: &Complex,
    label: &mut Label,
    phi: &OverlapMap,
    targets: &TargetAngles,
    vertices: &[Vertex],
    tol: f64,
) -> Result<(), SolverError> {
    for &v in vertices {
        let r = update_vertex(k, label, phi, targets.get(v), v, tol)?;
        label.set(v, r);
    }
    Ok(())
}

/// Canonical maximal-packing label: hyperbolic with horocycle boundary for
/// discs and annuli, gauge-fixed euclidean for tori.
pub fn max_label(k: &Complex, opts: &SolveOptions) -> Result<(Label, SolveReport), SolverError> {
    let targets = TargetAngles::flat();
    let phi = OverlapMap::tangency();
    let pinned = PinnedZeros::new();
    match k.surface() {
        SurfaceType::Disc | SurfaceType::Annulus => solve_label(
            k,
            Geometry::Hyperbolic,
            &phi,
            &targets,
            &BoundaryCondition::horocycles(),
            &pinned,
            opts,
        ),
        SurfaceType::Torus => solve_label(
            k,
            Geometry::Euclidean,
            &phi,
            &targets,
            &BoundaryCondition::none(),
            &pinned,
            opts,
        ),
        other => Err(SolverError::UnsupportedSurface(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::workbench::generators::{gen_annulus, gen_disc, gen_torus};

    fn wheel(petals: usize) -> Complex {
        let faces: Vec<[Vertex; 3]> = (0..petals)
            .map(|i| [1, 2 + i, 2 + (i + 1) % petals])
            .collect();
        build_complex(faces).unwrap()
    }

    fn solve_wheel(petals: usize, target: f64) -> f64 {
        let k = wheel(petals);
        let mut targets = TargetAngles::flat();
        targets.set(1, target);
        let (label, _) = solve_label(
            &k,
            Geometry::Euclidean,
            &OverlapMap::tangency(),
            &targets,
            &BoundaryCondition::uniform_radius(1.0),
            &PinnedZeros::new(),
            &SolveOptions::default(),
        )
        .unwrap();
        label.get(1)
    }

    #[test]
    fn hex_flower_angle_sum_flat() {
        let k = wheel(6);
        let label = Label::uniform(Geometry::Euclidean, 7, 1.0);
        let s = angle_sum(&k, &label, &OverlapMap::tangency(), 1).unwrap();
        assert!((s - 2.0 * PI).abs() < 1e-12);
        // Boundary vertex: two faces of pi/3 each.
        let b = angle_sum(&k, &label, &OverlapMap::tangency(), 2).unwrap();
        assert!((b - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pentagon_flower_closed_form() {
        let want = 1.0 / (PI / 5.0).sin() - 1.0;
        assert!((solve_wheel(5, 2.0 * PI) - want).abs() < 1e-8);
    }

    #[test]
    fn heptagon_flower_closed_form() {
        let want = 1.0 / (PI / 7.0).sin() - 1.0;
        assert!((solve_wheel(7, 2.0 * PI) - want).abs() < 1e-8);
    }

    #[test]
    fn branched_hex_flower_closed_form() {
        let want = 1.0 / (PI / 3.0).sin() - 1.0;
        assert!((solve_wheel(6, 4.0 * PI) - want).abs() < 1e-8);
    }

    #[test]
    fn hyperbolic_hex_flower_matches_direct_bisection() {
        let k = wheel(6);
        let (label, _) = max_label(&k, &SolveOptions::default()).unwrap();
        // Independent oracle: bisect the single unknown directly.
        let theta = |r: f64| {
            let mut l = Label::uniform(Geometry::Hyperbolic, 7, f64::INFINITY);
            l.set(1, r);
            angle_sum(&k, &l, &OverlapMap::tangency(), 1).unwrap()
        };
        let (mut lo, mut hi) = (1e-6, 50.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if theta(mid) > 2.0 * PI {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((label.get(1) - 0.5 * (lo + hi)).abs() < 1e-6);
        assert!((angle_sum(&k, &label, &OverlapMap::tangency(), 1).unwrap() - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn max_label_torus_flat() {
        let k = gen_torus(8, 8).unwrap();
        let (label, _) = max_label(&k, &SolveOptions::default()).unwrap();
        for v in k.vertices() {
            let s = angle_sum(&k, &label, &OverlapMap::tangency(), v).unwrap();
            assert!((s - 2.0 * PI).abs() < 1e-8);
        }
        // Gauge: log radii sum to zero.
        let gauge: f64 = label.radii().iter().map(|r| r.ln()).sum();
        assert!(gauge.abs() < 1e-9);
    }

    #[test]
    fn annulus_label_reflection_symmetric() {
        let (rings, cols) = (5, 8);
        let k = gen_annulus(rings, cols).unwrap();
        let (label, _) = max_label(&k, &SolveOptions::default()).unwrap();
        for i in 0..rings {
            for j in 0..cols {
                let a = label.get(i * cols + j + 1);
                let b = label.get((rings - 1 - i) * cols + j + 1);
                if a.is_infinite() {
                    assert!(b.is_infinite());
                } else {
                    assert!((a - b).abs() < 1e-7, "{i},{j}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn seeds_agree() {
        let k = gen_disc(3).unwrap();
        let solve = |init: f64| {
            let opts = SolveOptions {
                init_radius: init,
                ..SolveOptions::default()
            };
            max_label(&k, &opts).unwrap().0
        };
        let (a, b) = (solve(0.1), solve(2.0));
        for v in k.vertices().filter(|&v| k.is_interior(v)) {
            assert!((a.get(v) - b.get(v)).abs() < 1e-7);
        }
    }

    #[test]
    fn star_trichotomy() {
        let k = wheel(6);
        let phi = OverlapMap::tangency();
        let mut targets = TargetAngles::flat();
        let petals: Vec<Vertex> = (2..=7).collect();
        targets.set(1, 4.0 * PI);
        assert_eq!(
            check_star(&k, &phi, &targets, &[1], &petals).unwrap(),
            StarStatus::Strict
        );
        targets.set(1, 6.0 * PI);
        assert_eq!(
            check_star(&k, &phi, &targets, &[1], &petals).unwrap(),
            StarStatus::Equality
        );
        targets.set(1, 7.0 * PI);
        assert_eq!(
            check_star(&k, &phi, &targets, &[1], &petals).unwrap(),
            StarStatus::Violated
        );
    }

    #[test]
    fn star_star_reports_faces() {
        let k = wheel(6);
        let mut phi = OverlapMap::tangency();
        assert!(check_star_star(&k, &phi).is_empty());
        phi.set(1, 2, PI / 2.0);
        phi.set(2, 3, PI / 2.0);
        phi.set(1, 3, PI / 2.0);
        assert_eq!(check_star_star(&k, &phi), vec![0]);
    }

    #[test]
    fn four_petal_traditional_branch_rejected() {
        // 4 petals, A = 4 pi: (*) holds only with equality, so a free
        // branched vertex must be rejected.
        let k = wheel(4);
        let mut targets = TargetAngles::flat();
        targets.set(1, 4.0 * PI);
        let err = solve_label(
            &k,
            Geometry::Euclidean,
            &OverlapMap::tangency(),
            &targets,
            &BoundaryCondition::uniform_radius(1.0),
            &PinnedZeros::new(),
            &SolveOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SolverError::StarViolation(1)));
    }

    #[test]
    fn boundary_labels_never_move() {
        let k = gen_disc(2).unwrap();
        let (label, _) = solve_label(
            &k,
            Geometry::Euclidean,
            &OverlapMap::tangency(),
            &TargetAngles::flat(),
            &BoundaryCondition::uniform_radius(0.7),
            &PinnedZeros::new(),
            &SolveOptions::default(),
        )
        .unwrap();
        for v in k.vertices().filter(|&v| k.is_boundary(v)) {
            assert_eq!(label.get(v), 0.7);
        }
    }

    #[test]
    fn jacobi_matches_gauss_seidel() {
        let k = gen_disc(2).unwrap();
        let run = |sweep| {
            let opts = SolveOptions {
                sweep,
                ..SolveOptions::default()
            };
            max_label(&k, &opts).unwrap().0
        };
        let (a, b) = (run(SweepMode::GaussSeidel), run(SweepMode::Jacobi));
        for v in k.vertices().filter(|&v| k.is_interior(v)) {
            assert!((a.get(v) - b.get(v)).abs() < 1e-7);
        }
    }

    #[test]
    fn superpacking_iterates_nonincreasing() {
        let k = gen_disc(3).unwrap();
        // Large uniform hyperbolic radii give theta <= A everywhere.
        let mut label = Label::uniform(Geometry::Hyperbolic, k.vertex_count(), 8.0);
        let interior: Vec<Vertex> = k.vertices().filter(|&v| k.is_interior(v)).collect();
        for v in k.vertices().filter(|&v| k.is_boundary(v)) {
            label.set(v, f64::INFINITY);
        }
        let phi = OverlapMap::tangency();
        let targets = TargetAngles::flat();
        for _ in 0..3 {
            let before = label.clone();
            relax_vertices(&k, &mut label, &phi, &targets, &interior, 1e-8).unwrap();
            for &v in &interior {
                assert!(label.get(v) <= before.get(v) + 1e-12);
            }
        }
    }
}
