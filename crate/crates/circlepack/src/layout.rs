//! Developing a label into a concrete packing along a spanning tree of
//! faces, holonomy of closed face chains, normalizations, and winding
//! numbers.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{BlackHoleRecord, Complex, ComplexError, FaceId, Vertex};
use crate::geometry::trig::horocycle_eucl_radius_at_origin;
use crate::geometry::{
    edge_length, face_angle, hyp_dist, hyp_midpoint, realize_triple, tol, Circle, GeomError,
    Geometry, Mobius,
};
use crate::solver::{Label, OverlapMap};

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("face {0} cannot be realized")]
    DegenerateFace(FaceId),
    #[error("face {0} has more than one ideal vertex")]
    TooManyHorocycles(FaceId),
    #[error("face {0} was never reachable through a finite anchor")]
    Unreachable(FaceId),
    #[error("face chain is not a closed chain of edge-adjacent faces")]
    OpenChain,
    #[error("vertex loop passes through boundary vertex {0}")]
    LoopThroughBoundary(Vertex),
    #[error("vertex loop is not a closed walk of adjacent vertices")]
    BadVertexLoop,
    #[error("circle of vertex {0} is not placed")]
    MissingCircle(Vertex),
    #[error("circle of vertex {0} is not a horocycle")]
    NotHorocycle(Vertex),
    #[error("centers coincide; normalization is underdetermined")]
    CoincidentCenters,
    #[error("winding is not integral: total turning {0} turns")]
    NonIntegralWinding(f64),
    #[error("branch value lies on the carrier curve")]
    BranchValueOnCurve,
    #[error("geometry error: {0}")]
    Geometry(#[from] GeomError),
    #[error("complex error: {0}")]
    Complex(#[from] ComplexError),
}

/// A realized packing: per-vertex circles plus the face tree used to place
/// them. `tree` lists (face, parent face) in placement order; the root has no
/// parent. Non-tree edges are not enforced; their mismatch is holonomy or
/// branching data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Packing {
    pub geom: Geometry,
    pub circles: Vec<Option<Circle>>,
    pub tree: Vec<(FaceId, Option<FaceId>)>,
}

impl Packing {
    pub fn circle(&self, v: Vertex) -> Option<&Circle> {
        self.circles.get(v - 1).and_then(|c| c.as_ref())
    }

    /// The circle of `v`, failing loudly when unplaced.
    pub fn require(&self, v: Vertex) -> Result<&Circle, LayoutError> {
        self.circle(v).ok_or(LayoutError::MissingCircle(v))
    }

    /// Apply a global isometry: a disc automorphism for hyperbolic packings,
    /// a similarity for euclidean ones.
    pub fn transform(&self, m: &Mobius) -> Result<Packing, LayoutError> {
        let circles = self
            .circles
            .iter()
            .map(|c| c.map(|c| transform_circle(self.geom, &c, m)).transpose())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Packing {
            geom: self.geom,
            circles,
            tree: self.tree.clone(),
        })
    }
}

fn transform_circle(geom: Geometry, c: &Circle, m: &Mobius) -> Result<Circle, GeomError> {
    match geom {
        Geometry::Euclidean => {
            let e = m.apply_circle(&c.eucl)?;
            Ok(Circle::euclidean(e.center, e.radius))
        }
        Geometry::Hyperbolic => {
            if c.is_horocycle() {
                let e = m.apply_circle(&c.eucl)?;
                Ok(Circle::horocycle(m.apply(c.center), e.radius))
            } else {
                // Isometries carry hyperbolic centers to hyperbolic centers
                // and preserve the hyperbolic radius.
                Ok(Circle::hyperbolic(m.apply(c.center), c.radius))
            }
        }
    }
}

/// Place the third circle of a face from a finite `anchor` circle and an
/// already-placed `known` neighbor. `ccw` says whether the new circle sits
/// counterclockwise from `known` as seen from `anchor`.
fn place_apex(
    geom: Geometry,
    anchor: &Circle,
    known: &Circle,
    r_anchor: f64,
    r_known: f64,
    r_new: f64,
    phi_ak: f64,
    phi_an: f64,
    phi_kn: f64,
    ccw: bool,
) -> Result<Circle, LayoutError> {
    debug_assert!(r_anchor.is_finite());
    let alpha = face_angle(geom, r_anchor, r_known, r_new, phi_ak, phi_an, phi_kn)?;
    let turn = if ccw { alpha } else { -alpha };
    match geom {
        Geometry::Euclidean => {
            let off = known.center - anchor.center;
            let n = off.norm();
            if n == 0.0 {
                return Err(LayoutError::Geometry(GeomError::DegenerateTriple));
            }
            let l = edge_length(geom, r_anchor, r_new, phi_an)?;
            let dir = off / n * Complex64::from_polar(1.0, turn);
            Ok(Circle::euclidean(anchor.center + dir * l, r_new))
        }
        Geometry::Hyperbolic => {
            // Work in the frame where the anchor's hyperbolic center is 0.
            let t = Mobius::disc_automorphism(anchor.center, 0.0);
            let kdir = t.apply(known.center);
            if kdir.norm() == 0.0 {
                return Err(LayoutError::Geometry(GeomError::DegenerateTriple));
            }
            let theta = kdir.im.atan2(kdir.re) + turn;
            let dir = Complex64::from_polar(1.0, theta);
            let ti = t.inverse();
            if r_new.is_infinite() {
                let rho = horocycle_eucl_radius_at_origin((r_anchor / 2.0).tanh(), phi_an);
                let framed = Circle::horocycle(dir, rho);
                let e = ti.apply_circle(&framed.eucl)?;
                Ok(Circle::horocycle(ti.apply(dir), e.radius))
            } else {
                let l = edge_length(geom, r_anchor, r_new, phi_an)?;
                Ok(Circle::hyperbolic(ti.apply(dir * (l / 2.0).tanh()), r_new))
            }
        }
    }
}

/// Place the apex `w` of ccw face `(x, y, w)` given the circles of `x`, `y`.
/// One of the shared circles must be finite to serve as the anchor.
fn place_face_apex(
    geom: Geometry,
    label: &Label,
    phi: &OverlapMap,
    x: (Vertex, &Circle),
    y: (Vertex, &Circle),
    w: Vertex,
) -> Result<Option<Circle>, LayoutError> {
    let (rx, ry, rw) = (label.get(x.0), label.get(y.0), label.get(w));
    let (pxy, pxw, pyw) = (phi.get(x.0, y.0), phi.get(x.0, w), phi.get(y.0, w));
    if rx.is_finite() {
        // At x the face reads <x, y, w>: w is ccw after y.
        Ok(Some(place_apex(
            geom, x.1, y.1, rx, ry, rw, pxy, pxw, pyw, true,
        )?))
    } else if ry.is_finite() {
        // At y the face reads <y, w, x>: w is ccw before x.
        Ok(Some(place_apex(
            geom, y.1, x.1, ry, rx, rw, pxy, pyw, pxw, false,
        )?))
    } else {
        Ok(None)
    }
}

/// Canonical realization of a single face, rotating so that at most one
/// ideal vertex comes last (realize_triple requires the first two finite).
fn realize_face(
    k: &Complex,
    label: &Label,
    phi: &OverlapMap,
    f: FaceId,
) -> Result<[(Vertex, Circle); 3], LayoutError> {
    let mut fv = k.faces()[f];
    for _ in 0..2 {
        if label.get(fv[0]).is_infinite() || label.get(fv[1]).is_infinite() {
            fv.rotate_left(1);
        }
    }
    if label.get(fv[0]).is_infinite() || label.get(fv[1]).is_infinite() {
        return Err(LayoutError::TooManyHorocycles(f));
    }
    let radii = [label.get(fv[0]), label.get(fv[1]), label.get(fv[2])];
    let overlaps = [
        phi.get(fv[0], fv[1]),
        phi.get(fv[1], fv[2]),
        phi.get(fv[2], fv[0]),
    ];
    let t = realize_triple(label.geom, radii, overlaps)
        .map_err(|_| LayoutError::DegenerateFace(f))?;
    Ok([(fv[0], t[0]), (fv[1], t[1]), (fv[2], t[2])])
}

/// Develop the label into a packing: realize a base face canonically, then
/// BFS over the face adjacency graph, each face placing its one new circle
/// across an already-placed shared edge.
pub fn develop(k: &Complex, label: &Label, phi: &OverlapMap) -> Result<Packing, LayoutError> {
    let nf = k.faces().len();
    let inf_count = |f: FaceId| {
        k.faces()[f]
            .iter()
            .filter(|&&v| label.get(v).is_infinite())
            .count()
    };
    let base = (0..nf)
        .min_by_key(|&f| (inf_count(f), f))
        .ok_or(LayoutError::OpenChain)?;
    let mut circles: Vec<Option<Circle>> = vec![None; k.vertex_count()];
    for (v, c) in realize_face(k, label, phi, base)? {
        circles[v - 1] = Some(c);
    }
    let mut tree = vec![(base, None)];
    let mut visited = vec![false; nf];
    visited[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(f) = queue.pop_front() {
        let fv = k.faces()[f];
        for i in 0..3 {
            let (u, v) = (fv[i], fv[(i + 1) % 3]);
            let Some(g) = k.face_with_directed_edge(v, u) else {
                continue;
            };
            if visited[g] {
                continue;
            }
            // In g the shared edge runs v -> u; apex is the third vertex.
            let w = *k.faces()[g].iter().find(|&&x| x != u && x != v).unwrap();
            if circles[w - 1].is_none() {
                let cx = circles[v - 1].as_ref().unwrap();
                let cy = circles[u - 1].as_ref().unwrap();
                match place_face_apex(label.geom, label, phi, (v, cx), (u, cy), w)? {
                    Some(c) => circles[w - 1] = Some(c),
                    // Both shared circles ideal: enter g through another edge.
                    None => continue,
                }
            }
            visited[g] = true;
            tree.push((g, Some(f)));
            queue.push_back(g);
        }
    }
    if let Some(g) = (0..nf).find(|&g| !visited[g]) {
        return Err(LayoutError::Unreachable(g));
    }
    Ok(Packing {
        geom: label.geom,
        circles,
        tree,
    })
}

/// Worst measured-overlap error over all edges whose endpoints are placed,
/// compared in cosine space: near tangency the angle itself amplifies
/// roundoff by eps^(-1/2) under acos, the cosine does not. For simply
/// connected complexes this is the full closure check; otherwise non-tree
/// edges carry the holonomy mismatch.
pub fn packing_residual(k: &Complex, p: &Packing, phi: &OverlapMap) -> f64 {
    let mut worst: f64 = 0.0;
    for (u, v) in k.edges() {
        if let (Some(cu), Some(cv)) = (p.circle(u), p.circle(v)) {
            let (a, b) = (cu.eucl, cv.eucl);
            // Zero circles (pinned fall guys) have no overlap angle.
            if a.radius < 1e-15 || b.radius < 1e-15 {
                continue;
            }
            let cos_m = ((a.center - b.center).norm_sqr() - a.radius * a.radius
                - b.radius * b.radius)
                / (2.0 * a.radius * b.radius);
            worst = worst.max((cos_m - phi.get(u, v).cos()).abs());
        }
    }
    worst
}

/// Holonomy of a closed face chain: the isometry carrying the initial
/// placement of the first face to its placement after developing once around
/// the chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Holonomy {
    pub chain: Vec<FaceId>,
    pub map: Mobius,
    /// Distance from the base center to its image (hyperbolic or euclidean
    /// per the packing geometry).
    pub displacement: f64,
    /// Frobenius deviation of the normalized matrix from the identity;
    /// catches elliptic maps that fix the base point.
    pub deviation: f64,
    /// Two finite base circles of the first chain face, with their centers in
    /// the chain's own development frame.
    pub base_vertices: (Vertex, Vertex),
    pub base: Complex64,
    pub base2: Complex64,
}

impl Holonomy {
    pub fn is_trivial(&self) -> bool {
        self.displacement + self.deviation < tol::HOLONOMY
    }

    /// Conjugate the holonomy map into the frame of a globally developed
    /// packing via the base circles' positions there.
    pub fn in_frame(&self, p: &Packing) -> Result<Mobius, LayoutError> {
        let (u, v) = self.base_vertices;
        let (wu, wv) = (p.require(u)?.center, p.require(v)?.center);
        let g = match p.geom {
            Geometry::Hyperbolic => Mobius::disc_map_from_pairs(self.base, self.base2, wu, wv),
            Geometry::Euclidean => Mobius::similarity_from_pairs(self.base, self.base2, wu, wv),
        };
        Ok(g.compose(&self.map).compose(&g.inverse()))
    }
}

/// Develop along a closed chain of edge-adjacent faces and measure the
/// holonomy. The chain is `[f_0, .., f_{m-1}]` with `f_{m-1}` adjacent to
/// `f_0`; consecutive faces must share an edge.
pub fn holonomy(
    k: &Complex,
    label: &Label,
    phi: &OverlapMap,
    chain: &[FaceId],
) -> Result<Holonomy, LayoutError> {
    if chain.is_empty() {
        return Err(LayoutError::OpenChain);
    }
    let initial = realize_face(k, label, phi, chain[0])?;
    let mut cur = initial;
    for step in 1..=chain.len() {
        let g = chain[step % chain.len()];
        if g == chain[step - 1] {
            return Err(LayoutError::OpenChain);
        }
        let gv = k.faces()[g];
        let held: Vec<(Vertex, Circle)> = cur
            .iter()
            .filter(|(v, _)| gv.contains(v))
            .map(|&(v, c)| (v, c))
            .collect();
        if held.len() != 2 {
            return Err(LayoutError::OpenChain);
        }
        let w = *gv.iter().find(|&&x| x != held[0].0 && x != held[1].0).unwrap();
        let iw = gv.iter().position(|&x| x == w).unwrap();
        // ccw face reads (x, y, w).
        let (x, y) = (gv[(iw + 1) % 3], gv[(iw + 2) % 3]);
        let find = |v: Vertex| held.iter().find(|&&(h, _)| h == v).unwrap().1;
        let (cx, cy) = (find(x), find(y));
        let cw = place_face_apex(label.geom, label, phi, (x, &cx), (y, &cy), w)?
            .ok_or(LayoutError::TooManyHorocycles(g))?;
        cur = [(x, cx), (y, cy), (w, cw)];
    }
    // Match initial and final circles of the first face by vertex id.
    let fin = |v: Vertex| cur.iter().find(|&&(h, _)| h == v).unwrap().1;
    let finite: Vec<Vertex> = initial
        .iter()
        .filter(|(v, _)| label.get(*v).is_finite())
        .map(|&(v, _)| v)
        .collect();
    if finite.len() < 2 {
        return Err(LayoutError::TooManyHorocycles(chain[0]));
    }
    let start = |v: Vertex| initial.iter().find(|&&(h, _)| h == v).unwrap().1;
    let (z1, z2) = (start(finite[0]).center, start(finite[1]).center);
    let (w1, w2) = (fin(finite[0]).center, fin(finite[1]).center);
    let map = match label.geom {
        Geometry::Hyperbolic => Mobius::disc_map_from_pairs(z1, z2, w1, w2),
        Geometry::Euclidean => Mobius::similarity_from_pairs(z1, z2, w1, w2),
    };
    let displacement = match label.geom {
        Geometry::Hyperbolic => hyp_dist(z1, map.apply(z1)),
        Geometry::Euclidean => (map.apply(z1) - z1).norm(),
    };
    Ok(Holonomy {
        chain: chain.to_vec(),
        map,
        displacement,
        deviation: map.identity_deviation(),
        base_vertices: (finite[0], finite[1]),
        base: z1,
        base2: z2,
    })
}

/// Closed face chain homotopic to a closed vertex loop, built from the
/// counterclockwise flower fan at each loop vertex (consecutive fans share
/// their junction face).
pub fn face_chain_from_vertex_loop(
    k: &Complex,
    loop_vertices: &[Vertex],
) -> Result<Vec<FaceId>, LayoutError> {
    let n = loop_vertices.len();
    if n < 3 {
        return Err(LayoutError::BadVertexLoop);
    }
    let mut chain: Vec<FaceId> = Vec::new();
    for i in 0..n {
        let v = loop_vertices[i];
        let prev = loop_vertices[(i + n - 1) % n];
        let next = loop_vertices[(i + 1) % n];
        if k.is_boundary(v) {
            return Err(LayoutError::LoopThroughBoundary(v));
        }
        let petals = &k.flower(v)?.petals;
        let m = petals.len();
        let pos = |x: Vertex| petals.iter().position(|&p| p == x);
        let (a, b) = match (pos(prev), pos(next)) {
            (Some(a), Some(b)) if a != b => (a, b),
            _ => return Err(LayoutError::BadVertexLoop),
        };
        // Fan counterclockwise from the prev petal to the next petal.
        let mut j = a;
        while j != b {
            let f = k
                .face_with_directed_edge(v, petals[j])
                .ok_or(LayoutError::BadVertexLoop)?;
            if chain.last() != Some(&f) {
                chain.push(f);
            }
            j = (j + 1) % m;
        }
    }
    while chain.len() > 1 && chain.first() == chain.last() {
        chain.pop();
    }
    if chain.len() < 2 {
        return Err(LayoutError::BadVertexLoop);
    }
    Ok(chain)
}

/// Disc automorphism sending the center of `alpha`'s circle to 0 and the
/// ideal point of `gamma`'s horocycle to i; returns the normalized packing
/// and the map applied.
pub fn normalize_disc(
    p: &Packing,
    alpha: Vertex,
    gamma: Vertex,
) -> Result<(Packing, Mobius), LayoutError> {
    let ca = p.require(alpha)?;
    let cg = p.require(gamma)?;
    if !cg.is_horocycle() {
        return Err(LayoutError::NotHorocycle(gamma));
    }
    let t = Mobius::disc_automorphism(ca.center, 0.0);
    let g = t.apply(cg.center);
    let theta = PI / 2.0 - g.im.atan2(g.re);
    let m = Mobius::disc_automorphism(Complex64::new(0.0, 0.0), theta).compose(&t);
    Ok((p.transform(&m)?, m))
}

/// Disc automorphism placing the centers of `v1`, `v2` at -it, +it on the
/// imaginary axis, hyperbolically symmetric about the origin.
pub fn normalize_imaginary_axis(
    p: &Packing,
    v1: Vertex,
    v2: Vertex,
) -> Result<(Packing, Mobius), LayoutError> {
    let z1 = p.require(v1)?.center;
    let z2 = p.require(v2)?.center;
    if hyp_dist(z1, z2) < 1e-12 {
        return Err(LayoutError::CoincidentCenters);
    }
    let t = Mobius::disc_automorphism(hyp_midpoint(z1, z2), 0.0);
    let w2 = t.apply(z2);
    let theta = PI / 2.0 - w2.im.atan2(w2.re);
    let m = Mobius::disc_automorphism(Complex64::new(0.0, 0.0), theta).compose(&t);
    Ok((p.transform(&m)?, m))
}

/// Winding number of a closed polyline about a point; each segment must
/// subtend less than a half turn. Fails when the total is not within 0.05
/// turns of an integer.
pub fn winding_number(points: &[Complex64], about: Complex64) -> Result<i64, LayoutError> {
    let n = points.len();
    if n < 3 {
        return Err(LayoutError::NonIntegralWinding(0.0));
    }
    let mut total = 0.0;
    for i in 0..n {
        let a = points[i] - about;
        let b = points[(i + 1) % n] - about;
        if a.norm() < 1e-12 || b.norm() < 1e-12 {
            return Err(LayoutError::BranchValueOnCurve);
        }
        let q = b / a;
        total += q.im.atan2(q.re);
    }
    let turns = total / TAU;
    if (turns - turns.round()).abs() > 0.05 {
        return Err(LayoutError::NonIntegralWinding(turns));
    }
    Ok(turns.round() as i64)
}

/// Carrier polyline through a cyclic chain of circles: each circle's center
/// point (ideal point for horocycles) followed by its tangency point with
/// the next circle.
pub fn circle_chain_polyline(p: &Packing, cycle: &[Vertex]) -> Result<Vec<Complex64>, LayoutError> {
    let n = cycle.len();
    let mut pts = Vec::with_capacity(2 * n);
    for i in 0..n {
        let cu = p.require(cycle[i])?;
        let cv = p.require(cycle[(i + 1) % n])?;
        // For a horocycle `center` already holds the ideal point.
        pts.push(cu.center);
        let (eu, ev) = (cu.eucl, cv.eucl);
        let span = eu.radius + ev.radius;
        if span > 0.0 {
            pts.push(eu.center + (ev.center - eu.center) * (eu.radius / span));
        }
    }
    Ok(pts)
}

/// Winding of a boundary component's carrier curve about a point.
pub fn boundary_winding(
    p: &Packing,
    component: &[Vertex],
    about: Complex64,
) -> Result<i64, LayoutError> {
    let pts = circle_chain_polyline(p, component)?;
    winding_number(&pts, about)
}

/// Winding of a black hole's event horizon about the branch value (the
/// degenerate fall-guy point).
pub fn event_horizon_winding(p: &Packing, record: &BlackHoleRecord) -> Result<i64, LayoutError> {
    let value = p.require(record.fall_guy)?.eucl.center;
    let pts = circle_chain_polyline(p, &record.horizon)?;
    winding_number(&pts, value)
}

/// Boundary components as counterclockwise vertex cycles (interior on the
/// left), each rotated to start at its smallest vertex, sorted by that
/// vertex.
pub fn boundary_cycles(k: &Complex) -> Vec<Vec<Vertex>> {
    let mut next = std::collections::BTreeMap::new();
    for (u, v) in k.edges() {
        for (a, b) in [(u, v), (v, u)] {
            if k.face_with_directed_edge(a, b).is_some()
                && k.face_with_directed_edge(b, a).is_none()
            {
                next.insert(a, b);
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let starts: Vec<Vertex> = next.keys().copied().collect();
    for s in starts {
        if seen.contains(&s) {
            continue;
        }
        let mut cycle = vec![s];
        seen.insert(s);
        let mut cur = next[&s];
        while cur != s {
            cycle.push(cur);
            seen.insert(cur);
            cur = next[&cur];
        }
        out.push(cycle);
    }
    out
}
