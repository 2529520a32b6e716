//! Combinatorial triangulated surfaces: flowers, validation, and the
//! black-hole surgeries (singular and shifted) that host generalized branching.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex id, 1-based and contiguous.
pub type Vertex = usize;
/// Index into the face list.
pub type FaceId = usize;

/// Undirected edge key, normalized to (min, max).
pub fn edge_key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("face list is empty")]
    Empty,
    #[error("vertex ids must be contiguous from 1 (missing id {0})")]
    NonContiguous(Vertex),
    #[error("face {0} is degenerate (repeated vertex)")]
    DegenerateFace(FaceId),
    #[error("edge ({0},{1}) belongs to more than two faces")]
    NonManifold(Vertex, Vertex),
    #[error("directed edge ({0},{1}) appears in two faces: inconsistent orientation")]
    OrientationError(Vertex, Vertex),
    #[error("complex is not connected")]
    Disconnected,
    #[error("flower of vertex {0} is not a single chain or cycle")]
    PinchedVertex(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("edge ({0},{1}) is not an edge of the complex")]
    UnknownEdge(Vertex, Vertex),
    #[error("edge ({0},{1}) is a boundary edge")]
    BoundaryEdge(Vertex, Vertex),
    #[error("flip of ({0},{1}) would create a duplicate edge")]
    FlipWouldCreateDuplicateEdge(Vertex, Vertex),
    #[error("flip of ({0},{1}) would leave a vertex with fewer than 3 neighbors")]
    FlipWouldBreakDegree(Vertex, Vertex),
    #[error("vertex {0} is a boundary vertex")]
    BoundaryVertex(Vertex),
    #[error("result of surgery is not a manifold complex: {0}")]
    ResultNotManifold(String),
    #[error("face {0} has a boundary edge or boundary vertex")]
    BoundaryFace(FaceId),
    #[error("surgery region intersects an existing black hole")]
    AdjacentHoleOverlap,
    #[error("vertex {0} has fewer than 5 petals")]
    TooFewPetals(Vertex),
    #[error("jump petals {0} and {1} are equal or adjacent in the petal cycle")]
    JumpsAdjacent(Vertex, Vertex),
    #[error("vertex {0} is not a petal of the split vertex")]
    NotAPetal(Vertex),
}

/// Surface type, determined by Euler characteristic and boundary count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceType {
    Disc,
    Annulus,
    Torus,
    Sphere,
    Other {
        euler: i64,
        boundary_components: usize,
    },
}

/// Kind of black-hole surgery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlackHoleKind {
    Singular,
    Shifted,
}

/// Record of an inserted black hole: the auxiliary vertices and the horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlackHoleRecord {
    pub kind: BlackHoleKind,
    pub fall_guy: Vertex,
    pub chaperones: Vec<Vertex>,
    /// (t1, t2), shifted only.
    pub twins: Option<(Vertex, Vertex)>,
    /// (j1, j2), shifted only.
    pub jumps: Option<(Vertex, Vertex)>,
    /// For shifted: the petals (w1, w2) preceding the jumps.
    pub jump_predecessors: Option<(Vertex, Vertex)>,
    /// Singular: the face vertices (v1, v2, v3).
    pub anchors: Vec<Vertex>,
    /// Event horizon as a closed vertex cycle.
    pub horizon: Vec<Vertex>,
}

impl BlackHoleRecord {
    /// Rewrite every vertex id through `f`.
    pub fn remap(&self, f: &dyn Fn(Vertex) -> Vertex) -> BlackHoleRecord {
        let pair = |(a, b): (Vertex, Vertex)| (f(a), f(b));
        BlackHoleRecord {
            kind: self.kind.clone(),
            fall_guy: f(self.fall_guy),
            chaperones: self.chaperones.iter().map(|&v| f(v)).collect(),
            twins: self.twins.map(pair),
            jumps: self.jumps.map(pair),
            jump_predecessors: self.jump_predecessors.map(pair),
            anchors: self.anchors.iter().map(|&v| f(v)).collect(),
            horizon: self.horizon.iter().map(|&v| f(v)).collect(),
        }
    }

    /// All vertices strictly inside the horizon.
    pub fn interior_vertices(&self) -> Vec<Vertex> {
        let mut v = vec![self.fall_guy];
        v.extend(&self.chaperones);
        if let Some((t1, t2)) = self.twins {
            v.push(t1);
            v.push(t2);
        }
        if self.kind == BlackHoleKind::Singular {
            v.extend(&self.anchors);
        }
        v
    }
}

/// The flower of a vertex: its neighbors in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flower {
    pub petals: Vec<Vertex>,
    /// Closed iff the vertex is interior (cycle rather than chain).
    pub closed: bool,
}

/// An oriented simplicial 2-complex triangulating a surface.
///
/// Immutable after construction; surgeries return new values.
#[derive(Debug, Clone)]
pub struct Complex {
    faces: Vec<[Vertex; 3]>,
    vertex_count: usize,
    flowers: Vec<Flower>, // indexed by v-1
    boundary: Vec<bool>,  // indexed by v-1
    surface: SurfaceType,
    /// Map directed edge (u,v) -> face containing u->v.
    directed: HashMap<(Vertex, Vertex), FaceId>,
    surgeries: Vec<BlackHoleRecord>,
}

/// Build a validated complex from an oriented face list.
pub fn build_complex(faces: Vec<[Vertex; 3]>) -> Result<Complex, ComplexError> {
    Complex::new(faces, Vec::new())
}

impl Complex {
    fn new(mut faces: Vec<[Vertex; 3]>, surgeries: Vec<BlackHoleRecord>) -> Result<Self, ComplexError> {
        if faces.is_empty() {
            return Err(ComplexError::Empty);
        }
        // Canonical face order: rotate each face so its smallest vertex leads
        // (preserving orientation), then sort. Complexes with equal face sets
        // are then identical, so downstream numerics are order-independent.
        for f in faces.iter_mut() {
            let k = (0..3).min_by_key(|&k| f[k]).unwrap();
            f.rotate_left(k);
        }
        faces.sort_unstable();
        let mut max_v = 0;
        for (fi, f) in faces.iter().enumerate() {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] || f.contains(&0) {
                return Err(ComplexError::DegenerateFace(fi));
            }
            max_v = max_v.max(f[0]).max(f[1]).max(f[2]);
        }
        let vertex_count = max_v;
        let mut seen = vec![false; vertex_count];
        for f in &faces {
            for &v in f {
                seen[v - 1] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(ComplexError::NonContiguous(i + 1));
        }

        // Directed edges: each may appear in at most one face.
        let mut directed: HashMap<(Vertex, Vertex), FaceId> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                if directed.insert((u, v), fi).is_some() {
                    // Either a >2-face edge or an orientation clash.
                    return if directed.contains_key(&(v, u)) {
                        Err(ComplexError::NonManifold(u, v))
                    } else {
                        Err(ComplexError::OrientationError(u, v))
                    };
                }
            }
        }

        // Flowers via the counterclockwise successor map at each vertex.
        let mut succ: Vec<BTreeMap<Vertex, Vertex>> = vec![BTreeMap::new(); vertex_count];
        for f in &faces {
            for k in 0..3 {
                let (v, u, w) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
                if succ[v - 1].insert(u, w).is_some() {
                    return Err(ComplexError::PinchedVertex(v));
                }
            }
        }
        let mut flowers = Vec::with_capacity(vertex_count);
        let mut boundary = Vec::with_capacity(vertex_count);
        for v in 1..=vertex_count {
            let s = &succ[v - 1];
            let preds: BTreeSet<Vertex> = s.values().copied().collect();
            // Chain starts: neighbors with no predecessor.
            let starts: Vec<Vertex> = s.keys().filter(|k| !preds.contains(k)).copied().collect();
            let (start, closed) = match starts.len() {
                0 => (*s.keys().next().unwrap(), true),
                1 => (starts[0], false),
                _ => return Err(ComplexError::PinchedVertex(v)),
            };
            let mut petals = vec![start];
            let mut cur = start;
            loop {
                match s.get(&cur) {
                    Some(&next) => {
                        if next == start {
                            break; // closed cycle
                        }
                        if petals.contains(&next) {
                            return Err(ComplexError::PinchedVertex(v));
                        }
                        petals.push(next);
                        cur = next;
                    }
                    None => {
                        if closed {
                            return Err(ComplexError::PinchedVertex(v));
                        }
                        break;
                    }
                }
            }
            // Closed: one petal per incident face. Open: one extra petal.
            let want = if closed { s.len() } else { s.len() + 1 };
            if petals.len() != want {
                return Err(ComplexError::PinchedVertex(v));
            }
            boundary.push(!closed);
            flowers.push(Flower { petals, closed });
        }

        // Connectivity over the 1-skeleton.
        let mut visited = vec![false; vertex_count];
        let mut queue = VecDeque::from([1usize]);
        visited[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &p in &flowers[v - 1].petals {
                if !visited[p - 1] {
                    visited[p - 1] = true;
                    count += 1;
                    queue.push_back(p);
                }
            }
        }
        if count != vertex_count {
            return Err(ComplexError::Disconnected);
        }

        // Surface type from Euler characteristic and boundary components.
        let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
        for &(u, v) in directed.keys() {
            edges.insert(edge_key(u, v));
        }
        let euler = vertex_count as i64 - edges.len() as i64 + faces.len() as i64;
        let boundary_components = {
            // Each boundary vertex has a unique boundary successor: the last petal
            // of its open flower chain is its counterclockwise boundary neighbor.
            let mut comps = 0;
            let mut seen = vec![false; vertex_count];
            for v in 1..=vertex_count {
                if boundary[v - 1] && !seen[v - 1] {
                    comps += 1;
                    let mut cur = v;
                    loop {
                        seen[cur - 1] = true;
                        let next = *flowers[cur - 1].petals.last().unwrap();
                        if next == v {
                            break;
                        }
                        cur = next;
                    }
                }
            }
            comps
        };
        let surface = match (euler, boundary_components) {
            (1, 1) => SurfaceType::Disc,
            (0, 2) => SurfaceType::Annulus,
            (0, 0) => SurfaceType::Torus,
            (2, 0) => SurfaceType::Sphere,
            (e, b) => SurfaceType::Other {
                euler: e,
                boundary_components: b,
            },
        };

        Ok(Complex {
            faces,
            vertex_count,
            flowers,
            boundary,
            surface,
            directed,
            surgeries,
        })
    }

    /// Reattach surgery records to a complex rebuilt from its face list
    /// (file round trips). Every referenced vertex must exist.
    pub fn with_surgeries(self, surgeries: Vec<BlackHoleRecord>) -> Result<Complex, ComplexError> {
        for rec in &surgeries {
            for v in rec.interior_vertices().into_iter().chain(rec.horizon.iter().copied()) {
                self.check_vertex(v)?;
            }
        }
        Ok(Complex { surgeries, ..self })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn faces(&self) -> &[[Vertex; 3]] {
        &self.faces
    }

    pub fn surface(&self) -> SurfaceType {
        self.surface
    }

    pub fn surgeries(&self) -> &[BlackHoleRecord] {
        &self.surgeries
    }

    pub fn is_boundary(&self, v: Vertex) -> bool {
        self.boundary[v - 1]
    }

    pub fn is_interior(&self, v: Vertex) -> bool {
        !self.boundary[v - 1]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.vertex_count
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), ComplexError> {
        if v == 0 || v > self.vertex_count {
            Err(ComplexError::UnknownVertex(v))
        } else {
            Ok(())
        }
    }

    /// Counterclockwise petal list of `v`; closed iff interior.
    pub fn flower(&self, v: Vertex) -> Result<&Flower, ComplexError> {
        self.check_vertex(v)?;
        Ok(&self.flowers[v - 1])
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.flowers[v - 1].petals.len()
    }

    /// All undirected edges.
    pub fn edges(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.directed.keys().map(|&(u, v)| edge_key(u, v)).collect()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.directed.contains_key(&(u, v)) || self.directed.contains_key(&(v, u))
    }

    pub fn is_interior_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.directed.contains_key(&(u, v)) && self.directed.contains_key(&(v, u))
    }

    /// The face containing directed edge u->v, if any.
    pub fn face_with_directed_edge(&self, u: Vertex, v: Vertex) -> Option<FaceId> {
        self.directed.get(&(u, v)).copied()
    }

    /// The faces containing vertex `v`, as (prev petal, next petal) pairs in
    /// counterclockwise flower order: face = <v, p, q>.
    pub fn faces_at(&self, v: Vertex) -> Vec<(Vertex, Vertex)> {
        let fl = &self.flowers[v - 1];
        let n = fl.petals.len();
        let count = if fl.closed { n } else { n - 1 };
        (0..count)
            .map(|i| (fl.petals[i], fl.petals[(i + 1) % n]))
            .collect()
    }

    /// Dual adjacency: faces sharing an edge with `f`.
    pub fn face_neighbors(&self, f: FaceId) -> Vec<FaceId> {
        let fv = self.faces[f];
        let mut out = Vec::new();
        for k in 0..3 {
            let (u, v) = (fv[k], fv[(k + 1) % 3]);
            if let Some(&g) = self.directed.get(&(v, u)) {
                out.push(g);
            }
        }
        out
    }

    /// Replace interior edge `(u,v)` by the opposite diagonal of its quad.
    pub fn edge_flip(&self, u: Vertex, v: Vertex) -> Result<Complex, ComplexError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let f1 = self.directed.get(&(u, v)).copied();
        let f2 = self.directed.get(&(v, u)).copied();
        let (f1, f2) = match (f1, f2) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => return Err(ComplexError::UnknownEdge(u, v)),
            _ => return Err(ComplexError::BoundaryEdge(u, v)),
        };
        let apex = |fid: FaceId, a: Vertex, b: Vertex| {
            *self.faces[fid].iter().find(|&&x| x != a && x != b).unwrap()
        };
        let a = apex(f1, u, v); // face <u,v,a>
        let b = apex(f2, u, v); // face <v,u,b>
        if self.has_edge(a, b) {
            return Err(ComplexError::FlipWouldCreateDuplicateEdge(u, v));
        }
        if self.degree(u) <= 3 || self.degree(v) <= 3 {
            return Err(ComplexError::FlipWouldBreakDegree(u, v));
        }
        let mut faces = self.faces.clone();
        faces[f1] = [u, b, a];
        faces[f2] = [b, v, a];
        Complex::new(faces, self.surgeries.clone())
    }

    /// Remove interior vertex `v` and its faces; ids above `v` shift down by one.
    ///
    /// Returns the new complex and the old-to-new vertex map.
    pub fn puncture(&self, v: Vertex) -> Result<(Complex, VertexMap), ComplexError> {
        self.check_vertex(v)?;
        if self.is_boundary(v) {
            return Err(ComplexError::BoundaryVertex(v));
        }
        let map = VertexMap::removing(self.vertex_count, v);
        let faces: Vec<[Vertex; 3]> = self
            .faces
            .iter()
            .filter(|f| !f.contains(&v))
            .map(|f| [map.forward(f[0]).unwrap(), map.forward(f[1]).unwrap(), map.forward(f[2]).unwrap()])
            .collect();
        let k = Complex::new(faces, Vec::new())
            .map_err(|e| ComplexError::ResultNotManifold(e.to_string()))?;
        Ok((k, map))
    }

    /// Contract the interior edge (from, onto): every occurrence of `from`
    /// becomes `onto`, the two shared faces collapse and are dropped, and
    /// ids above `from` shift down by one. Stored surgery records are
    /// remapped the same way.
    pub fn contract_edge(
        &self,
        from: Vertex,
        onto: Vertex,
    ) -> Result<(Complex, VertexMap), ComplexError> {
        self.check_vertex(from)?;
        self.check_vertex(onto)?;
        if !self.is_interior_edge(from, onto) {
            return Err(ComplexError::ResultNotManifold(
                "contraction needs an interior edge".into(),
            ));
        }
        let map = VertexMap::removing(self.vertex_count, from);
        let rename = |v: Vertex| map.forward(if v == from { onto } else { v }).unwrap();
        let faces: Vec<[Vertex; 3]> = self
            .faces
            .iter()
            .filter(|f| !(f.contains(&from) && f.contains(&onto)))
            .map(|f| [rename(f[0]), rename(f[1]), rename(f[2])])
            .collect();
        let surgeries = self.surgeries.iter().map(|r| r.remap(&rename)).collect();
        let k = Complex::new(faces, surgeries)
            .map_err(|e| ComplexError::ResultNotManifold(e.to_string()))?;
        Ok((k, map))
    }

    fn hole_region_clear(&self, vertices: &[Vertex]) -> bool {
        for rec in &self.surgeries {
            let inside: BTreeSet<Vertex> = rec
                .interior_vertices()
                .into_iter()
                .chain(rec.horizon.iter().copied())
                .collect();
            if vertices.iter().any(|v| inside.contains(v)) {
                return false;
            }
        }
        true
    }

    /// Insert a singular black hole replacing face `f` and its three edge
    /// neighbors: chaperones h1,h2,h3 and fall guy g, per the pinned
    /// retriangulation (see FORMATS.md).
    pub fn insert_singular_blackhole(
        &self,
        f: FaceId,
    ) -> Result<(Complex, BlackHoleRecord), ComplexError> {
        let [v1, v2, v3] = *self
            .faces
            .get(f)
            .ok_or(ComplexError::UnknownVertex(0))?;
        for (a, b) in [(v1, v2), (v2, v3), (v3, v1)] {
            if !self.is_interior_edge(a, b) {
                return Err(ComplexError::BoundaryFace(f));
            }
        }
        // Apexes of the three neighbor faces: a_i opposite v_i.
        let apex = |a: Vertex, b: Vertex| -> Vertex {
            // neighbor face across edge (a,b) of <..a,b..> contains b->a
            let g = self.directed[&(b, a)];
            *self.faces[g].iter().find(|&&x| x != a && x != b).unwrap()
        };
        let a3 = apex(v1, v2);
        let a1 = apex(v2, v3);
        let a2 = apex(v3, v1);
        let region = [v1, v2, v3, a1, a2, a3];
        if region.iter().collect::<BTreeSet<_>>().len() != 6 {
            return Err(ComplexError::ResultNotManifold(
                "singular hole region is not an embedded hexagon".into(),
            ));
        }
        if !self.hole_region_clear(&region) {
            return Err(ComplexError::AdjacentHoleOverlap);
        }
        let n = self.vertex_count;
        let (h1, h2, h3, g) = (n + 1, n + 2, n + 3, n + 4);
        let removed: BTreeSet<FaceId> = [
            f,
            self.directed[&(v2, v1)],
            self.directed[&(v3, v2)],
            self.directed[&(v1, v3)],
        ]
        .into_iter()
        .collect();
        let mut faces: Vec<[Vertex; 3]> = self
            .faces
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, f)| *f)
            .collect();
        // Fall guy flower: (v1, h3, v2, h1, v3, h2) counterclockwise.
        faces.extend([
            [g, v1, h3],
            [g, h3, v2],
            [g, v2, h1],
            [g, h1, v3],
            [g, v3, h2],
            [g, h2, v1],
            // Chaperone fans to the horizon apexes.
            [h3, v1, a3],
            [h3, a3, v2],
            [h1, v2, a1],
            [h1, a1, v3],
            [h2, v3, a2],
            [h2, a2, v1],
        ]);
        let record = BlackHoleRecord {
            kind: BlackHoleKind::Singular,
            fall_guy: g,
            chaperones: vec![h1, h2, h3],
            twins: None,
            jumps: None,
            jump_predecessors: None,
            anchors: vec![v1, v2, v3],
            horizon: vec![v1, a3, v2, a1, v3, a2],
        };
        let mut surgeries = self.surgeries.clone();
        surgeries.push(record.clone());
        let k = Complex::new(faces, surgeries)
            .map_err(|e| ComplexError::ResultNotManifold(e.to_string()))?;
        Ok((k, record))
    }

    /// Insert a shifted black hole at interior vertex `v` with jump petals
    /// `j1`, `j2`: v is split into twins t1, t2 guided by chaperones h1, h2
    /// around fall guy g.
    pub fn insert_shifted_blackhole(
        &self,
        v: Vertex,
        j1: Vertex,
        j2: Vertex,
    ) -> Result<(Complex, BlackHoleRecord), ComplexError> {
        self.check_vertex(v)?;
        if self.is_boundary(v) {
            return Err(ComplexError::BoundaryVertex(v));
        }
        let petals = self.flowers[v - 1].petals.clone();
        let n = petals.len();
        if n < 5 {
            return Err(ComplexError::TooFewPetals(v));
        }
        let pos = |x: Vertex| petals.iter().position(|&p| p == x);
        let (i1, i2) = match (pos(j1), pos(j2)) {
            (Some(a), Some(b)) => (a, b),
            (None, _) => return Err(ComplexError::NotAPetal(j1)),
            (_, None) => return Err(ComplexError::NotAPetal(j2)),
        };
        let dist = (i2 + n - i1) % n;
        if dist < 2 || dist > n - 2 {
            return Err(ComplexError::JumpsAdjacent(j1, j2));
        }
        let mut region = petals.clone();
        region.push(v);
        if !self.hole_region_clear(&region) {
            return Err(ComplexError::AdjacentHoleOverlap);
        }
        let w1 = petals[(i1 + n - 1) % n];
        let w2 = petals[(i2 + n - 1) % n];
        let base = self.vertex_count;
        let t1 = v; // reuse the split vertex id for the first twin
        let (t2, h1, h2, g) = (base + 1, base + 2, base + 3, base + 4);

        let removed: BTreeSet<FaceId> = (0..n).map(|i| self.directed[&(v, petals[i])]).collect();
        let mut faces: Vec<[Vertex; 3]> = self
            .faces
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, f)| *f)
            .collect();
        // Fall guy flower: (t1, h1, t2, h2) counterclockwise.
        faces.extend([[g, t1, h1], [g, h1, t2], [g, t2, h2], [g, h2, t1]]);
        // Arc j1..w2 attaches to t2; arc j2..w1 attaches to t1.
        let arc = |from: usize, to: usize| -> Vec<Vertex> {
            let mut out = Vec::new();
            let mut i = from;
            loop {
                out.push(petals[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % n;
            }
            out
        };
        let arc2 = arc(i1, (i2 + n - 1) % n); // j1..w2
        let arc1 = arc(i2, (i1 + n - 1) % n); // j2..w1
        for pair in arc2.windows(2) {
            faces.push([t2, pair[0], pair[1]]);
        }
        for pair in arc1.windows(2) {
            faces.push([t1, pair[0], pair[1]]);
        }
        faces.extend([
            [t2, h1, j1],
            [t2, w2, h2],
            [t1, h2, j2],
            [t1, w1, h1],
            [h1, w1, j1],
            [h2, w2, j2],
        ]);
        let record = BlackHoleRecord {
            kind: BlackHoleKind::Shifted,
            fall_guy: g,
            chaperones: vec![h1, h2],
            twins: Some((t1, t2)),
            jumps: Some((j1, j2)),
            jump_predecessors: Some((w1, w2)),
            anchors: vec![],
            horizon: petals,
        };
        let mut surgeries = self.surgeries.clone();
        surgeries.push(record.clone());
        let k = Complex::new(faces, surgeries)
            .map_err(|e| ComplexError::ResultNotManifold(e.to_string()))?;
        Ok((k, record))
    }
}

/// Map from old vertex ids to new after a vertex removal.
#[derive(Debug, Clone)]
pub struct VertexMap {
    removed: Vertex,
    old_count: usize,
}

impl VertexMap {
    fn removing(old_count: usize, removed: Vertex) -> Self {
        VertexMap { removed, old_count }
    }

    pub fn forward(&self, old: Vertex) -> Option<Vertex> {
        if old == self.removed {
            None
        } else if old < self.removed {
            Some(old)
        } else {
            Some(old - 1)
        }
    }

    pub fn backward(&self, new: Vertex) -> Vertex {
        if new < self.removed {
            new
        } else {
            new + 1
        }
    }

    pub fn old_count(&self) -> usize {
        self.old_count
    }
}
