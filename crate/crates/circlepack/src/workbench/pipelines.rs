//! The named function pipelines: discrete Blaschke products on discs,
//! discrete Ahlfors functions on annuli (with optional holonomy repair),
//! and the discrete Weierstrass function on tori.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branching::{
    annihilate_holonomy, build_branched, Annihilation, BranchError, BranchSpec, Branched,
    ScanSample, ShiftedFamily,
};
use crate::complex::{Complex, ComplexError, FaceId, SurfaceType, Vertex};
use crate::geometry::sphere::{stereographic_circle, SphericalCircle};
use crate::geometry::{tol, EuclCircle, GeomError, Geometry, Mobius};
use crate::layout::{
    boundary_cycles, boundary_winding, develop, face_chain_from_vertex_loop, holonomy,
    packing_residual, Holonomy, LayoutError, Packing,
};
use crate::solver::{
    angle_sum, check_star_flowers, check_star_star, max_label, solve_label, BoundaryCondition,
    Label, OverlapMap, PinnedZeros, SolverError, TargetAngles,
};
use crate::solver::SolveOptions;

pub const SCHEMA: &str = "cpb-1";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("complex is not a {0}")]
    WrongSurface(&'static str),
    #[error("holonomy is nontrivial: displacement {displacement}")]
    HolonomyNontrivial { displacement: f64 },
    #[error("winding mismatch: expected {expected}, got {got}")]
    WindingMismatch { expected: i64, got: i64 },
    #[error("boundary components are not connected through the interior")]
    NoCrossCut,
    #[error("boundary face has no interior apex at edge ({0}, {1})")]
    BoundaryApex(Vertex, Vertex),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// (*) / (**) re-validation results embedded in every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Preflight {
    pub star_star_violations: Vec<FaceId>,
    pub star_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolonomySummary {
    pub name: String,
    pub displacement: f64,
    pub deviation: f64,
}

/// Pipeline-specific numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PipelineDetail {
    Blaschke {
        /// Image / domain euclidean radius of the central circle (discrete
        /// Schwarz: at most 1).
        schwarz_ratio: f64,
        /// Image / domain hyperbolic radius at each traditional branch
        /// vertex.
        branch_radius_ratios: Vec<f64>,
    },
    Ahlfors {
        /// Conformal modulus of the domain annulus, from the deck
        /// transformation's translation length l: r = exp(-pi^2 / l).
        modulus: f64,
        /// Dial value found by the repair search, when one ran.
        repair_gamma1: Option<f64>,
        /// Worst |m(z) - z| over the cross-cut circle centers, m the loop
        /// holonomy in the normalized frame.
        cross_cut_mismatch: f64,
        /// Coarse-scan trace of the repair search.
        scan: Vec<ScanSample>,
    },
    Weierstrass {
        boundary_winding: i64,
        /// Worst spherical tangency residual between the adjoined
        /// hemisphere cap and the former neighbors of the punctured vertex.
        tangency_residual: f64,
        /// Antipodality residuals of the branch pairs (v1, v4) and
        /// (v2, v3): |c_a + c_b| + |r_a - r_b| on the sphere.
        antipodal_residuals: Vec<f64>,
        /// Plane rescaling applied before stereographic projection.
        scale: f64,
    },
}

/// Deterministic summary of one pipeline run. Artifact paths are filled in
/// by whoever writes the files (the CLI); the library leaves them empty.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema: String,
    pub function: String,
    pub normalization: String,
    pub checks: Preflight,
    pub sweeps: usize,
    pub solver_residual: f64,
    pub packing_residual: f64,
    pub branch_vertices: Vec<Vertex>,
    /// Branch values in the normalized image plane (traditional centers and
    /// fall-guy points).
    pub branch_values: Vec<Complex64>,
    pub angle_sums: Vec<(Vertex, f64)>,
    pub windings: Vec<i64>,
    pub holonomies: Vec<HolonomySummary>,
    pub artifacts: BTreeMap<String, String>,
    pub detail: PipelineDetail,
}

fn preflight(
    k: &Complex,
    phi: &OverlapMap,
    targets: &TargetAngles,
    pinned: &PinnedZeros,
) -> Preflight {
    Preflight {
        star_star_violations: check_star_star(k, phi),
        star_ok: check_star_flowers(k, phi, targets, pinned).is_ok(),
    }
}

/// Interior vertex loop homotopic to the first boundary component: the
/// cycle of interior vertices adjacent to it, walked through adjacencies
/// inside that set (smallest start, smallest-first tie break).
pub fn core_loop(k: &Complex) -> Result<Vec<Vertex>, PipelineError> {
    let comps = boundary_cycles(k);
    let b = comps
        .first()
        .ok_or(PipelineError::WrongSurface("surface with boundary"))?;
    let bset: BTreeSet<Vertex> = b.iter().copied().collect();
    let mut ring: BTreeSet<Vertex> = BTreeSet::new();
    for v in k.vertices() {
        if k.is_interior(v) && k.flower(v)?.petals.iter().any(|p| bset.contains(p)) {
            ring.insert(v);
        }
    }
    let &start = ring.first().ok_or(PipelineError::NoCrossCut)?;
    let mut out = vec![start];
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    seen.insert(start);
    let mut cur = start;
    loop {
        let next = k
            .flower(cur)?
            .petals
            .iter()
            .copied()
            .filter(|p| ring.contains(p) && !seen.contains(p))
            .min();
        match next {
            Some(n) => {
                out.push(n);
                seen.insert(n);
                cur = n;
            }
            None => break,
        }
    }
    // The walk must close up into the full ring cycle.
    if out.len() != ring.len() || !k.has_edge(cur, start) || out.len() < 3 {
        return Err(PipelineError::NoCrossCut);
    }
    Ok(out)
}

/// Shortest vertex path between the first two boundary components.
pub fn cross_cut_path(k: &Complex) -> Result<Vec<Vertex>, PipelineError> {
    let comps = boundary_cycles(k);
    if comps.len() < 2 {
        return Err(PipelineError::WrongSurface("annulus"));
    }
    let target: BTreeSet<Vertex> = comps[1].iter().copied().collect();
    let mut prev: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut queue: VecDeque<Vertex> = VecDeque::new();
    for &s in &comps[0] {
        prev.insert(s, s);
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        if target.contains(&v) {
            let mut path = vec![v];
            let mut cur = v;
            while prev[&cur] != cur {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Ok(path);
        }
        for &u in &k.flower(v)?.petals {
            prev.entry(u).or_insert_with(|| {
                queue.push_back(u);
                v
            });
        }
    }
    Err(PipelineError::NoCrossCut)
}

/// In-frame holonomy displacement at the first loop circle's center.
fn frame_displacement(
    h: &Holonomy,
    p: &Packing,
    base: Vertex,
) -> Result<(Mobius, f64), PipelineError> {
    let m = h.in_frame(p)?;
    let z0 = p.require(base)?.center;
    Ok((m.clone(), m.displacement(z0)))
}

/// Normalized branch value of one spec: traditional vertex center, or the
/// hole's fall-guy point.
fn branch_value(b: &Branched, p: &Packing, spec: &BranchSpec, hole: &mut usize) -> Complex64 {
    match spec {
        BranchSpec::Traditional { v, .. } => p.circle(*v).map(|c| c.center).unwrap_or_default(),
        _ => {
            let rec = &b.records[*hole];
            *hole += 1;
            p.circle(rec.fall_guy).map(|c| c.eucl.center).unwrap_or_default()
        }
    }
}

fn branch_vertex(spec: &BranchSpec) -> Vertex {
    match spec {
        BranchSpec::Traditional { v, .. } => *v,
        BranchSpec::Singular { face, .. } => face[0],
        BranchSpec::Shifted { v, .. } => *v,
    }
}

/// Everything a Blaschke run produces: the maximal (domain) packing and the
/// branched (image) packing, both normalized in the disc.
#[derive(Debug, Clone)]
pub struct BlaschkeOutput {
    pub report: PipelineReport,
    pub domain_label: Label,
    pub domain: Packing,
    pub branched: Branched,
    pub image: Packing,
}

/// Discrete Blaschke product on a disc complex: the maximal packing is the
/// domain, the packing branched per `specs` is the image; both are
/// normalized with `alpha` at the origin and a fixed boundary horocycle at i.
pub fn blaschke(
    k: &Complex,
    specs: &[BranchSpec],
    alpha: Vertex,
    opts: &SolveOptions,
) -> Result<BlaschkeOutput, PipelineError> {
    if k.surface() != SurfaceType::Disc {
        return Err(PipelineError::WrongSurface("disc"));
    }
    let comps = boundary_cycles(k);
    let gamma = comps[0][0];
    let (domain_label, _) = max_label(k, opts)?;
    let (domain, _) = crate::layout::normalize_disc(&develop(k, &domain_label, &OverlapMap::tangency())?, alpha, gamma)?;

    let b = build_branched(k, specs, Geometry::Hyperbolic, &BoundaryCondition::horocycles(), opts)?;
    let checks = preflight(&b.complex, &b.phi, &b.targets, &b.pinned);
    let (image, _) = crate::layout::normalize_disc(&b.packing, alpha, gamma)?;

    let origin = Complex64::new(0.0, 0.0);
    let windings = vec![
        boundary_winding(&domain, &comps[0], origin)?,
        boundary_winding(&image, &comps[0], origin)?,
    ];
    let mut angle_sums = Vec::new();
    let mut ratios = Vec::new();
    for spec in specs {
        if let BranchSpec::Traditional { v, .. } = spec {
            angle_sums.push((*v, angle_sum(&b.complex, &b.label, &b.phi, *v)?));
            ratios.push(b.label.get(*v) / domain_label.get(*v));
        }
    }
    let mut hole = 0usize;
    let branch_values = specs.iter().map(|s| branch_value(&b, &image, s, &mut hole)).collect();
    let schwarz_ratio =
        image.require(alpha)?.eucl.radius / domain.require(alpha)?.eucl.radius;
    let report = PipelineReport {
        schema: SCHEMA.to_string(),
        function: "blaschke".to_string(),
        normalization: format!("disc(alpha={alpha}, gamma={gamma})"),
        checks,
        sweeps: b.report.sweeps,
        solver_residual: b.report.residual,
        packing_residual: b.diagnostics.residual,
        branch_vertices: specs.iter().map(branch_vertex).collect(),
        branch_values,
        angle_sums,
        windings,
        holonomies: Vec::new(),
        artifacts: BTreeMap::new(),
        detail: PipelineDetail::Blaschke {
            schwarz_ratio,
            branch_radius_ratios: ratios,
        },
    };
    Ok(BlaschkeOutput {
        report,
        domain_label,
        domain,
        branched: b,
        image,
    })
}

/// Repair mode for the Ahlfors pipeline.
#[derive(Debug, Clone)]
pub enum AhlforsRepair {
    /// Traditional branching at both vertices; fails when the loop holonomy
    /// is nontrivial.
    None,
    /// Traditional at v1, one-parameter shifted family at v2 searched until
    /// the loop holonomy vanishes.
    ShiftedSearch(ShiftedFamily),
}

#[derive(Debug, Clone)]
pub struct AhlforsOutput {
    pub report: PipelineReport,
    pub branched: Branched,
    pub image: Packing,
    pub holonomy: Holonomy,
    pub annihilation: Option<Annihilation>,
}

/// Discrete Ahlfors function on an annulus complex: branch at the two
/// interior vertices, require trivial holonomy around the core loop (or
/// repair it), and normalize the branch circles onto the imaginary axis.
pub fn ahlfors(
    k: &Complex,
    v1: Vertex,
    v2: Vertex,
    repair: AhlforsRepair,
    opts: &SolveOptions,
) -> Result<AhlforsOutput, PipelineError> {
    if k.surface() != SurfaceType::Annulus {
        return Err(PipelineError::WrongSurface("annulus"));
    }
    let loop_vertices = core_loop(k)?;

    // Domain modulus from the maximal packing's deck transformation.
    let (domain_label, _) = max_label(k, opts)?;
    let chain = face_chain_from_vertex_loop(k, &loop_vertices)?;
    let deck = holonomy(k, &domain_label, &OverlapMap::tangency(), &chain)?;
    let modulus = (-PI * PI / deck.map.translation_length()).exp();

    let repaired = matches!(repair, AhlforsRepair::ShiftedSearch(_));
    let (b, h, annihilation, repair_gamma1, scan) = match repair {
        AhlforsRepair::None => {
            let specs = [
                BranchSpec::Traditional { v: v1, order: 1 },
                BranchSpec::Traditional { v: v2, order: 1 },
            ];
            let b = build_branched(
                k,
                &specs,
                Geometry::Hyperbolic,
                &BoundaryCondition::horocycles(),
                opts,
            )?;
            let chain = face_chain_from_vertex_loop(&b.complex, &loop_vertices)?;
            let h = holonomy(&b.complex, &b.label, &b.phi, &chain)?;
            let (_, displacement) = frame_displacement(&h, &b.packing, loop_vertices[0])?;
            if displacement >= tol::HOLONOMY {
                return Err(PipelineError::HolonomyNontrivial { displacement });
            }
            (b, h, None, None, Vec::new())
        }
        AhlforsRepair::ShiftedSearch(family) => {
            let fixed = [BranchSpec::Traditional { v: v1, order: 1 }];
            let ann = annihilate_holonomy(
                k,
                &fixed,
                &family,
                &loop_vertices,
                &BoundaryCondition::horocycles(),
                tol::HOLONOMY,
                opts,
            )?;
            let gamma1 = ann.gamma1;
            let scan = ann.scan.clone();
            let b = ann.branched.clone();
            let h = ann.holonomy.clone();
            (b, h, Some(ann), Some(gamma1), scan)
        }
    };
    let checks = preflight(&b.complex, &b.phi, &b.targets, &b.pinned);
    let (image, _) = crate::layout::normalize_imaginary_axis(&b.packing, v1, v2)?;

    let origin = Complex64::new(0.0, 0.0);
    let comps = boundary_cycles(&b.complex);
    let windings = comps
        .iter()
        .map(|c| boundary_winding(&image, c, origin))
        .collect::<Result<Vec<_>, _>>()?;

    // Cross-cut mismatch: the loop holonomy, conjugated into the normalized
    // frame, applied along a boundary-to-boundary path of circle centers.
    let (m, displacement) = frame_displacement(&h, &image, loop_vertices[0])?;
    let path = cross_cut_path(&b.complex)?;
    let mut mismatch: f64 = 0.0;
    for &v in &path {
        let z = image.require(v)?.eucl.center;
        mismatch = mismatch.max((m.apply(z) - z).norm());
    }

    let mut angle_sums = vec![(v1, angle_sum(&b.complex, &b.label, &b.phi, v1)?)];
    if !repaired {
        angle_sums.push((v2, angle_sum(&b.complex, &b.label, &b.phi, v2)?));
    }
    let mut branch_values = vec![image.require(v1)?.center];
    for rec in &b.records {
        branch_values.push(image.require(rec.fall_guy)?.eucl.center);
    }
    if b.records.is_empty() {
        branch_values.push(image.require(v2)?.center);
    }

    let report = PipelineReport {
        schema: SCHEMA.to_string(),
        function: "ahlfors".to_string(),
        normalization: format!("imaginary_axis(v1={v1}, v2={v2})"),
        checks,
        sweeps: b.report.sweeps,
        solver_residual: b.report.residual,
        packing_residual: packing_residual(&b.complex, &image, &b.phi),
        branch_vertices: vec![v1, v2],
        branch_values,
        angle_sums,
        windings,
        holonomies: vec![
            HolonomySummary {
                name: "domain_deck".to_string(),
                displacement: deck.displacement,
                deviation: deck.deviation,
            },
            HolonomySummary {
                name: "image_loop".to_string(),
                displacement,
                deviation: h.deviation,
            },
        ],
        artifacts: BTreeMap::new(),
        detail: PipelineDetail::Ahlfors {
            modulus,
            repair_gamma1,
            cross_cut_mismatch: mismatch,
            scan,
        },
    };
    Ok(AhlforsOutput {
        report,
        branched: b,
        image,
        holonomy: h,
        annihilation,
    })
}

#[derive(Debug, Clone)]
pub struct WeierstrassOutput {
    pub report: PipelineReport,
    /// The punctured complex.
    pub complex: Complex,
    /// The orbit in punctured ids; the fourth entry is gone and reported as
    /// the adjoined hemisphere.
    pub branch_vertices: [Vertex; 3],
    pub label: Label,
    /// Normalized disc packing (before the spherical rescale).
    pub packing: Packing,
    /// Plane rescale applied before stereographic projection.
    pub scale: f64,
    /// Spherical circles by punctured vertex id (1-based, index 0 unused).
    pub sphere: Vec<Option<SphericalCircle>>,
    /// The adjoined complementary-hemisphere circle standing in for v4.
    pub v4_cap: SphericalCircle,
}

/// Discrete Weierstrass function on a torus complex: puncture v4, branch at
/// v1..v3, develop in the disc, and project stereographically with v4
/// adjoined as the complementary hemisphere.
pub fn weierstrass(
    k: &Complex,
    orbit: [Vertex; 4],
    loops: [&[Vertex]; 2],
    opts: &SolveOptions,
) -> Result<WeierstrassOutput, PipelineError> {
    if k.surface() != SurfaceType::Torus {
        return Err(PipelineError::WrongSurface("torus"));
    }
    let (kp, vm) = k.puncture(orbit[3])?;
    let remap = |v: Vertex| vm.forward(v).ok_or(ComplexError::UnknownVertex(v));
    let branch_vertices = [remap(orbit[0])?, remap(orbit[1])?, remap(orbit[2])?];

    let phi = OverlapMap::tangency();
    let mut targets = TargetAngles::flat();
    for &v in &branch_vertices {
        targets.set(v, 2.0 * TAU);
    }
    let pinned = PinnedZeros::new();
    let checks = preflight(&kp, &phi, &targets, &pinned);
    let (label, report) = solve_label(
        &kp,
        Geometry::Hyperbolic,
        &phi,
        &targets,
        &BoundaryCondition::horocycles(),
        &pinned,
        opts,
    )?;
    let packing = develop(&kp, &label, &phi)?;

    // Both genus generators must have trivial holonomy; a counterexample
    // is a loud failure, not a warning.
    let mut holonomies = Vec::new();
    for (i, lp) in loops.iter().enumerate() {
        let lp: Vec<Vertex> = lp.iter().map(|&v| remap(v)).collect::<Result<_, _>>()?;
        let chain = face_chain_from_vertex_loop(&kp, &lp)?;
        let h = holonomy(&kp, &label, &phi, &chain)?;
        let (_, displacement) = frame_displacement(&h, &packing, lp[0])?;
        if displacement + h.deviation >= tol::HOLONOMY {
            return Err(PipelineError::HolonomyNontrivial { displacement });
        }
        holonomies.push(HolonomySummary {
            name: format!("generator_{}", i + 1),
            displacement,
            deviation: h.deviation,
        });
    }

    let comps = boundary_cycles(&kp);
    let gamma = comps[0][0];
    let (norm, _) = crate::layout::normalize_disc(&packing, branch_vertices[0], gamma)?;
    let origin = Complex64::new(0.0, 0.0);
    let winding = boundary_winding(&norm, &comps[0], origin)?;
    if winding != 2 {
        return Err(PipelineError::WindingMismatch {
            expected: 2,
            got: winding,
        });
    }

    // Rescale so v1's circle (radius rho at the origin) and the adjoined
    // complement of the image disc project to exactly antipodal caps.
    let rho = norm.require(branch_vertices[0])?.eucl.radius;
    let scale = 1.0 / rho.sqrt();
    let mut sphere: Vec<Option<SphericalCircle>> = vec![None; kp.vertex_count() + 1];
    for v in kp.vertices() {
        if let Some(c) = norm.circle(v) {
            let e = EuclCircle::new(c.eucl.center * scale, c.eucl.radius * scale);
            sphere[v] = Some(stereographic_circle(&e, true));
        }
    }
    let v4_cap = stereographic_circle(&EuclCircle::new(origin, scale), false);

    let mut tangency_residual: f64 = 0.0;
    for &v in &comps[0] {
        let c = sphere[v].as_ref().unwrap();
        tangency_residual = tangency_residual.max(v4_cap.tangency_residual(c));
    }
    let antipodal = |a: &SphericalCircle, b: &SphericalCircle| {
        let d = [
            a.center[0] + b.center[0],
            a.center[1] + b.center[1],
            a.center[2] + b.center[2],
        ];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() + (a.radius - b.radius).abs()
    };
    let s1 = sphere[branch_vertices[0]].as_ref().unwrap();
    let s2 = sphere[branch_vertices[1]].as_ref().unwrap();
    let s3 = sphere[branch_vertices[2]].as_ref().unwrap();
    let antipodal_residuals = vec![antipodal(s1, &v4_cap), antipodal(s2, s3)];

    let mut angle_sums = Vec::new();
    for &v in &branch_vertices {
        angle_sums.push((v, angle_sum(&kp, &label, &phi, v)?));
    }
    let branch_values = branch_vertices
        .iter()
        .map(|&v| norm.require(v).map(|c| c.center * scale))
        .collect::<Result<Vec<_>, _>>()?;

    let report = PipelineReport {
        schema: SCHEMA.to_string(),
        function: "weierstrass".to_string(),
        normalization: format!(
            "disc(alpha={}, gamma={gamma}) then scale({scale:.17e})",
            branch_vertices[0]
        ),
        checks,
        sweeps: report.sweeps,
        solver_residual: report.residual,
        packing_residual: packing_residual(&kp, &norm, &phi),
        branch_vertices: branch_vertices.to_vec(),
        branch_values,
        angle_sums,
        windings: vec![winding],
        holonomies,
        artifacts: BTreeMap::new(),
        detail: PipelineDetail::Weierstrass {
            boundary_winding: winding,
            tangency_residual,
            antipodal_residuals,
            scale,
        },
    };
    Ok(WeierstrassOutput {
        report,
        complex: kp,
        branch_vertices,
        label,
        packing: norm,
        scale,
        sphere,
        v4_cap,
    })
}
