//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with --nocapture, and always on failure).

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use circlepack::branching::{
    build_branched, restricted_label_distance, singular_params, BranchSpec,
};
use circlepack::complex::{Complex, Vertex};
use circlepack::geometry::{
    edge_length, face_angle, hyp_dist, measured_overlap, realize_triple, Circle, Geometry,
};
use circlepack::layout::Packing;
use circlepack::solver::{
    max_label, solve_label, BoundaryCondition, Label, OverlapMap, PinnedZeros, SolveOptions,
    TargetAngles,
};
use circlepack::workbench::generators::{
    annulus_midline_row, annulus_vertex, broken_annulus, gen_annulus, gen_disc, gen_torus,
    torus_vertex,
};
use circlepack::workbench::pipelines::{
    ahlfors, blaschke, weierstrass, AhlforsRepair, PipelineDetail,
};
use circlepack::branching::ShiftedFamily;

fn criterion(n: usize, desc: &str, f: impl FnOnce() -> Result<(), String>) {
    match f() {
        Ok(()) => println!("criterion {n} ({desc}): PASS"),
        Err(e) => {
            println!("criterion {n} ({desc}): FAIL - {e}");
            panic!("criterion {n} ({desc}) failed: {e}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn err<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Random overlap triple with sum at most pi; `deep` allows entries past
/// pi/2.
fn random_overlaps(rng: &mut ChaCha8Rng, deep: bool) -> [f64; 3] {
    let hi = if deep { PI } else { PI / 2.0 };
    loop {
        let p = [
            rng.gen_range(0.0..hi),
            rng.gen_range(0.0..hi),
            rng.gen_range(0.0..hi),
        ];
        if p.iter().sum::<f64>() <= PI {
            return p;
        }
    }
}

#[test]
fn criterion_01_trig_oracle() {
    criterion(1, "trig kernel round trip vs oracle", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for geom in [Geometry::Euclidean, Geometry::Hyperbolic] {
            for _ in 0..1000 {
                let radii = match geom {
                    Geometry::Euclidean => [
                        rng.gen_range(0.1..5.0),
                        rng.gen_range(0.1..5.0),
                        rng.gen_range(0.1..5.0),
                    ],
                    Geometry::Hyperbolic => [
                        rng.gen_range(0.05..2.0),
                        rng.gen_range(0.05..2.0),
                        rng.gen_range(0.05..2.0),
                    ],
                };
                let overlaps = random_overlaps(&mut rng, false);
                let cs = err(realize_triple(geom, radii, overlaps))?;
                // Round trip: measured overlaps and center distances.
                for (i, (a, b)) in [(0, 1), (1, 2), (2, 0)].iter().enumerate() {
                    let m = measured_overlap(&cs[*a].eucl, &cs[*b].eucl);
                    ensure!(
                        (m - overlaps[i]).abs() < 1e-10,
                        "overlap mismatch {m} vs {}",
                        overlaps[i]
                    );
                    let want = err(edge_length(geom, radii[*a], radii[*b], overlaps[i]))?;
                    let got = match geom {
                        Geometry::Euclidean => (cs[*a].center - cs[*b].center).norm(),
                        Geometry::Hyperbolic => hyp_dist(cs[*a].center, cs[*b].center),
                    };
                    ensure!((got - want).abs() < 1e-10, "length mismatch {got} vs {want}");
                }
                // Angle sums of the realized triangle.
                let [r1, r2, r3] = radii;
                let [p12, p23, p31] = overlaps;
                let a1 = err(face_angle(geom, r1, r2, r3, p12, p31, p23))?;
                let a2 = err(face_angle(geom, r2, r3, r1, p23, p12, p31))?;
                let a3 = err(face_angle(geom, r3, r1, r2, p31, p23, p12))?;
                let s = a1 + a2 + a3;
                match geom {
                    Geometry::Euclidean => {
                        ensure!((s - PI).abs() < 1e-12, "euclidean angle sum {s}")
                    }
                    Geometry::Hyperbolic => ensure!(s < PI, "hyperbolic angle sum {s}"),
                }
            }
        }
        let dt = start.elapsed();
        ensure!(dt.as_secs_f64() < 5.0, "too slow: {dt:?}");
        Ok(())
    });
}

#[test]
fn criterion_02_lemma1_monotonicity() {
    criterion(2, "face angle strictly decreasing in own radius", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for i in 0..1000 {
            let geom = if i % 2 == 0 {
                Geometry::Euclidean
            } else {
                Geometry::Hyperbolic
            };
            let r = rng.gen_range(0.05..3.0);
            let ra = rng.gen_range(0.05..3.0);
            // Every tenth configuration pins one neighbor radius to zero.
            let rb = if i % 10 == 9 {
                0.0
            } else {
                rng.gen_range(0.05..3.0)
            };
            let [pa, pb, pab] = random_overlaps(&mut rng, true);
            let h = 1e-3 * r;
            let a0 = err(face_angle(geom, r, ra, rb, pa, pb, pab))?;
            let a1 = err(face_angle(geom, r + h, ra, rb, pa, pb, pab))?;
            ensure!(
                a1 < a0,
                "not decreasing: geom {geom:?} r {r} ra {ra} rb {rb} phi \
                 ({pa},{pb},{pab}): {a0} -> {a1}"
            );
        }
        Ok(())
    });
}

fn wheel(petals: usize) -> Complex {
    let faces: Vec<[Vertex; 3]> = (0..petals)
        .map(|i| [1, 2 + i, 2 + (i + 1) % petals])
        .collect();
    circlepack::complex::build_complex(faces).unwrap()
}

fn solve_wheel(petals: usize, target: f64) -> Result<f64, String> {
    let k = wheel(petals);
    let mut targets = TargetAngles::flat();
    targets.set(1, target);
    let (label, _) = err(solve_label(
        &k,
        Geometry::Euclidean,
        &OverlapMap::tangency(),
        &targets,
        &BoundaryCondition::uniform_radius(1.0),
        &PinnedZeros::new(),
        &SolveOptions {
            tol: 1e-10,
            ..SolveOptions::default()
        },
    ))?;
    Ok(label.get(1))
}

#[test]
fn criterion_03_solver_closed_forms() {
    criterion(3, "pentagon/heptagon/branched flower closed forms", || {
        for (petals, target, want) in [
            (5, TAU, 1.0 / (PI / 5.0).sin() - 1.0),
            (7, TAU, 1.0 / (PI / 7.0).sin() - 1.0),
            (6, 2.0 * TAU, 1.0 / (PI / 3.0).sin() - 1.0),
        ] {
            let start = Instant::now();
            let got = solve_wheel(petals, target)?;
            ensure!(
                (got - want).abs() < 1e-8,
                "wheel({petals}) radius {got} vs {want}"
            );
            let dt = start.elapsed();
            ensure!(dt.as_secs_f64() < 1.0, "too slow: {dt:?}");
        }
        Ok(())
    });
}

#[test]
fn criterion_04_uniqueness_across_seeds() {
    criterion(4, "two seeds converge to the same label", || {
        let complexes: [Complex; 3] = [
            gen_disc(4).unwrap(),
            gen_annulus(5, 12).unwrap(),
            gen_torus(8, 8).unwrap(),
        ];
        for k in &complexes {
            let solve = |init: f64| -> Result<Label, String> {
                let opts = SolveOptions {
                    init_radius: init,
                    ..SolveOptions::default()
                };
                Ok(err(max_label(k, &opts))?.0)
            };
            let (a, b) = (solve(0.1)?, solve(10.0)?);
            for v in k.vertices() {
                let (x, y) = (a.get(v), b.get(v));
                if x.is_infinite() && y.is_infinite() {
                    continue;
                }
                ensure!((x - y).abs() < 1e-7, "vertex {v}: {x} vs {y}");
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_blaschke() {
    criterion(5, "Blaschke winding, angle sums, Schwarz", || {
        let start = Instant::now();
        let k = gen_disc(4).unwrap();
        let specs = [
            BranchSpec::Traditional { v: 2, order: 1 },
            BranchSpec::Traditional { v: 7, order: 1 },
        ];
        let opts = SolveOptions {
            tol: 1e-9,
            ..SolveOptions::default()
        };
        let out = err(blaschke(&k, &specs, 1, &opts))?;
        ensure!(
            out.report.windings == vec![1, 3],
            "windings {:?}",
            out.report.windings
        );
        for &(v, s) in &out.report.angle_sums {
            ensure!((s - 2.0 * TAU).abs() < 1e-8, "angle sum at {v}: {s}");
        }
        let PipelineDetail::Blaschke { schwarz_ratio, .. } = &out.report.detail else {
            return Err("wrong detail".to_string());
        };
        ensure!(*schwarz_ratio <= 1.0, "schwarz ratio {schwarz_ratio}");
        let dt = start.elapsed();
        ensure!(dt.as_secs_f64() < 10.0, "too slow: {dt:?}");
        Ok(())
    });
}

#[test]
fn criterion_06_singular_branching() {
    criterion(6, "singular hole on a hex disc", || {
        // Symmetric point in an equilateral interstice.
        let pk = Packing {
            geom: Geometry::Euclidean,
            circles: [
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 3f64.sqrt()),
            ]
            .iter()
            .map(|&c| Some(Circle::euclidean(c, 1.0)))
            .collect(),
            tree: Vec::new(),
        };
        let p = Complex64::new(1.0, 3f64.sqrt() / 3.0);
        let g = err(singular_params(&pk, [1, 2, 3], p))?;
        for gi in g {
            ensure!((gi - PI / 3.0).abs() < 1e-10, "gamma {gi}");
        }
        ensure!((g.iter().sum::<f64>() - PI).abs() < 1e-12, "gamma sum");

        let k = gen_disc(3).unwrap();
        let (u, w) = k.faces_at(1)[0];
        let b = err(build_branched(
            &k,
            &[BranchSpec::Singular {
                face: [1, u, w],
                gammas: g,
            }],
            Geometry::Hyperbolic,
            &BoundaryCondition::horocycles(),
            &SolveOptions {
                tol: 1e-10,
                ..SolveOptions::default()
            },
        ))?;
        ensure!(
            b.diagnostics.fall_guy_radii[0] < 1e-9,
            "fall guy radius {}",
            b.diagnostics.fall_guy_radii[0]
        );
        ensure!(
            b.diagnostics.horizon_windings == vec![2],
            "windings {:?}",
            b.diagnostics.horizon_windings
        );
        // Non-hole tangencies: every tangency edge is exact in the layout.
        for (x, y) in b.complex.edges() {
            if b.phi.get(x, y) != 0.0 {
                continue;
            }
            let (cx, cy) = (
                b.packing.circle(x).ok_or("unplaced")?.eucl,
                b.packing.circle(y).ok_or("unplaced")?.eucl,
            );
            let gap = (cx.center - cy.center).norm() - (cx.radius + cy.radius);
            ensure!(gap.abs() < 1e-8, "edge ({x},{y}) tangency gap {gap}");
        }
        Ok(())
    });
}

#[test]
fn criterion_07_shifted_branching() {
    criterion(7, "shifted hole: center point, dial transition, concurrence", || {
        let k = gen_disc(3).unwrap();
        let petals = k.flower(1).unwrap().petals.clone();
        let opts = SolveOptions {
            tol: 1e-10,
            ..SolveOptions::default()
        };
        let shifted = |j1: Vertex, j2: Vertex, g1: f64, g2: f64, tol: f64| {
            build_branched(
                &k,
                &[BranchSpec::Shifted {
                    v: 1,
                    j1,
                    j2,
                    gamma1: g1,
                    gamma2: g2,
                }],
                Geometry::Hyperbolic,
                &BoundaryCondition::horocycles(),
                &SolveOptions {
                    tol,
                    ..SolveOptions::default()
                },
            )
        };

        // Center-point spec (antipodal jumps, dials pi/2) vs traditional.
        // Faces collinear at the fall guy floor the angle residual near 2e-8.
        let c = err(shifted(petals[0], petals[3], PI / 2.0, PI / 2.0, 1e-8))?;
        let t = err(build_branched(
            &k,
            &[BranchSpec::Traditional { v: 1, order: 1 }],
            Geometry::Hyperbolic,
            &BoundaryCondition::horocycles(),
            &opts,
        ))?;
        let mut skip: BTreeSet<Vertex> = c.records[0].interior_vertices().into_iter().collect();
        skip.extend(c.records[0].horizon.iter().copied());
        let d = restricted_label_distance(&c.label, &t.label, &skip, k.vertex_count());
        ensure!(d < 1e-6, "center-point vs traditional distance {d}");
        ensure!(
            c.diagnostics.horizon_windings == vec![2],
            "windings {:?}",
            c.diagnostics.horizon_windings
        );

        // Dial-transition identity: both endpoint charts reduce to the same
        // contracted complex and solve to the same label.
        let a = err(shifted(petals[1], petals[3], PI, 0.4 * PI, 1e-8))?;
        let b = err(shifted(petals[0], petals[3], 0.0, 0.4 * PI, 1e-8))?;
        let d = restricted_label_distance(
            &a.label,
            &b.label,
            &BTreeSet::new(),
            k.vertex_count() + 3,
        );
        ensure!(d < 1e-8, "dial transition distance {d}");

        // Four-circle concurrence at the fall-guy point. Asymmetric dials
        // condition the solve worse than the centered spec, so 1e-9.
        let s = err(shifted(petals[0], petals[3], 0.7 * PI, 0.4 * PI, 1e-9))?;
        let rec = &s.records[0];
        let q = s.packing.circle(rec.fall_guy).ok_or("unplaced")?.eucl.center;
        let (t1, t2) = rec.twins.ok_or("no twins")?;
        for v in [t1, t2, rec.chaperones[0], rec.chaperones[1]] {
            let c = s.packing.circle(v).ok_or("unplaced")?.eucl;
            let gap = (c.center - q).norm() - c.radius;
            ensure!(gap.abs() < 1e-8, "vertex {v} concurrence gap {gap}");
        }
        ensure!(
            s.diagnostics.horizon_windings == vec![2],
            "windings {:?}",
            s.diagnostics.horizon_windings
        );
        Ok(())
    });
}

#[test]
fn criterion_08_ahlfors_suite() {
    criterion(8, "Ahlfors: symmetric, broken, repaired", || {
        let start = Instant::now();
        let (rings, cols) = (5, 12);
        let mid = annulus_midline_row(rings);
        let v1 = annulus_vertex(cols, mid, 0);
        let v2 = annulus_vertex(cols, mid, cols / 2);
        let opts = SolveOptions::default();

        let k = gen_annulus(rings, cols).unwrap();
        let out = err(ahlfors(&k, v1, v2, AhlforsRepair::None, &opts))?;
        ensure!(out.report.windings == vec![1, 1], "windings {:?}", out.report.windings);
        let disp = out
            .report
            .holonomies
            .iter()
            .find(|h| h.name == "image_loop")
            .map(|h| h.displacement)
            .unwrap_or(f64::MAX);
        ensure!(disp < 1e-6, "symmetric displacement {disp}");

        let kp = broken_annulus(rings, cols).unwrap();
        match ahlfors(&kp, v1, v2, AhlforsRepair::None, &opts) {
            Err(circlepack::workbench::pipelines::PipelineError::HolonomyNontrivial {
                displacement,
            }) => {
                ensure!(displacement > 1e-4, "broken displacement {displacement}");
            }
            other => return Err(format!("expected nontrivial holonomy, got {other:?}")),
        }

        let family = ShiftedFamily {
            v: v2,
            j1: annulus_vertex(cols, mid + 1, cols / 2 - 1),
            j2: annulus_vertex(cols, mid - 1, cols / 2),
        };
        let out = err(ahlfors(
            &kp,
            v1,
            v2,
            AhlforsRepair::ShiftedSearch(family),
            &opts,
        ))?;
        let disp = out
            .report
            .holonomies
            .iter()
            .find(|h| h.name == "image_loop")
            .map(|h| h.displacement)
            .unwrap_or(f64::MAX);
        ensure!(disp < 1e-6, "repaired displacement {disp}");
        let PipelineDetail::Ahlfors {
            cross_cut_mismatch, ..
        } = &out.report.detail
        else {
            return Err("wrong detail".to_string());
        };
        ensure!(
            *cross_cut_mismatch < 1e-6,
            "cross-cut mismatch {cross_cut_mismatch}"
        );
        let dt = start.elapsed();
        ensure!(dt.as_secs_f64() < 60.0, "too slow: {dt:?}");
        Ok(())
    });
}

#[test]
fn criterion_09_weierstrass() {
    criterion(9, "Weierstrass on torus(8,8)", || {
        let (n, m) = (8, 8);
        let k = gen_torus(n, m).unwrap();
        let v = |i: usize, j: usize| torus_vertex(m, i, j);
        let orbit = [v(0, 0), v(n / 2, 0), v(0, m / 2), v(n / 2, m / 2)];
        let row: Vec<Vertex> = (0..m).map(|j| v(1, j)).collect();
        let col: Vec<Vertex> = (0..n).map(|i| v(i, 1)).collect();
        let out = err(weierstrass(
            &k,
            orbit,
            [&row, &col],
            &SolveOptions::default(),
        ))?;
        for h in &out.report.holonomies {
            ensure!(
                h.displacement + h.deviation < 1e-6,
                "generator holonomy {h:?}"
            );
        }
        let PipelineDetail::Weierstrass {
            boundary_winding,
            tangency_residual,
            antipodal_residuals,
            ..
        } = &out.report.detail
        else {
            return Err("wrong detail".to_string());
        };
        ensure!(*boundary_winding == 2, "boundary winding {boundary_winding}");
        ensure!(
            *tangency_residual < 1e-6,
            "hemisphere tangency residual {tangency_residual}"
        );
        ensure!(
            antipodal_residuals[0] < 1e-8,
            "antipodal residual {antipodal_residuals:?}"
        );
        Ok(())
    });
}

#[test]
fn criterion_10_parameter_continuity() {
    criterion(10, "parameter continuity for both hole families", || {
        let k = gen_disc(3).unwrap();
        let petals = k.flower(1).unwrap().petals.clone();
        let opts = SolveOptions::default();
        let deltas = [1e-1, 1e-2, 1e-3, 1e-4];

        // Singular family: perturb the gamma partition around the symmetric
        // point of one face at the center.
        let (u, w) = k.faces_at(1)[0];
        let singular = |d: f64| {
            build_branched(
                &k,
                &[BranchSpec::Singular {
                    face: [1, u, w],
                    gammas: [PI / 3.0 + d, PI / 3.0 - d, PI / 3.0],
                }],
                Geometry::Hyperbolic,
                &BoundaryCondition::horocycles(),
                &opts,
            )
        };
        let base = err(singular(0.0))?;
        let mut last = f64::MAX;
        for d in deltas {
            let m = err(singular(d))?;
            let dist = restricted_label_distance(
                &m.label,
                &base.label,
                &BTreeSet::new(),
                m.complex.vertex_count(),
            );
            ensure!(dist < last, "singular deltas not decreasing at {d}: {dist} >= {last}");
            last = dist;
        }

        // Shifted family: perturb one dial around the centered spec.
        let shifted = |d: f64| {
            build_branched(
                &k,
                &[BranchSpec::Shifted {
                    v: 1,
                    j1: petals[0],
                    j2: petals[3],
                    gamma1: PI / 2.0 + d,
                    gamma2: PI / 2.0,
                }],
                Geometry::Hyperbolic,
                &BoundaryCondition::horocycles(),
                &opts,
            )
        };
        let base = err(shifted(0.0))?;
        let mut last = f64::MAX;
        for d in deltas {
            let m = err(shifted(d))?;
            let dist = restricted_label_distance(
                &m.label,
                &base.label,
                &BTreeSet::new(),
                m.complex.vertex_count(),
            );
            ensure!(dist < last, "shifted deltas not decreasing at {d}: {dist} >= {last}");
            last = dist;
        }
        Ok(())
    });
}
