//! Command-line interface: generate example complexes, compute maximal and
//! branched packings, run the named pipelines, measure holonomy, and render
//! SVG. Exit codes: 0 success, 2 validation error, 3 non-convergence,
//! 4 nontrivial holonomy.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use circlepack::branching::{build_branched, BranchError, BranchSpec, ShiftedFamily};
use circlepack::complex::{Complex, Vertex};
use circlepack::geometry::Geometry;
use circlepack::layout::{develop, face_chain_from_vertex_loop, holonomy};
use circlepack::solver::{
    max_label, BoundaryCondition, OverlapMap, SolveOptions, SolverError,
};
use circlepack::workbench::generators::{broken_annulus, gen_annulus, gen_disc, gen_torus};
use circlepack::workbench::io;
use circlepack::workbench::pipelines::{
    ahlfors, blaschke, core_loop, weierstrass, AhlforsRepair, PipelineError, PipelineReport,
};
use circlepack::workbench::svg::{render_packing, render_sphere, role_style, RenderStyle};

#[derive(Parser)]
#[command(name = "circlepack", version, about = "Circle packing workbench")]
struct Cli {
    /// Solver tolerance on angle-sum residuals.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Solver sweep budget.
    #[arg(long, global = true, default_value_t = 50_000)]
    max_iters: usize,
    /// Seed for sampled scans (reserved; all built-in runs are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Print the machine-readable report to stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Disc,
    Annulus,
    Torus,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeomArg {
    Hyperbolic,
    Euclidean,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepairArg {
    None,
    Shifted,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a complex file and print its surface type.
    Validate {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Generate an example complex.
    Gen {
        #[arg(long)]
        kind: GenKind,
        /// Rings (disc, annulus).
        #[arg(long, default_value_t = 3)]
        rings: usize,
        /// Columns (annulus).
        #[arg(long, default_value_t = 12)]
        cols: usize,
        /// Rows (torus).
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Columns (torus).
        #[arg(long, default_value_t = 8)]
        m: usize,
        /// Apply the two pinned symmetry-breaking edge flips (annulus).
        #[arg(long)]
        broken: bool,
        #[arg(long, default_value = "complex.json")]
        out: PathBuf,
    },
    /// Compute the maximal packing of a complex.
    Maxpack {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Solve a branched packing from a branch-spec file (JSON list).
    Branchpack {
        #[arg(long)]
        complex: PathBuf,
        /// JSON file holding a list of branch specs.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = GeomArg::Hyperbolic)]
        geometry: GeomArg,
        /// Boundary radius for euclidean solves.
        #[arg(long, default_value_t = 1.0)]
        boundary_radius: f64,
    },
    /// Discrete Blaschke product: traditional branching at two vertices.
    Blaschke {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        v1: Vertex,
        #[arg(long)]
        v2: Vertex,
        /// Vertex normalized to the origin.
        #[arg(long, default_value_t = 1)]
        alpha: Vertex,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Discrete Ahlfors function on an annulus, with optional repair.
    Ahlfors {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        v1: Vertex,
        #[arg(long)]
        v2: Vertex,
        #[arg(long, value_enum, default_value_t = RepairArg::None)]
        repair: RepairArg,
        /// First jump petal of the repair family (shifted repair).
        #[arg(long)]
        j1: Option<Vertex>,
        /// Second jump petal of the repair family (shifted repair).
        #[arg(long)]
        j2: Option<Vertex>,
    },
    /// Discrete Weierstrass function on a torus.
    Weierstrass {
        #[arg(long)]
        complex: PathBuf,
        /// The four branch-orbit vertices, comma separated; the last is
        /// punctured.
        #[arg(long)]
        orbit: String,
        /// First genus generator as a comma-separated vertex loop.
        #[arg(long)]
        loop_a: String,
        /// Second genus generator as a comma-separated vertex loop.
        #[arg(long)]
        loop_b: String,
    },
    /// Measure the holonomy of a vertex loop under a label.
    Holonomy {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        label: PathBuf,
        /// Comma-separated vertex loop, or "generator" for the core loop
        /// around the first boundary component.
        #[arg(long, name = "loop")]
        loop_: String,
    },
    /// Render a packing file to SVG.
    Render {
        #[arg(long)]
        packing: PathBuf,
        /// Complex for carrier edges and branch-role coloring.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        carrier: bool,
        #[arg(long, default_value = "packing.svg")]
        out: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] io::IoError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Complex(#[from] circlepack::complex::ComplexError),
    #[error(transparent)]
    Layout(#[from] circlepack::layout::LayoutError),
    #[error(transparent)]
    Gen(#[from] circlepack::workbench::generators::GenError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 validation, 3 non-convergence, 4 nontrivial holonomy.
    fn exit_code(&self) -> u8 {
        fn solver_code(e: &SolverError) -> u8 {
            match e {
                SolverError::NonConvergence { .. } => 3,
                _ => 2,
            }
        }
        fn branch_code(e: &BranchError) -> u8 {
            match e {
                BranchError::Solver(s) => solver_code(s),
                BranchError::NonConvergence | BranchError::NoSignChange(_) => 3,
                _ => 2,
            }
        }
        match self {
            CliError::Solver(s) => solver_code(s),
            CliError::Branch(b) => branch_code(b),
            CliError::Pipeline(PipelineError::HolonomyNontrivial { .. }) => 4,
            CliError::Pipeline(PipelineError::Solver(s)) => solver_code(s),
            CliError::Pipeline(PipelineError::Branch(b)) => branch_code(b),
            _ => 2,
        }
    }
}

fn load_complex(path: &Path) -> Result<Complex, CliError> {
    Ok(io::complex_from_json(&io::load(path)?)?)
}

fn parse_loop(s: &str, k: &Complex) -> Result<Vec<Vertex>, CliError> {
    if s == "generator" {
        return Ok(core_loop(k)?);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Vertex>()
                .map_err(|_| CliError::Usage(format!("bad vertex {t:?} in loop")))
        })
        .collect()
}

fn write_artifact(
    out_dir: &Path,
    name: &str,
    contents: &str,
    report: Option<&mut PipelineReport>,
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out_dir).map_err(io::IoError::from)?;
    let path = out_dir.join(name);
    io::save(&path, contents)?;
    if let Some(r) = report {
        r.artifacts
            .insert(name.to_string(), path.display().to_string());
    }
    Ok(path)
}

fn emit_report(cli: &Cli, mut report: PipelineReport, name: &str) -> Result<(), CliError> {
    let json = io::report_to_json(&report);
    write_artifact(&cli.out_dir, name, &json, None)?;
    report
        .artifacts
        .insert(name.to_string(), cli.out_dir.join(name).display().to_string());
    if cli.json {
        println!("{}", io::report_to_json(&report));
    } else {
        println!(
            "{}: sweeps {}, residual {:.3e}, packing residual {:.3e}, windings {:?}",
            report.function,
            report.sweeps,
            report.solver_residual,
            report.packing_residual,
            report.windings
        );
        for h in &report.holonomies {
            println!(
                "  holonomy {}: displacement {:.3e}, deviation {:.3e}",
                h.name, h.displacement, h.deviation
            );
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let opts = SolveOptions {
        tol: cli.tol,
        max_iters: cli.max_iters,
        ..SolveOptions::default()
    };
    match &cli.cmd {
        Cmd::Validate { complex } => {
            let k = load_complex(complex)?;
            println!(
                "valid: {} vertices, {} faces, surface {:?}, {} surgeries",
                k.vertex_count(),
                k.faces().len(),
                k.surface(),
                k.surgeries().len()
            );
        }
        Cmd::Gen {
            kind,
            rings,
            cols,
            n,
            m,
            broken,
            out,
        } => {
            let k = match kind {
                GenKind::Disc => gen_disc(*rings)?,
                GenKind::Annulus if *broken => broken_annulus(*rings, *cols)?,
                GenKind::Annulus => gen_annulus(*rings, *cols)?,
                GenKind::Torus => gen_torus(*n, *m)?,
            };
            std::fs::create_dir_all(&cli.out_dir).map_err(io::IoError::from)?;
            let path = cli.out_dir.join(out);
            io::save(&path, &io::complex_to_json(&k))?;
            println!("wrote {}", path.display());
        }
        Cmd::Maxpack { complex } => {
            let k = load_complex(complex)?;
            let (label, report) = max_label(&k, &opts)?;
            let p = develop(&k, &label, &OverlapMap::tangency())?;
            write_artifact(&cli.out_dir, "label.json", &io::label_to_json(&label), None)?;
            write_artifact(&cli.out_dir, "packing.json", &io::packing_to_json(&p), None)?;
            let style = RenderStyle {
                carrier: true,
                ..RenderStyle::default()
            };
            write_artifact(
                &cli.out_dir,
                "packing.svg",
                &render_packing(&p, Some(&k), &style),
                None,
            )?;
            println!(
                "maxpack: sweeps {}, residual {:.3e}",
                report.sweeps, report.residual
            );
        }
        Cmd::Branchpack {
            complex,
            spec,
            geometry,
            boundary_radius,
        } => {
            let k = load_complex(complex)?;
            let specs: Vec<BranchSpec> = serde_json::from_str(&io::load(spec)?)
                .map_err(io::IoError::from)?;
            let (geom, bc) = match geometry {
                GeomArg::Hyperbolic => (Geometry::Hyperbolic, BoundaryCondition::horocycles()),
                GeomArg::Euclidean => (
                    Geometry::Euclidean,
                    BoundaryCondition::uniform_radius(*boundary_radius),
                ),
            };
            let b = build_branched(&k, &specs, geom, &bc, &opts)?;
            write_artifact(&cli.out_dir, "label.json", &io::label_to_json(&b.label), None)?;
            write_artifact(
                &cli.out_dir,
                "packing.json",
                &io::packing_to_json(&b.packing),
                None,
            )?;
            let traditional: Vec<Vertex> = specs
                .iter()
                .filter_map(|s| match s {
                    BranchSpec::Traditional { v, .. } => Some(*v),
                    _ => None,
                })
                .collect();
            let mut style = role_style(&b.complex, &traditional);
            style.carrier = true;
            write_artifact(
                &cli.out_dir,
                "packing.svg",
                &render_packing(&b.packing, Some(&b.complex), &style),
                None,
            )?;
            println!(
                "branchpack: sweeps {}, residual {:.3e}, horizon windings {:?}, \
                 fall-guy radii {:?}",
                b.report.sweeps,
                b.report.residual,
                b.diagnostics.horizon_windings,
                b.diagnostics.fall_guy_radii
            );
        }
        Cmd::Blaschke {
            complex,
            v1,
            v2,
            alpha,
            order,
        } => {
            let k = load_complex(complex)?;
            let specs = [
                BranchSpec::Traditional { v: *v1, order: *order },
                BranchSpec::Traditional { v: *v2, order: *order },
            ];
            let out = blaschke(&k, &specs, *alpha, &opts)?;
            let mut report = out.report;
            write_artifact(
                &cli.out_dir,
                "domain.json",
                &io::packing_to_json(&out.domain),
                Some(&mut report),
            )?;
            write_artifact(
                &cli.out_dir,
                "image.json",
                &io::packing_to_json(&out.image),
                Some(&mut report),
            )?;
            let style = role_style(&out.branched.complex, &[*v1, *v2]);
            write_artifact(
                &cli.out_dir,
                "image.svg",
                &render_packing(&out.image, Some(&out.branched.complex), &style),
                Some(&mut report),
            )?;
            emit_report(cli, report, "blaschke.json")?;
        }
        Cmd::Ahlfors {
            complex,
            v1,
            v2,
            repair,
            j1,
            j2,
        } => {
            let k = load_complex(complex)?;
            let repair = match repair {
                RepairArg::None => AhlforsRepair::None,
                RepairArg::Shifted => {
                    let (j1, j2) = match (j1, j2) {
                        (Some(a), Some(b)) => (*a, *b),
                        _ => {
                            return Err(CliError::Usage(
                                "shifted repair needs --j1 and --j2".to_string(),
                            ))
                        }
                    };
                    AhlforsRepair::ShiftedSearch(ShiftedFamily { v: *v2, j1, j2 })
                }
            };
            let out = ahlfors(&k, *v1, *v2, repair, &opts)?;
            let mut report = out.report;
            write_artifact(
                &cli.out_dir,
                "image.json",
                &io::packing_to_json(&out.image),
                Some(&mut report),
            )?;
            let style = role_style(&out.branched.complex, &[*v1, *v2]);
            write_artifact(
                &cli.out_dir,
                "image.svg",
                &render_packing(&out.image, Some(&out.branched.complex), &style),
                Some(&mut report),
            )?;
            emit_report(cli, report, "ahlfors.json")?;
        }
        Cmd::Weierstrass {
            complex,
            orbit,
            loop_a,
            loop_b,
        } => {
            let k = load_complex(complex)?;
            let ids: Vec<Vertex> = parse_loop(orbit, &k)?;
            if ids.len() != 4 {
                return Err(CliError::Usage("--orbit needs four vertices".to_string()));
            }
            let la = parse_loop(loop_a, &k)?;
            let lb = parse_loop(loop_b, &k)?;
            let out = weierstrass(&k, [ids[0], ids[1], ids[2], ids[3]], [&la, &lb], &opts)?;
            let mut report = out.report;
            write_artifact(
                &cli.out_dir,
                "image.json",
                &io::packing_to_json(&out.packing),
                Some(&mut report),
            )?;
            let mut circles: Vec<(Vertex, _)> = out
                .sphere
                .iter()
                .enumerate()
                .filter_map(|(v, c)| c.map(|c| (v, c)))
                .collect();
            circles.push((out.complex.vertex_count() + 1, out.v4_cap));
            let mut style = role_style(&out.complex, &out.branch_vertices);
            style
                .colors
                .insert(out.complex.vertex_count() + 1, "red");
            write_artifact(
                &cli.out_dir,
                "sphere.svg",
                &render_sphere(&circles, &style),
                Some(&mut report),
            )?;
            emit_report(cli, report, "weierstrass.json")?;
        }
        Cmd::Holonomy {
            complex,
            label,
            loop_,
        } => {
            let k = load_complex(complex)?;
            let label = io::label_from_json(&io::load(label)?)?;
            let lp = parse_loop(loop_, &k)?;
            let chain = face_chain_from_vertex_loop(&k, &lp)?;
            let h = holonomy(&k, &label, &OverlapMap::tangency(), &chain)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&h).map_err(io::IoError::from)?
                );
            } else {
                println!(
                    "holonomy: displacement {:.6e}, deviation {:.6e}, map {:?}",
                    h.displacement, h.deviation, h.map
                );
            }
        }
        Cmd::Render {
            packing,
            complex,
            carrier,
            out,
        } => {
            let p = io::packing_from_json(&io::load(packing)?)?;
            let k = complex.as_ref().map(|c| load_complex(c)).transpose()?;
            let mut style = match &k {
                Some(k) => role_style(k, &[]),
                None => RenderStyle::default(),
            };
            style.carrier = *carrier;
            let svg = render_packing(&p, k.as_ref(), &style);
            std::fs::create_dir_all(&cli.out_dir).map_err(io::IoError::from)?;
            let path = cli.out_dir.join(out);
            io::save(&path, &svg)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
