//! `torsion`: batch front end for the solver, audits, bound certifier and
//! shape optimizer. Every JSON output embeds the configuration that produced it.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use torsion_core::bounds::scan_upper_bound;
use torsion_core::geometry::fraenkel_asymmetry;
use torsion_core::io::{load_polygon, polygon_svg, to_json};
use torsion_core::oracles::{self, EllipseTorsion, WosConfig};
use torsion_core::shapeopt::{self, OptimizeOptions};
use torsion_core::torsion::{self, audit_all};
use torsion_core::{ConvexPolygon, Error, Point2, Resolution, ShapeParams};

#[derive(Parser)]
#[command(name = "torsion", version, about = "Torsion function laboratory for convex polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve −Δu = s on a polygon, report derived scalars and audits.
    Solve(SolveArgs),
    /// Evaluate the Brownian upper bound on a grid of survival times.
    Certify(CertifyArgs),
    /// Maximise max|∇u| / |Ω|^{1/2} over star-shaped polygons.
    Optimize(OptimizeArgs),
    /// Fraenkel asymmetry of a polygon.
    Asymmetry(AsymmetryArgs),
    /// Closed-form and Monte Carlo reference values.
    Oracle(OracleArgs),
}

#[derive(Args, Serialize, Clone, Copy)]
struct ResolutionArgs {
    /// Panels per edge.
    #[arg(long)]
    panels: Option<usize>,
    /// Gauss–Legendre nodes per panel.
    #[arg(long)]
    nodes: Option<usize>,
    /// Corner grading exponent (1 = uniform).
    #[arg(long)]
    grading: Option<f64>,
}

impl ResolutionArgs {
    fn apply(&self, base: Resolution) -> torsion_core::Result<Resolution> {
        let r = Resolution {
            panels_per_edge: self.panels.unwrap_or(base.panels_per_edge),
            nodes_per_panel: self.nodes.unwrap_or(base.nodes_per_panel),
            grading: self.grading.unwrap_or(base.grading),
        };
        r.validate()?;
        Ok(r)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// JSON result file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG figure with the max-gradient point marked.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    strength: u8,
    #[command(flatten)]
    resolution: ResolutionArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[allow(non_snake_case)]
struct CertifyArgs {
    /// Single survival time; overrides the range.
    #[arg(long = "T")]
    T: Option<f64>,
    #[arg(long = "T-min", default_value_t = 0.05)]
    T_min: f64,
    #[arg(long = "T-max", default_value_t = 0.5)]
    T_max: f64,
    #[arg(long = "n-T", default_value_t = 46)]
    n_T: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bound curve as CSV; defaults to the JSON path with a .csv extension.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Starting polygon; a regular polygon with `--n` vertices if omitted.
    #[arg(long)]
    polygon: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Restrict to shapes symmetric about the y-axis.
    #[arg(long)]
    mirror: bool,
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    resolution: ResolutionArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AsymmetryArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    kind: OracleKind,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Serialize, Clone)]
#[serde(rename_all = "kebab-case", tag = "kind")]
enum OracleKind {
    /// Ellipse-family constant for the semi-axis parameter a.
    Ellipse {
        #[arg(long)]
        a: f64,
    },
    /// Best member of the ellipse family.
    OptimalEllipse,
    /// Disk of the given radius: u and |∇u| at distance r from the center.
    Disk {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        strength: u8,
    },
    /// Unit square series values for −Δu = 1.
    Square,
    /// Walk-on-spheres expected exit time (−Δu = 2) at one point.
    Wos {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 1e-6)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct Envelope<C, R> {
    command: &'static str,
    version: &'static str,
    config: C,
    result: R,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input_error() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult = Result<(), Failure>;

fn emit<C: Serialize, R: Serialize>(command: &'static str, config: C, result: R, out: Option<&Path>) -> CliResult {
    let env = Envelope {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config,
        result,
    };
    let text = to_json(&env)?;
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn read_polygon(path: &Path) -> Result<ConvexPolygon, Failure> {
    load_polygon(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Asymmetry(a) => cmd_asymmetry(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[derive(Serialize)]
struct SolveConfig {
    polygon: ConvexPolygon,
    strength: u8,
    resolution: Resolution,
}

#[derive(Serialize)]
struct SolveReport {
    area: f64,
    perimeter: f64,
    max_grad: f64,
    max_grad_point: Point2,
    max_u: f64,
    argmax_u: Point2,
    rigidity: f64,
    dirichlet_energy: f64,
    c_value: f64,
    audits_passed: bool,
    audits: torsion_core::AuditReport,
}

fn cmd_solve(a: SolveArgs) -> CliResult {
    let p = read_polygon(&a.polygon)?;
    let res = a.resolution.apply(Resolution::auto(&p))?;
    let t = torsion::solve(&p, f64::from(a.strength), res)?;
    let audits = audit_all(&t)?;
    let report = SolveReport {
        area: p.area(),
        perimeter: p.perimeter(),
        max_grad: t.max_grad,
        max_grad_point: t.max_grad_point,
        max_u: t.max_u,
        argmax_u: t.argmax_u,
        rigidity: t.rigidity,
        dirichlet_energy: t.dirichlet_energy,
        c_value: t.c_value(),
        audits_passed: audits.passed(),
        audits,
    };
    if let Some(svg) = &a.output.svg {
        write_file(svg, &polygon_svg(&p, Some(t.max_grad_point)))?;
    }
    let config = SolveConfig {
        polygon: p,
        strength: a.strength,
        resolution: res,
    };
    emit("solve", config, report, a.output.out.as_deref())
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct CertifyConfig {
    T_grid: Vec<f64>,
}

#[derive(Serialize)]
struct CertifyReport {
    best: torsion_core::BoundResult,
    /// `1/√(2π)`, the value `bound_c` has to beat.
    threshold: f64,
    certified: bool,
    rows: Vec<torsion_core::BoundResult>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct CurveRow {
    T: f64,
    M: f64,
    bound_raw: f64,
    bound_c: f64,
}

fn cmd_certify(a: CertifyArgs) -> CliResult {
    let grid = match a.T {
        Some(t) if t > 0.0 && t.is_finite() => vec![t],
        Some(t) => return Err(input_error(format!("--T must be positive, got {t}"))),
        None => {
            if !(a.T_min > 0.0 && a.T_min < a.T_max && a.T_max.is_finite()) {
                return Err(input_error(format!(
                    "need 0 < T-min < T-max, got [{}, {}]",
                    a.T_min, a.T_max
                )));
            }
            if a.n_T < 2 {
                return Err(input_error("--n-T must be at least 2"));
            }
            let h = (a.T_max - a.T_min) / (a.n_T - 1) as f64;
            (0..a.n_T).map(|i| a.T_min + h * i as f64).collect()
        }
    };
    let (rows, best) = scan_upper_bound(&grid)?;
    let csv_path = a
        .csv
        .clone()
        .or_else(|| a.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(path) = csv_path {
        write_curve(&path, &rows)?;
    }
    let report = CertifyReport {
        best,
        threshold: 1.0 / (2.0 * PI).sqrt(),
        certified: best.certified(),
        rows,
    };
    emit("certify", CertifyConfig { T_grid: grid }, report, a.out.as_deref())
}

fn write_curve(path: &Path, rows: &[torsion_core::BoundResult]) -> CliResult {
    let fail = |e: csv::Error| input_error(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(fail)?;
    for r in rows {
        w.serialize(CurveRow {
            T: r.T,
            M: r.M,
            bound_raw: r.bound_raw,
            bound_c: r.bound_c,
        })
        .map_err(fail)?;
    }
    w.flush()
        .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct OptimizeConfig {
    start: ShapeParams,
    budget: usize,
    seed: u64,
    search_resolution: Resolution,
    final_resolution: Resolution,
    initial_step: f64,
    x_tol: f64,
}

#[derive(Serialize)]
struct OptimizeReport {
    c_value: f64,
    max_grad_point: Point2,
    candidate: torsion_core::ShapeCandidate,
}

fn cmd_optimize(a: OptimizeArgs) -> CliResult {
    let start = match &a.polygon {
        Some(path) => ShapeParams::from_polygon(&read_polygon(path)?, a.mirror)?,
        None => ShapeParams::regular(a.n, a.mirror)?,
    };
    let defaults = OptimizeOptions::default();
    let opts = OptimizeOptions {
        final_resolution: a.resolution.apply(defaults.final_resolution)?,
        ..defaults
    };
    let best = shapeopt::optimize_with(&start, a.budget, a.seed, opts)?;
    let (_, point) = torsion::flux_c_value(&best.polygon, best.solve_resolution)?;
    if let Some(svg) = &a.output.svg {
        write_file(svg, &polygon_svg(&best.polygon, Some(point)))?;
    }
    let config = OptimizeConfig {
        start,
        budget: a.budget,
        seed: a.seed,
        search_resolution: opts.search_resolution,
        final_resolution: opts.final_resolution,
        initial_step: opts.initial_step,
        x_tol: opts.x_tol,
    };
    let report = OptimizeReport {
        c_value: best.c,
        max_grad_point: point,
        candidate: best,
    };
    emit("optimize", config, report, a.output.out.as_deref())
}

fn cmd_asymmetry(a: AsymmetryArgs) -> CliResult {
    let p = read_polygon(&a.polygon)?;
    let r = fraenkel_asymmetry(&p)?;
    #[derive(Serialize)]
    struct Config {
        polygon: ConvexPolygon,
    }
    emit("asymmetry", Config { polygon: p }, r, a.out.as_deref())
}

#[derive(Serialize)]
#[serde(untagged)]
enum OracleValue {
    Ellipse { a: f64, c: f64, max_grad: f64, area: f64 },
    Disk { u: f64, grad: f64, c: f64 },
    Square { c: f64, max_u: f64, rigidity: f64 },
    Wos { mean: f64, standard_error: f64 },
}

fn cmd_oracle(a: OracleArgs) -> CliResult {
    let value = match &a.kind {
        OracleKind::Ellipse { a } => {
            let e = EllipseTorsion::new(*a)?;
            OracleValue::Ellipse {
                a: *a,
                c: oracles::ellipse_c(*a),
                max_grad: e.max_grad(),
                area: e.area(),
            }
        }
        OracleKind::OptimalEllipse => {
            let (a, c) = oracles::optimal_ellipse();
            let e = EllipseTorsion::new(a)?;
            OracleValue::Ellipse {
                a,
                c,
                max_grad: e.max_grad(),
                area: e.area(),
            }
        }
        OracleKind::Disk { radius, r, strength } => {
            let (u, grad) = oracles::disk_closed_form(*radius, f64::from(*strength), *r)?;
            OracleValue::Disk {
                u,
                grad,
                c: 1.0 / (2.0 * PI.sqrt()),
            }
        }
        OracleKind::Square => OracleValue::Square {
            c: oracles::square_c(),
            max_u: oracles::square_max_u(),
            rigidity: oracles::square_rigidity(),
        },
        OracleKind::Wos {
            polygon,
            x,
            y,
            paths,
            delta,
            seed,
        } => {
            let p = read_polygon(polygon)?;
            let cfg = WosConfig {
                n_paths: *paths,
                stop_distance: *delta,
                seed: *seed,
            };
            let (mean, se) = oracles::wos_lifetime(&p, Point2::new(*x, *y), &cfg)?;
            OracleValue::Wos {
                mean,
                standard_error: se,
            }
        }
    };
    emit("oracle", a.kind.clone(), value, a.out.as_deref())
}
