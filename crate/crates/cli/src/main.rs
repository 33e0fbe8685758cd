mod input;
mod report;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use weldkit::boundary::{ellipse_kernel, joukowski_inverse, joukowski_scale};
use weldkit::inverse::{reconstruct_detailed, DEFAULT_SEED};
use weldkit::kernel::{residual, solve_v0_with, SolveOptions};
use weldkit::operator::{apply, collocation_points, DEFAULT_COLLOCATION_RADIUS};
use weldkit::welding::{gamma_inverse_from_v0, weld_with, WeldOptions};
use weldkit::{BoundaryMap, CircleDiffeo, CircleGrid, MapSource, PeriodicSamples, WeldError};

use report::{Defect, OperatorReport, ReconstructReport, ValidateReport, WeldReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Weld(#[from] WeldError),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Weld(e) => match e {
                WeldError::RankGap { .. }
                | WeldError::SignIndefinite { .. }
                | WeldError::RootsNotConverged { .. }
                | WeldError::WeldingInconsistent { .. }
                | WeldError::Ode(_)
                | WeldError::NoCandidates { .. }
                | WeldError::NoUnivalentCandidate { .. }
                | WeldError::MultipleSurvivors { .. } => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "weldkit", version, about = "Conformal welding of Jordan domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel function, welding diffeomorphism and exterior map of a map.
    Weld(JobArgs),
    /// Recover the map from a trigonometric polynomial kernel.
    Reconstruct(JobArgs),
    /// Evaluate the operator on given samples at interior points.
    ApplyOperator(JobArgs),
    /// Run a built-in case and report its defects against closed forms.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct JobArgs {
    /// JSON job description.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
    /// CSV samples with columns t, re_f, im_f, v0, tau.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Smallest singular value allowed, relative to the largest.
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Consistency above which a welding is rejected.
    #[arg(long)]
    tol_consistency: Option<f64>,
    /// Multi-start attempts for the inverse problem.
    #[arg(long, default_value_t = 64)]
    attempts: usize,
}

#[derive(Args)]
struct CommonArgs {
    /// Grid size; overrides the input file.
    #[arg(long)]
    grid: Option<usize>,
    /// Result JSON path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Identity,
    Ellipse,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_enum)]
    case: Case,
    #[command(flatten)]
    common: CommonArgs,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn seed() -> Result<u64, CliError> {
    match std::env::var("WELDKIT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Schema(format!("WELDKIT_SEED must be an unsigned integer, got \"{s}\""))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn grid(flag: Option<usize>, file: Option<usize>) -> Result<CircleGrid, CliError> {
    Ok(CircleGrid::new(flag.or(file).unwrap_or(input::DEFAULT_GRID))?)
}

fn solve_options(args: &JobArgs) -> SolveOptions {
    let mut opts = SolveOptions::default();
    if let Some(t) = args.tol_rank {
        opts.rank_small = t;
    }
    opts
}

fn foci(f: &BoundaryMap) -> Vec<Complex64> {
    match f.source() {
        MapSource::Ellipse { .. } => vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
        _ => Vec::new(),
    }
}

fn run_weld(args: &JobArgs) -> Result<(), CliError> {
    let job = input::map_job(&read(&args.input)?)?;
    let g = grid(args.common.grid, job.grid)?;
    let f = job.map.build()?;
    let mut opts = WeldOptions {
        solve: solve_options(args),
        ..WeldOptions::default()
    };
    if let Some(t) = args.tol_consistency {
        opts.consistency_error = t;
        opts.consistency_warn = opts.consistency_warn.min(t);
    }
    let res = weld_with(&f, g, &opts)?;
    let nodes = g.nodes();
    let tau = res.gamma_inv.lift_samples();
    let boundary = f.boundary_samples(g);
    if let Some(p) = &args.csv {
        write(p, &report::csv(&nodes, boundary.values(), res.v0.samples(), &tau))?;
    }
    if let Some(p) = &args.svg {
        let plot = svg::Plot {
            boundary: boundary.values(),
            markers: &foci(&f),
            nodes: &nodes,
            tau: &tau,
            v0: res.v0.samples(),
        };
        write(p, &svg::render(&plot))?;
    }
    let doc = WeldReport::new(f.source().label(), &res);
    emit(args.common.out.as_deref(), &report::to_json(&doc))
}

fn run_reconstruct(args: &JobArgs) -> Result<(), CliError> {
    let job = input::kernel_job(&read(&args.input)?)?;
    let g = grid(args.common.grid, job.grid)?;
    let v = job.kernel.build(g)?;
    let seed = seed()?;
    let (sol, reports) = reconstruct_detailed(&v, args.attempts, seed)?;
    let sol = sol?;
    let tau = gamma_inverse_from_v0(&v.kernel())?.lift_samples();
    let nodes = g.nodes();
    let boundary = sol.f_map.boundary_samples(g);
    let v0 = v.samples();
    if let Some(p) = &args.csv {
        write(p, &report::csv(&nodes, boundary.values(), &v0, &tau))?;
    }
    if let Some(p) = &args.svg {
        let plot = svg::Plot {
            boundary: boundary.values(),
            markers: &[],
            nodes: &nodes,
            tau: &tau,
            v0: &v0,
        };
        write(p, &svg::render(&plot))?;
    }
    let doc = ReconstructReport::new(&v, &sol, tau, &reports);
    emit(args.common.out.as_deref(), &report::to_json(&doc))
}

fn run_apply(args: &JobArgs) -> Result<(), CliError> {
    let job = input::operator_job(&read(&args.input)?)?;
    let g = grid(args.common.grid, job.grid)?;
    let f = job.map.build()?;
    let (v, source) = match job.v {
        Some(values) => (PeriodicSamples::new(g, values)?, "input"),
        None => (
            solve_v0_with(&f, g, &solve_options(args))?.to_periodic(),
            "kernel",
        ),
    };
    let points = job
        .points
        .unwrap_or_else(|| collocation_points(DEFAULT_COLLOCATION_RADIUS, 16));
    let values = points
        .iter()
        .map(|&z| apply(&f, &v, z))
        .collect::<weldkit::Result<Vec<_>>>()?;
    let doc = OperatorReport::new(f.source().label(), g.len(), source, &points, &values);
    emit(args.common.out.as_deref(), &report::to_json(&doc))
}

fn defect(name: &str, value: f64, tolerance: f64) -> Defect {
    Defect {
        name: name.into(),
        value,
        tolerance,
        pass: value <= tolerance,
    }
}

fn validate_case(case: Case, g: CircleGrid) -> Result<ValidateReport, CliError> {
    let (name, f) = match case {
        Case::Identity => ("identity", BoundaryMap::identity()),
        Case::Ellipse => ("ellipse", BoundaryMap::ellipse(0.6)?),
    };
    let res = weld_with(&f, g, &WeldOptions::default())?;
    let operator = residual(&f, &res.v0.to_periodic())?;
    let mut defects = Vec::new();
    match case {
        Case::Identity => {
            let tol = 1e-10;
            let v0 = res
                .v0
                .samples()
                .iter()
                .map(|v| (v - 1.0).abs())
                .fold(0.0, f64::max);
            let gamma = res.gamma.sup_distance(&CircleDiffeo::identity(g));
            let ext = res
                .exterior
                .coefficients()
                .iter()
                .map(|&(k, b)| (b - if k == 1 { 1.0 } else { 0.0 }).norm())
                .fold(0.0, f64::max);
            defects.push(defect("v0", v0, tol));
            defects.push(defect("gamma", gamma, tol));
            defects.push(defect("exterior", ext, tol));
            defects.push(defect("consistency", res.consistency, tol));
            defects.push(defect("route_discrepancy", res.route_discrepancy, tol));
            defects.push(defect("operator_residual", operator, tol));
        }
        Case::Ellipse => {
            let exact = ellipse_kernel(0.6, g)?;
            let lambda = 1.0 / f.eval(Complex64::new(1.0, 0.0)).re;
            let cl = joukowski_scale(lambda);
            let tau = res.gamma_inv.lift_samples();
            let gamma = g
                .nodes()
                .iter()
                .zip(&tau)
                .map(|(&t, x)| {
                    let oracle = joukowski_inverse(lambda, f.eval(Complex64::cis(t))).arg();
                    ((x - oracle + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
                        - std::f64::consts::PI)
                        .abs()
                })
                .fold(0.0, f64::max);
            let ext = (res.exterior.coeff(1) - 0.5 * cl)
                .norm()
                .max((res.exterior.coeff(-1) - 0.5 / cl).norm());
            defects.push(defect("v0", res.v0.max_rel_diff(&exact), 1e-6));
            defects.push(defect("gamma", gamma, 1e-6));
            defects.push(defect("exterior", ext, 1e-6));
            defects.push(defect("consistency", res.consistency, 1e-6));
            defects.push(defect("route_discrepancy", res.route_discrepancy, 1e-8));
            defects.push(defect("operator_residual", operator, 1e-6));
        }
    }
    let pass = defects.iter().all(|d| d.pass);
    Ok(ValidateReport {
        command: "validate".into(),
        case: name.into(),
        grid: g.len(),
        defects,
        pass,
    })
}

fn run_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let default = match args.case {
        Case::Identity => 128,
        Case::Ellipse => 256,
    };
    let g = grid(args.common.grid, Some(default))?;
    let doc = validate_case(args.case, g)?;
    emit(args.common.out.as_deref(), &report::to_json(&doc))?;
    if doc.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = doc
            .defects
            .iter()
            .filter(|d| !d.pass)
            .map(|d| d.name.as_str())
            .collect();
        Err(CliError::Validation(format!(
            "defects above tolerance: {}",
            failed.join(", ")
        )))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Weld(a) => run_weld(a),
        Command::Reconstruct(a) => run_reconstruct(a),
        Command::ApplyOperator(a) => run_apply(a),
        Command::Validate(a) => run_validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("weldkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
