mod io;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polypick::classify::dimension;
use polypick::geodesic::{phi_map, GeodesicParams};
use polypick::hyperbolic::{mobius, normalize_problem};
use polypick::magic::WeightVector;
use polypick::solver::{solve, variety_residual_grid, verify_with, Interpolant, SolveReport};
use polypick::{tolerances, Complex64, Error, PickProblem, PolydiscPoint};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::io::{fmt_f64, to_json_string, Failure, ProblemFile, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "polypick", version, about = "Extremal three-point Pick interpolation on the polydisc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for CSV sample dumps.
    #[arg(long, global = true)]
    csv_dir: Option<PathBuf>,
    /// Residual tolerance for the pass/fail checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Sample count (sup-norm samples, boundary θ-grid, variety λ-grid).
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an extremal problem and report the interpolant.
    Solve { problem: PathBuf },
    /// Degeneracy and dimension of a problem.
    Classify { problem: PathBuf },
    /// Extremal scale of the targets.
    Scale { problem: PathBuf },
    /// Solve, then rerun every numerical check.
    Verify { problem: PathBuf },
    /// Residuals of the interpolant on the scaled-geodesic variety.
    SampleVariety { problem: PathBuf },
    /// Emit the problem file through a geodesic given by its parameters.
    Generate {
        #[arg(long)]
        n: usize,
        /// JSON object {"x": [re, im], "y": [re, im], "alpha": [[re, im], …],
        /// "t": [t₁, …], "omega": [[re, im], …]} (omega has n − 1 entries).
        #[arg(long)]
        seed_params: String,
    },
}

struct Outcome {
    value: Value,
    /// Classification fell inside the decision band.
    ambiguous: bool,
}

struct Settings {
    tolerance: f64,
    samples: Option<usize>,
    csv_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.format == Format::Pretty;
    let (result, out) = run(&cli);
    let (text, code) = match result {
        Ok(o) => (to_json_string(&o.value, pretty), if o.ambiguous { 2 } else { 0 }),
        Err(f) => (to_json_string(&f.to_json(), pretty), f.exit_code()),
    };
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}

/// Runs the command; also returns where the result goes.
fn run(cli: &Cli) -> (Result<Outcome, Failure>, Option<PathBuf>) {
    let mut out = cli.out.clone();
    let result = (|| {
        if let Command::Generate { n, seed_params } = &cli.command {
            return generate(*n, seed_params);
        }
        let path = match &cli.command {
            Command::Solve { problem }
            | Command::Classify { problem }
            | Command::Scale { problem }
            | Command::Verify { problem }
            | Command::SampleVariety { problem } => problem,
            Command::Generate { .. } => unreachable!(),
        };
        let file = read_problem(path)?;
        if out.is_none() {
            out = file.options.out.as_ref().map(PathBuf::from);
        }
        let settings = Settings {
            tolerance: cli.tolerance.or(file.options.tolerance).unwrap_or(tolerances::INTERPOLATION),
            samples: cli.samples.or(file.options.sample_budget),
            csv_dir: cli.csv_dir.clone().or_else(|| file.options.csv_dir.as_ref().map(PathBuf::from)),
        };
        let problem = file.problem()?;
        match &cli.command {
            Command::Solve { .. } => cmd_solve(&problem, &settings),
            Command::Classify { .. } => cmd_classify(&problem),
            Command::Scale { .. } => cmd_scale(&problem),
            Command::Verify { .. } => cmd_verify(&problem, &settings),
            Command::SampleVariety { .. } => cmd_sample_variety(&problem, &settings),
            Command::Generate { .. } => unreachable!(),
        }
    })();
    (result, out)
}

fn read_problem(path: &Path) -> Result<ProblemFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    ProblemFile::parse(&text)
}

fn envelope(command: &str) -> Value {
    json!({ "schema_version": SCHEMA_VERSION, "command": command })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_solve(p: &PickProblem, s: &Settings) -> Result<Outcome, Failure> {
    let report = solve(p)?;
    let worst = report.residuals.interpolation.iter().copied().fold(0.0, f64::max);
    if worst > s.tolerance {
        return Err(Error::NoConvergence { starts: 0, best_residual: worst }.into());
    }
    if let Some(dir) = &s.csv_dir {
        write_boundary_csv(&report, dir, s.samples.unwrap_or(256))?;
    }
    let mut v = envelope("solve");
    v["report"] = to_value(&report);
    Ok(Outcome { value: v, ambiguous: report.is_boundary_case() })
}

fn cmd_classify(p: &PickProblem) -> Result<Outcome, Failure> {
    let (normalized, transform) = normalize_problem(p)?;
    let classification = dimension(&normalized)?;
    let mut v = envelope("classify");
    v["normalized_problem"] = to_value(&normalized);
    v["transform"] = to_value(&transform);
    v["classification"] = to_value(&classification);
    Ok(Outcome { value: v, ambiguous: classification.boundary_case })
}

fn cmd_scale(p: &PickProblem) -> Result<Outcome, Failure> {
    let (status, scale, ambiguous) = match solve(p) {
        Ok(r) => ("extremal", r.extremal_scale.scale, r.is_boundary_case()),
        Err(Error::NotExtremalDatum { scale }) => ("not_extremal", scale, false),
        Err(Error::UnsolvableDatum { scale }) => ("unsolvable", scale, false),
        Err(e) => return Err(e.into()),
    };
    let mut v = envelope("scale");
    v["status"] = json!(status);
    v["scale"] = json!(scale);
    Ok(Outcome { value: v, ambiguous })
}

fn cmd_verify(p: &PickProblem, s: &Settings) -> Result<Outcome, Failure> {
    let report = solve(p)?;
    let summary = verify_with(&report, s.samples.unwrap_or(polypick::solver::DEFAULT_SAMPLES), s.tolerance);
    let mut v = envelope("verify");
    v["verification"] = to_value(&summary);
    if !summary.all_passed {
        return Err(Failure::Checks(v));
    }
    Ok(Outcome { value: v, ambiguous: report.is_boundary_case() })
}

fn cmd_sample_variety(p: &PickProblem, s: &Settings) -> Result<Outcome, Failure> {
    let report = solve(p)?;
    let (Some(g), Interpolant::Magic { function }) = (&report.geodesic, &report.interpolant) else {
        return Err(Error::InvalidParameters("problem is solved by a one-variable interpolant; there is no geodesic variety".into()).into());
    };
    if g.dim() != function.dim() {
        return Err(Error::InvalidParameters("geodesic covers a coordinate subset; sample its subproblem".into()).into());
    }
    let s_grid: Vec<f64> = (0..10).map(|k| k as f64 / 9.0).collect();
    let count = s.samples.unwrap_or(50);
    let lambdas: Vec<Complex64> = (0..count)
        .map(|k| {
            let r = 0.99 * ((k as f64 + 0.5) / count as f64).sqrt();
            Complex64::from_polar(r, k as f64 * 2.399_963_229_728_653)
        })
        .collect();
    let grid = variety_residual_grid(g, function, &s_grid, &lambdas);
    let max = grid.iter().map(|r| r.2).fold(0.0, f64::max);
    if let Some(dir) = &s.csv_dir {
        let mut w = csv_writer(dir, "variety.csv")?;
        csv_row(&mut w, &["s", "lambda_re", "lambda_im", "residual"])?;
        for (sv, l, r) in &grid {
            csv_row(&mut w, &[&fmt_f64(*sv), &fmt_f64(l.re), &fmt_f64(l.im), &fmt_f64(*r)])?;
        }
        w.flush().map_err(|e| Failure::Io(e.to_string()))?;
    }
    let mut v = envelope("sample-variety");
    v["max_residual"] = json!(max);
    v["passed"] = json!(max <= s.tolerance);
    v["s_grid"] = json!(s_grid);
    v["lambda_count"] = json!(count);
    Ok(Outcome { value: v, ambiguous: false })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedParams {
    x: Complex64,
    y: Complex64,
    alpha: Vec<Complex64>,
    t: Vec<f64>,
    omega: Vec<Complex64>,
}

fn generate(n: usize, seed: &str) -> Result<Outcome, Failure> {
    let sp: SeedParams = serde_json::from_str(seed).map_err(|e| Failure::Malformed(format!("--seed-params: {e}")))?;
    if sp.alpha.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: sp.alpha.len() }.into());
    }
    let g = GeodesicParams::new(sp.x, sp.y, sp.alpha, WeightVector::new(sp.t)?, sp.omega)?;
    let (z, w, _) = phi_map(&g);
    let gamma = g.gamma();
    let p = PickProblem::new(
        [PolydiscPoint::origin(n), z, w],
        [Complex64::new(0.0, 0.0), g.x * mobius(gamma, g.x), g.y * mobius(gamma, g.y)],
    )?;
    Ok(Outcome { value: to_value(&ProblemFile::from_problem(&p)), ambiguous: false })
}

fn csv_writer(dir: &Path, name: &str) -> Result<csv::Writer<fs::File>, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    csv::Writer::from_path(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn csv_row(w: &mut csv::Writer<fs::File>, row: &[&str]) -> Result<(), Failure> {
    w.write_record(row).map_err(|e| Failure::Io(e.to_string()))
}

/// `|F|` with one coordinate on the unit circle and the others at the
/// second node, in the caller's coordinates.
fn write_boundary_csv(r: &SolveReport, dir: &Path, count: usize) -> Result<(), Failure> {
    let mut w = csv_writer(dir, "boundary.csv")?;
    csv_row(&mut w, &["coord_index", "theta", "modulus"])?;
    let base = r.problem.nodes[1].coords().to_vec();
    for k in 0..base.len() {
        for j in 0..count {
            let theta = std::f64::consts::TAU * j as f64 / count as f64;
            let mut z = base.clone();
            z[k] = Complex64::from_polar(1.0, theta);
            let value = r.evaluate_coords(&z)?;
            csv_row(&mut w, &[&k.to_string(), &fmt_f64(theta), &fmt_f64(value.norm())])?;
        }
    }
    w.flush().map_err(|e| Failure::Io(e.to_string()))
}
