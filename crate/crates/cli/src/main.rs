//! Command-line surface over the library. Every subcommand is a thin
//! adapter: it deserializes inputs, calls one library entry point, and
//! serializes the result unchanged, so outputs are byte-identical to
//! direct library calls.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or I/O error, 3 when an
//! experiment report comes back unsatisfied.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use grasskit::affine::{hyperplane_intersection, plane_from_points, rho_affine, AffinePlane};
use grasskit::dimest::{box_count_planes, estimate_dim, profile_points, CountProfile};
use grasskit::exact::Rational;
use grasskit::experiments::{run_suite, standard_suite, ExperimentOutput, SuiteConfig};
use grasskit::grassmann::{m_dist, rho, GrassPoint};
use grasskit::nets::{build_net, Space};

/// Default precision for metric enclosures when `-p` is not given.
const PRECISION_ENV: &str = "GRASSKIT_PRECISION";
const FALLBACK_PRECISION: i64 = 16;

#[derive(Parser)]
#[command(name = "grasskit", version, about = "Exact-rational geometry on Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified distance between two serialized planes
    Metric(MetricArgs),
    /// Fit the affine plane through k+1 points
    FitPlane(FitPlaneArgs),
    /// Intersect two affine hyperplanes
    Intersect(IntersectArgs),
    /// Build a separated covering net
    Net(NetArgs),
    /// Box-counting dimension of points or of a plane family
    Dim(DimArgs),
    /// Run dimension-bound experiments from a config
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceKind {
    /// Linear planes through the origin
    #[value(alias = "g")]
    Grass,
    /// Affine planes
    #[value(alias = "a")]
    Affine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodKind {
    /// Operator-norm distance of projections
    Rho,
    /// Sup-inf distance of unit spheres (linear planes only)
    M,
}

#[derive(Args)]
struct MetricArgs {
    /// Which space the inputs live in
    #[arg(long, value_enum)]
    space: SpaceKind,
    /// First plane (JSON file)
    #[arg(long)]
    a: PathBuf,
    /// Second plane (JSON file)
    #[arg(long)]
    b: PathBuf,
    /// Enclosure precision in bits; defaults to GRASSKIT_PRECISION, then 16
    #[arg(short, long, value_parser = clap::value_parser!(i64).range(1..))]
    precision: Option<i64>,
    /// Metric to evaluate
    #[arg(long, value_enum, default_value = "rho")]
    method: MethodKind,
    /// Write the sample here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitPlaneArgs {
    /// JSON file: array of k+1 affinely independent points
    #[arg(long)]
    points: PathBuf,
    /// Write the plane here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntersectArgs {
    /// First hyperplane (AffinePlane JSON file)
    #[arg(long)]
    a: PathBuf,
    /// Second hyperplane (AffinePlane JSON file)
    #[arg(long)]
    b: PathBuf,
    /// Write the intersection here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NetArgs {
    /// Which space to cover
    #[arg(long, value_enum)]
    space: SpaceKind,
    /// Ambient dimension
    #[arg(short, long)]
    n: usize,
    /// Plane dimension
    #[arg(short, long)]
    k: usize,
    /// Covering radius exponent: the net covers at 2^-r
    #[arg(short, long)]
    r: i64,
    /// Candidate stream budget
    #[arg(long, default_value_t = 400_000)]
    budget: usize,
    /// Write the net here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DimArgs {
    /// JSON file: array of rational points
    #[arg(long, conflicts_with = "planes")]
    points: Option<PathBuf>,
    /// JSON file: array of affine planes, counted against nets
    #[arg(long)]
    planes: Option<PathBuf>,
    /// Scales to profile, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    scales: Vec<i64>,
    /// Fit window: two scales, low and high
    #[arg(long, num_args = 2, required = true)]
    fit: Vec<i64>,
    /// Candidate budget per net (plane mode only)
    #[arg(long, default_value_t = 400_000)]
    budget: usize,
    /// Write the estimate here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the count profile as CSV
    #[arg(long)]
    profile_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Suite config (JSON); the built-in standard suite when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective config as JSON and exit without running
    #[arg(long)]
    print_config: bool,
    /// Override every cell's seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override every cell's tolerance
    #[arg(long)]
    tolerance: Option<f64>,
    /// Directory for reports.jsonl and per-profile CSV files
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Anything that should stop the run: `code` picks the process exit.
struct Failure {
    code: u8,
    message: String,
}

fn domain(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type RunResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Metric(args) => run_metric(args),
        Command::FitPlane(args) => run_fit_plane(args),
        Command::Intersect(args) => run_intersect(args),
        Command::Net(args) => run_net(args),
        Command::Dim(args) => run_dim(args),
        Command::Experiment(args) => run_experiment(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| domain(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| domain(format!("parsing {}: {e}", path.display())))
}

/// Serialize compactly (the same bytes a library caller would get from
/// serde_json::to_string) and write to the file or stdout.
fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> RunResult {
    let line = serde_json::to_string(value).map_err(|e| domain(format!("serializing: {e}")))?;
    write_text(&format!("{line}\n"), out)
}

fn write_text(text: &str, out: Option<&Path>) -> RunResult {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| domain(format!("writing {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolve_precision(flag: Option<i64>) -> Result<i64, Failure> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(raw) => {
            let p: i64 = raw
                .trim()
                .parse()
                .map_err(|_| domain(format!("{PRECISION_ENV} must be an integer, got {raw:?}")))?;
            if p < 1 {
                return Err(domain(format!("{PRECISION_ENV} must be at least 1, got {p}")));
            }
            Ok(p)
        }
        Err(std::env::VarError::NotPresent) => Ok(FALLBACK_PRECISION),
        Err(e) => Err(domain(format!("{PRECISION_ENV}: {e}"))),
    }
}

fn run_metric(args: MetricArgs) -> RunResult {
    let p = resolve_precision(args.precision)?;
    let sample = match (args.space, args.method) {
        (SpaceKind::Grass, MethodKind::Rho) => {
            let a: GrassPoint = read_json(&args.a)?;
            let b: GrassPoint = read_json(&args.b)?;
            rho(&a, &b, p).map_err(|e| domain(e.to_string()))?
        }
        (SpaceKind::Grass, MethodKind::M) => {
            let a: GrassPoint = read_json(&args.a)?;
            let b: GrassPoint = read_json(&args.b)?;
            m_dist(&a, &b, p).map_err(|e| domain(e.to_string()))?
        }
        (SpaceKind::Affine, MethodKind::Rho) => {
            let a: AffinePlane = read_json(&args.a)?;
            let b: AffinePlane = read_json(&args.b)?;
            rho_affine(&a, &b, p).map_err(|e| domain(e.to_string()))?
        }
        (SpaceKind::Affine, MethodKind::M) => {
            return Err(domain("the m metric is defined for linear planes only"));
        }
    };
    emit_json(&sample, args.out.as_deref())
}

fn run_fit_plane(args: FitPlaneArgs) -> RunResult {
    let points: Vec<Vec<Rational>> = read_json(&args.points)?;
    let plane = plane_from_points(&points).map_err(|e| domain(e.to_string()))?;
    emit_json(&plane, args.out.as_deref())
}

fn run_intersect(args: IntersectArgs) -> RunResult {
    let a: AffinePlane = read_json(&args.a)?;
    let b: AffinePlane = read_json(&args.b)?;
    let meet = hyperplane_intersection(&a, &b).map_err(|e| domain(e.to_string()))?;
    emit_json(&meet, args.out.as_deref())
}

fn space_of(kind: SpaceKind, n: usize, k: usize) -> Space {
    match kind {
        SpaceKind::Grass => Space::Grass { n, k },
        SpaceKind::Affine => Space::Affine { n, k },
    }
}

/// The construction preconditions, checked here so bad flags surface as
/// domain errors instead of library panics.
fn check_net_shape(n: usize, k: usize, r: i64) -> RunResult {
    if !(2..=4).contains(&n) {
        return Err(domain(format!("nets need ambient dimension 2 to 4, got {n}")));
    }
    if k == 0 || k >= n {
        return Err(domain(format!("plane dimension must satisfy 1 <= k < n, got k = {k}")));
    }
    if r < 1 {
        return Err(domain(format!("net scale must be at least 1, got {r}")));
    }
    Ok(())
}

fn run_net(args: NetArgs) -> RunResult {
    check_net_shape(args.n, args.k, args.r)?;
    let net = build_net(space_of(args.space, args.n, args.k), args.r, args.budget)
        .map_err(|e| domain(e.to_string()))?;
    emit_json(&net, args.out.as_deref())
}

fn run_dim(args: DimArgs) -> RunResult {
    let profile = match (&args.points, &args.planes) {
        (Some(points_path), None) => {
            if args.scales.iter().any(|&r| r < 0) {
                return Err(domain("point scales must be nonnegative"));
            }
            let points: Vec<Vec<Rational>> = read_json(points_path)?;
            if points.is_empty() {
                return Err(domain("no points to count"));
            }
            profile_points(&points, &args.scales).map_err(|e| domain(e.to_string()))?
        }
        (None, Some(planes_path)) => {
            let planes: Vec<AffinePlane> = read_json(planes_path)?;
            let first = planes.first().ok_or_else(|| domain("no planes to count"))?;
            check_net_shape(first.n(), first.k(), args.scales.iter().copied().min().unwrap_or(0))?;
            let space = Space::Affine { n: first.n(), k: first.k() };
            let mut counts = Vec::with_capacity(args.scales.len());
            for &r in &args.scales {
                let net = build_net(space, r, args.budget).map_err(|e| domain(e.to_string()))?;
                let c = box_count_planes(&planes, &net).map_err(|e| domain(e.to_string()))?;
                counts.push(c as u64);
            }
            CountProfile::new(args.scales.clone(), counts).map_err(|e| domain(e.to_string()))?
        }
        _ => return Err(domain("exactly one of --points or --planes is required")),
    };
    let window = (args.fit[0], args.fit[1]);
    let estimate = estimate_dim(&profile, window).map_err(|e| domain(e.to_string()))?;
    if let Some(path) = &args.profile_out {
        write_text(&profile.to_csv(), Some(path))?;
    }
    emit_json(&estimate, args.out.as_deref())
}

fn run_experiment(args: ExperimentArgs) -> RunResult {
    let mut config: SuiteConfig = match &args.config {
        Some(path) => read_json(path)?,
        None => standard_suite(),
    };
    if let Some(seed) = args.seed {
        config.set_seed(seed);
    }
    if let Some(tolerance) = args.tolerance {
        config.set_tolerance(tolerance);
    }
    if args.print_config {
        return emit_json(&config, None);
    }
    let outputs = run_suite(&config).map_err(|e| domain(e.to_string()))?;
    let mut report_lines = String::new();
    for output in &outputs {
        let line = serde_json::to_string(&output.report)
            .map_err(|e| domain(format!("serializing report: {e}")))?;
        writeln!(report_lines, "{line}").expect("string write");
    }
    print!("{report_lines}");
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| domain(format!("creating {}: {e}", dir.display())))?;
        write_text(&report_lines, Some(&dir.join("reports.jsonl")))?;
        for output in &outputs {
            write_profiles(dir, output)?;
        }
    }
    if outputs.iter().any(|o| !o.report.satisfied) {
        return Err(Failure { code: 3, message: "unsatisfied bound report".into() });
    }
    Ok(())
}

fn write_profiles(dir: &Path, output: &ExperimentOutput) -> RunResult {
    for named in &output.profiles {
        let path = dir.join(format!("{}.{}.csv", output.report.id, named.name));
        write_text(&named.profile.to_csv(), Some(&path))?;
    }
    Ok(())
}
