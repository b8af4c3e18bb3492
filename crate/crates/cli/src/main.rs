use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use helixkit::curves::{generate, resample_by_arclength, CurveFile, GeneratorKind, ParamMap, MIN_CURVE_NODES};
use helixkit::helix::{classify, verify_theorem, Analysis, Theorem, Verdict, DEFAULT_TOL};
use helixkit::Error;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_BAD_PARAMS: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Parser)]
#[command(name = "helixkit", version, about = "Generate, analyze and verify curves for the helix criteria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a sampled test curve to a curve file.
    Generate(GenerateArgs),
    /// Classify the curve in a file and write a JSON report.
    Analyze(AnalyzeArgs),
    /// Check one theorem numerically on the curve in a file.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// circular-helix, w-curve-5, clifford-s3, generic-3d or perturbed-<kind>
    #[arg(long)]
    kind: String,
    /// Comma-separated name=value pairs, e.g. a=3,b=4
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value_t = 2000)]
    nodes: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to $HELIX_TOL, then 1e-3.
    #[arg(long)]
    tol: Option<f64>,
    /// Report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write Frenet and harmonic tables next to the report.
    #[arg(long)]
    dump_profiles: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// T3, T6, T7, T8≡C9 (or T8=C9) or T10
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    tol: Option<f64>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) | Error::Format(_) => EXIT_IO,
            Error::DegenerateCurvature { .. } | Error::DegenerateCurve { .. } | Error::NonMonotoneLength => {
                EXIT_DEGENERATE
            }
            _ => EXIT_BAD_PARAMS,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => run_generate(&args),
        Command::Analyze(args) => run_analyze(&args),
        Command::Verify(args) => run_verify(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_params(text: &str) -> Result<ParamMap, Failure> {
    let mut map = ParamMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| Failure::new(EXIT_BAD_PARAMS, format!("parameter '{pair}' is not of the form name=value")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Failure::new(EXIT_BAD_PARAMS, format!("parameter {name} = '{value}' is not a number")))?;
        map.insert(name.trim().to_string(), value);
    }
    Ok(map)
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("HELIX_TOL") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Failure::new(EXIT_BAD_PARAMS, format!("HELIX_TOL = '{s}' is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::new(EXIT_BAD_PARAMS, format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, format!("{text}\n")).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn run_generate(args: &GenerateArgs) -> Result<u8, Failure> {
    let kind: GeneratorKind = args.kind.parse()?;
    let params = parse_params(&args.params)?;
    if args.nodes < MIN_CURVE_NODES {
        return Err(Failure::new(EXIT_BAD_PARAMS, format!("--nodes must be at least {MIN_CURVE_NODES}")));
    }
    let spec = generate(&kind, &params)?;
    let curve = resample_by_arclength(&spec, args.nodes)?;
    CurveFile::from_unit_speed(spec.space, &curve).save(&args.out)?;
    Ok(EXIT_OK)
}

fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "curve".into());
    base.with_file_name(format!("{stem}.{suffix}.json"))
}

fn run_analyze(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let tol = resolve_tol(args.tol)?;
    let file = CurveFile::load(&args.input)?;
    let report = match file.to_curve(None) {
        Ok(curve) => {
            if args.dump_profiles {
                let base = args.report.as_deref().unwrap_or(&args.input);
                if let Ok(analysis) = Analysis::run(&file.space, &curve) {
                    write(&sibling(base, "frenet"), &analysis.apparatus.to_json_string())?;
                    write(&sibling(base, "harmonic"), &analysis.profile.to_json_string(Some(&analysis.residual)))?;
                }
            }
            classify(&file.space, &curve, tol)?
        }
        Err(e @ (Error::DegenerateCurve { .. } | Error::NonMonotoneLength)) => {
            helixkit::helix::HelixReport::degenerate(tol, e.to_string())
        }
        Err(e) => return Err(e.into()),
    };
    let text = report.to_json_string();
    match &args.report {
        Some(path) => write(path, &text)?,
        None => println!("{text}"),
    }
    Ok(match report.verdict {
        Verdict::Helix => EXIT_OK,
        Verdict::NonHelix => EXIT_NEGATIVE,
        Verdict::Degenerate => EXIT_DEGENERATE,
    })
}

fn run_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let theorem: Theorem = args.theorem.parse()?;
    let tol = resolve_tol(args.tol)?;
    let file = CurveFile::load(&args.input)?;
    let curve = file.to_curve(None)?;
    let result = verify_theorem(theorem, &file.space, &curve).map_err(|e| match e {
        Error::Io(_) | Error::Format(_) => Failure::from(e),
        other => Failure::new(EXIT_BAD_PARAMS, format!("{theorem} is not applicable: {other}")),
    })?;
    let pass = result.max_deviation < tol;
    let summary = serde_json::json!({
        "theorem": result.theorem,
        "max_deviation": result.max_deviation,
        "threshold": tol,
        "pass": pass,
        "details": result.details,
    });
    println!("{}", helixkit::json::to_json_string(&summary));
    Ok(if pass { EXIT_OK } else { EXIT_NEGATIVE })
}
