//! `gruss-lab`: run inequality scenarios, fuzz for violations and tightness,
//! reproduce the worked examples, and query scalar centers.
//!
//! Exit codes: 0 = all satisfied, 1 = violation found, 2 = usage/schema
//! error, 3 = numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grusslab::formats::{CPair, Exponent, Scenario};
use grusslab::fuzz::{fuzz, FuzzConfig};
use grusslab::generators::MapFamily;
use grusslab::reproduce::{reproduce_paper, rows_to_csv};
use grusslab::runcheck::run_check;
use grusslab::HarnessError;
use grusslab_core::scalar_center::distance_to_scalars;
use grusslab_core::{ComplexMatrix, ToleranceConfig};

#[derive(Parser)]
#[command(name = "gruss-lab", version, about = "Verification workbench for Grüss-type operator inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file through its inequality check.
    Check(CheckArgs),
    /// Fuzz an inequality with seed-indexed random instances.
    Fuzz(FuzzArgs),
    /// Recompute the worked examples and compare against printed values.
    Reproduce(ReproduceArgs),
    /// Distance from a matrix to the scalars: gamma, radius, evaluations.
    Gamma(GammaArgs),
    /// Trace Grüss bounds on a noncommutative probability space.
    TraceCheck(TraceCheckArgs),
    /// Hilbert C*-module checks from a scenario file.
    ModuleCheck(ModuleCheckArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Relative tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Print the report as a CSV row instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct FuzzArgs {
    /// Inequality id (e.g. covariance, trace.v1, module.gruss).
    #[arg(long)]
    inequality: String,
    /// Comma-separated dimensions, e.g. 2,3,4.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for summary and violation replays.
    #[arg(long)]
    out: Option<PathBuf>,
    /// cp_kraus | scaled_cp | builtin:<name>
    #[arg(long, default_value = "cp_kraus")]
    map_family: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Relative tolerance override.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct GammaArgs {
    /// Matrix JSON file.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct TraceCheckArgs {
    /// v1 | v2 | v3 | pq
    #[arg(long)]
    variant: String,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long = "T")]
    t: PathBuf,
    #[arg(long = "A")]
    a: PathBuf,
    #[arg(long = "B")]
    b: PathBuf,
    /// Complex scalar as "re,im" (or just "re").
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    /// Rescale T to normalized trace 1 before validation.
    #[arg(long)]
    renormalize: bool,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ModuleCheckArgs {
    /// module.variance | module.gruss | module.lifted | hilbert.gruss | module.accretive
    #[arg(long)]
    inequality: String,
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
}

/// Tolerance resolution: flag > scenario file > GRUSS_LAB_TOL env > default.
fn effective_tol(flag: Option<f64>, from_file: Option<ToleranceConfig>) -> Result<ToleranceConfig, HarnessError> {
    if let Some(rel) = flag {
        return Ok(ToleranceConfig { rel, ..ToleranceConfig::default() });
    }
    if let Some(t) = from_file {
        return Ok(t);
    }
    match std::env::var("GRUSS_LAB_TOL") {
        Ok(text) => {
            let rel: f64 = text
                .parse()
                .map_err(|_| HarnessError::Schema(format!("GRUSS_LAB_TOL={text:?} is not a number")))?;
            Ok(ToleranceConfig { rel, ..ToleranceConfig::default() })
        }
        Err(_) => Ok(ToleranceConfig::default()),
    }
}

fn parse_cpair(text: &str) -> Result<CPair, HarnessError> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| HarnessError::Schema(format!("bad complex component {s:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(CPair(parse(re)?, 0.0)),
        [re, im] => Ok(CPair(parse(re)?, parse(im)?)),
        _ => Err(HarnessError::Schema(format!("bad complex scalar {text:?}, want \"re,im\""))),
    }
}

fn parse_exponent(text: &str) -> Result<Exponent, HarnessError> {
    let lower = text.to_ascii_lowercase();
    if lower == "inf" || lower == "infinity" {
        return Ok(Exponent(f64::INFINITY));
    }
    lower
        .parse::<f64>()
        .map(Exponent)
        .map_err(|_| HarnessError::Schema(format!("bad exponent {text:?}")))
}

fn load_matrix(path: &PathBuf) -> Result<ComplexMatrix, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| HarnessError::Schema(format!("{}: {e}", path.display())))
}

fn print_report(report: &grusslab_core::InequalityReport) -> Result<i32, HarnessError> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(if report.satisfied { 0 } else { 1 })
}

fn cmd_check(args: CheckArgs) -> Result<i32, HarnessError> {
    let mut scenario = Scenario::from_file(&args.scenario)?;
    scenario.tol = Some(effective_tol(args.tol, scenario.tol)?);
    let base = args.scenario.parent().map(|p| p.to_path_buf());
    let report = run_check(&scenario, base.as_deref())?;
    if args.csv {
        let dim = scenario
            .a
            .as_ref()
            .or(scenario.x.as_ref())
            .or(scenario.t.as_ref())
            .map(|m| m.rows())
            .unwrap_or(0);
        println!("{}", grusslab::formats::REPORT_CSV_HEADER);
        println!("{}", grusslab::formats::report_csv_row(&report, dim));
        Ok(if report.satisfied { 0 } else { 1 })
    } else {
        print_report(&report)
    }
}

fn cmd_fuzz(args: FuzzArgs) -> Result<i32, HarnessError> {
    let map_family: MapFamily = args.map_family.parse().map_err(HarnessError::Schema)?;
    let config = FuzzConfig {
        inequality_id: args.inequality,
        dims: args.dims,
        trials: args.trials,
        master_seed: args.seed,
        tol: effective_tol(args.tol, None)?,
        map_family,
        output: args.out,
        workers: args.workers,
    };
    let summary = fuzz(&config)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(if summary.violations > 0 { 1 } else { 0 })
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<i32, HarnessError> {
    let rows = reproduce_paper()?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else if args.csv {
        print!("{}", rows_to_csv(&rows));
    } else {
        println!(
            "{:<26} {:<14} {:>12} {:>14} {:>12}  pass",
            "case", "quantity", "expected", "computed", "abs_error"
        );
        for r in &rows {
            println!(
                "{:<26} {:<14} {:>12} {:>14.8} {:>12.3e}  {}",
                r.case_id,
                r.quantity,
                r.expected,
                r.computed,
                r.abs_error,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn cmd_gamma(args: GammaArgs) -> Result<i32, HarnessError> {
    let matrix = load_matrix(&args.matrix)?;
    let cfg = effective_tol(args.tol, None)?;
    let result = distance_to_scalars(&matrix, &cfg).map_err(|e| HarnessError::Check(e.to_string()))?;
    println!(
        "{}",
        serde_json::json!({
            "gamma": [result.gamma.re, result.gamma.im],
            "radius": result.radius,
            "evaluations": result.evaluations,
            "certified_gap": result.certified_gap,
        })
    );
    Ok(0)
}

fn cmd_trace_check(args: TraceCheckArgs) -> Result<i32, HarnessError> {
    let variant = match args.variant.as_str() {
        "v1" => "trace.v1",
        "v2" => "trace.v2",
        "v3" => "trace.v3",
        "pq" => "trace.pq",
        other => {
            return Err(HarnessError::Schema(format!(
                "unknown variant {other:?} (v1 | v2 | v3 | pq)"
            )))
        }
    };
    let mut scenario = Scenario::new(variant);
    scenario.t = Some(load_matrix(&args.t)?);
    scenario.a = Some(load_matrix(&args.a)?);
    scenario.b = Some(load_matrix(&args.b)?);
    scenario.alpha = args.alpha.as_deref().map(parse_cpair).transpose()?;
    scenario.beta = args.beta.as_deref().map(parse_cpair).transpose()?;
    scenario.renormalize = args.renormalize.then_some(true);
    if variant == "trace.pq" {
        fn need<'a>(opt: &'a Option<String>, name: &str) -> Result<&'a str, HarnessError> {
            opt.as_deref()
                .ok_or_else(|| HarnessError::Schema(format!("variant pq needs --{name}")))
        }
        scenario.p = Some(parse_exponent(need(&args.p, "p")?)?);
        scenario.q = Some(parse_exponent(need(&args.q, "q")?)?);
        scenario.r = Some(parse_exponent(need(&args.r, "r")?)?);
    }
    scenario.tol = Some(effective_tol(args.tol, None)?);
    let report = run_check(&scenario, None)?;
    print_report(&report)
}

fn cmd_module_check(args: ModuleCheckArgs) -> Result<i32, HarnessError> {
    let mut scenario = Scenario::from_file(&args.scenario)?;
    scenario.inequality = args.inequality;
    scenario.tol = Some(effective_tol(args.tol, scenario.tol)?);
    let base = args.scenario.parent().map(|p| p.to_path_buf());
    let report = run_check(&scenario, base.as_deref())?;
    print_report(&report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Gamma(args) => cmd_gamma(args),
        Command::TraceCheck(args) => cmd_trace_check(args),
        Command::ModuleCheck(args) => cmd_module_check(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
