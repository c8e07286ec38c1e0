//! `delaynet` — compile decision problems to delay devices, simulate
//! them exactly, and read off answers.
//!
//! Exit codes: 0 = YES, 1 = NO, 2 = any error (parse, validation,
//! horizon, verification), 3 = front budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use delaynet_core::{
    compile, compile_with_k, device_report, growth_classification, horizon_for, oracle_for,
    read_device, read_instance, simulate_with_budget, write_arrivals_csv, write_device,
    write_growth_json, write_oracle_json, write_report_json, Answer, ArrivalMap,
    CompilationResult, Decision, Device, Error, GuardedRun, OracleBounds, PhysicalParams,
    ProblemInstance, ReadoutSpec, TimeUnits,
};

/// Desk-scale default for the front budget; exponential devices trip it
/// before exhausting memory.
const DEFAULT_MAX_FRONTS: u64 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "delaynet",
    about = "Compile, simulate and analyze delay-signal computing devices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a problem instance into a device document with a readout window
    Compile(CompileArgs),
    /// Propagate the unit signal through a device and tabulate arrivals as CSV
    Simulate(SimulateArgs),
    /// Compile, simulate and read the answer in one step
    Solve(SolveArgs),
    /// Physical report for a device or instance; --growth classifies delay growth
    Analyze(AnalyzeArgs),
    /// Brute-force reference answer for an instance
    Oracle(OracleArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// Instance document (JSON)
    instance: PathBuf,
    /// Padding delay for the chain constructions (default 1)
    #[arg(long, value_parser = parse_time_arg)]
    k: Option<TimeUnits>,
    /// Output path (default: standard output)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Device document (JSON)
    device: PathBuf,
    /// Simulation horizon (default: the device's readout upper end)
    #[arg(long, value_parser = parse_time_arg)]
    horizon: Option<TimeUnits>,
    /// Abort when this many live merged fronts is exceeded
    #[arg(long, default_value_t = DEFAULT_MAX_FRONTS)]
    max_fronts: u64,
    /// Output path (default: standard output)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance document (JSON)
    instance: PathBuf,
    /// Padding delay for the chain constructions (default 1)
    #[arg(long, value_parser = parse_time_arg)]
    k: Option<TimeUnits>,
    /// Simulation horizon (default: the readout upper end)
    #[arg(long, value_parser = parse_time_arg)]
    horizon: Option<TimeUnits>,
    /// Abort when this many live merged fronts is exceeded
    #[arg(long, default_value_t = DEFAULT_MAX_FRONTS)]
    max_fronts: u64,
    /// Cross-check the device answer against the brute-force oracle
    #[arg(long)]
    verify: bool,
    /// Also write the compiled device document here
    #[arg(long)]
    emit_device: Option<PathBuf>,
    /// Also write the arrivals CSV here
    #[arg(long)]
    emit_arrivals: Option<PathBuf>,
    /// Output path for the decision report (default: standard output)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Instance or device document (JSON)
    input: PathBuf,
    /// Signal speed in meters per second
    #[arg(long = "v", default_value_t = 3.0e8)]
    signal_speed: f64,
    /// Timing precision in seconds
    #[arg(long = "P", default_value_t = 1.0e-12)]
    precision: f64,
    /// Classify delay growth over these instance sizes instead
    #[arg(long, value_delimiter = ',')]
    growth: Option<Vec<usize>>,
    /// Simulation horizon (default: the readout upper end)
    #[arg(long, value_parser = parse_time_arg)]
    horizon: Option<TimeUnits>,
    /// Abort when this many live merged fronts is exceeded
    #[arg(long, default_value_t = DEFAULT_MAX_FRONTS)]
    max_fronts: u64,
    /// Output path (default: standard output)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance document (JSON)
    instance: PathBuf,
    /// Output path (default: standard output)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_time_arg(text: &str) -> Result<TimeUnits, String> {
    TimeUnits::from_decimal(text).map_err(|e| e.to_string())
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::File {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(target: Option<&Path>, text: &str) -> Result<(), Failure> {
    match target {
        Some(path) => fs::write(path, text).map_err(|source| Failure::File {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compile(args) => cmd_compile(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(2)
        }
    }
}

fn compile_instance(
    instance: &ProblemInstance,
    k: Option<&TimeUnits>,
) -> Result<CompilationResult, Error> {
    match k {
        Some(k) => compile_with_k(instance, k),
        None => compile(instance),
    }
}

fn cmd_compile(args: CompileArgs) -> Result<ExitCode, Failure> {
    let instance = read_instance(&read_file(&args.instance)?)?;
    let result = compile_instance(&instance, args.k.as_ref())?;
    emit(
        args.output.as_deref(),
        &write_device(&result.device, Some(&result.readout)),
    )?;
    Ok(ExitCode::SUCCESS)
}

/// Runs the guarded simulation; a budget trip reports to stderr and maps
/// to exit code 3.
fn guarded_simulate(
    device: &Device,
    horizon: &TimeUnits,
    max_fronts: u64,
) -> Result<Result<ArrivalMap, ExitCode>, Failure> {
    match simulate_with_budget(device, horizon, max_fronts).map_err(Error::from)? {
        GuardedRun::Completed(map) => Ok(Ok(map)),
        GuardedRun::BudgetExceeded(report) => {
            eprintln!(
                "front budget exceeded: {} live fronts over the limit of {} \
                 ({} fronts processed, last time reached {})",
                report.live_fronts,
                report.max_fronts,
                report.fronts_processed,
                report
                    .max_time_reached
                    .map_or_else(|| "-".to_string(), |t| t.to_string()),
            );
            Ok(Err(ExitCode::from(3)))
        }
    }
}

fn summary_line(horizon: &TimeUnits, map: &ArrivalMap) {
    let stats = map.stats();
    eprintln!(
        "horizon {horizon}: {} arrival times, {} walks arrived; \
         {} fronts processed, peak {} live; lost {}, pruned {}",
        map.entries().len(),
        map.total_count(),
        stats.fronts_processed,
        stats.peak_live_fronts,
        stats.lost_intensity,
        stats.pruned_intensity,
    );
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, Failure> {
    let (device, readout) = read_device(&read_file(&args.device)?)?;
    let horizon = match args.horizon.or_else(|| readout.map(|r| r.hi().clone())) {
        Some(h) => h,
        None => {
            return Err(Error::InvalidConstant(
                "this device has no readout window; pass --horizon".into(),
            )
            .into())
        }
    };
    let map = match guarded_simulate(&device, &horizon, args.max_fronts)? {
        Ok(map) => map,
        Err(code) => return Ok(code),
    };
    summary_line(&horizon, &map);
    emit(args.output.as_deref(), &write_arrivals_csv(&map))?;
    Ok(ExitCode::SUCCESS)
}

fn decision_report(answer: &Answer, readout: &ReadoutSpec, verified: Option<bool>) -> String {
    let value = json!({
        "decision": answer.decision.to_string(),
        "multiplicity": answer.multiplicity.to_string(),
        "intensity": {
            "numerator": answer.intensity.numer().to_string(),
            "denominator": answer.intensity.denom().to_string(),
        },
        "hit_times": answer.hit_times.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "readout": {
            "lo": readout.lo().to_string(),
            "hi": readout.hi().to_string(),
            "description": readout.description(),
        },
        "verified": verified,
    });
    let mut text = serde_json::to_string_pretty(&value).expect("reports always serialize");
    text.push('\n');
    text
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let instance = read_instance(&read_file(&args.instance)?)?;
    let result = compile_instance(&instance, args.k.as_ref())?;
    if let Some(path) = &args.emit_device {
        emit(Some(path), &write_device(&result.device, Some(&result.readout)))?;
    }

    let horizon = args.horizon.unwrap_or_else(|| horizon_for(&result));
    let map = match guarded_simulate(&result.device, &horizon, args.max_fronts)? {
        Ok(map) => map,
        Err(code) => return Ok(code),
    };
    if let Some(path) = &args.emit_arrivals {
        emit(Some(path), &write_arrivals_csv(&map))?;
    }

    let answer = map.read(&result.readout).map_err(Error::from)?;

    let verified = if args.verify {
        let oracle = oracle_for(&instance, &OracleBounds::default()).map_err(Error::from)?;
        if oracle.count != answer.multiplicity || oracle.decision != answer.decision {
            eprintln!(
                "verification failed: device found {} ({} walks), oracle found {} ({} solutions)",
                answer.decision, answer.multiplicity, oracle.decision, oracle.count
            );
            eprintln!("--- device document ---");
            eprint!("{}", write_device(&result.device, Some(&result.readout)));
            eprintln!("--- arrivals ---");
            eprint!("{}", write_arrivals_csv(&map));
            eprintln!("--- oracle ---");
            eprint!("{}", write_oracle_json(&oracle));
            return Ok(ExitCode::from(2));
        }
        Some(true)
    } else {
        None
    };

    emit(
        args.output.as_deref(),
        &decision_report(&answer, &result.readout, verified),
    )?;
    Ok(match answer.decision {
        Decision::Yes => ExitCode::SUCCESS,
        Decision::No => ExitCode::from(1),
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, Failure> {
    let text = read_file(&args.input)?;
    let probe: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::MalformedJson(e.to_string()))?;
    let is_instance = probe.get("problem").is_some();

    if let Some(sizes) = &args.growth {
        if !is_instance {
            return Err(Error::InvalidConstant(
                "growth classification needs an instance document, not a device".into(),
            )
            .into());
        }
        let instance = read_instance(&text)?;
        let report = growth_classification(instance.kind(), sizes).map_err(Error::from)?;
        emit(args.output.as_deref(), &write_growth_json(&report))?;
        return Ok(ExitCode::SUCCESS);
    }

    let params =
        PhysicalParams::new(args.signal_speed, args.precision).map_err(Error::from)?;
    let (device, default_horizon) = if is_instance {
        let instance = read_instance(&text)?;
        let result = compile_instance(&instance, None)?;
        let horizon = horizon_for(&result);
        (result.device, Some(horizon))
    } else {
        let (device, readout) = read_device(&text)?;
        (device, readout.map(|r| r.hi().clone()))
    };
    let horizon = match args.horizon.or(default_horizon) {
        Some(h) => h,
        None => {
            return Err(Error::InvalidConstant(
                "this device has no readout window; pass --horizon".into(),
            )
            .into())
        }
    };
    let map = match guarded_simulate(&device, &horizon, args.max_fronts)? {
        Ok(map) => map,
        Err(code) => return Ok(code),
    };
    let report = device_report(&device, &map, &params);
    emit(args.output.as_deref(), &write_report_json(&report))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, Failure> {
    let instance = read_instance(&read_file(&args.instance)?)?;
    let result = oracle_for(&instance, &OracleBounds::default()).map_err(Error::from)?;
    emit(args.output.as_deref(), &write_oracle_json(&result))?;
    Ok(match result.decision {
        Decision::Yes => ExitCode::SUCCESS,
        Decision::No => ExitCode::from(1),
    })
}
