//! `twocell` command line: Monte Carlo sweeps (`run`) and oracle
//! verification (`verify`).
//!
//! Exit codes: 0 on success, 1 for invalid configuration or usage, 2 when a
//! verification suite finds a discrepancy. Every flag can also be supplied
//! through `--config FILE` as `key = value` lines; explicit flags win.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use twocell::assign::EXHAUSTIVE_MAX_SUBCHANNELS;
use twocell::harness::{emit_csv, emit_plot, run_sweep};
use twocell::verify::{verify_dinkelbach, verify_hungarian, VerifyOutcome};
use twocell::{Method, SimConfig};

const EXIT_OK: i32 = 0;
const EXIT_INVALID_CONFIG: i32 = 1;
const EXIT_VERIFY_FAILED: i32 = 2;

/// Seed of the verification suites; fixed so `verify` is reproducible.
const VERIFY_SEED: u64 = 42;
const VERIFY_HUNGARIAN_CASES: usize = 500;
const VERIFY_DINKELBACH_CASES: usize = 500;

#[derive(Parser)]
#[command(
    name = "twocell",
    version,
    about = "Two-cell uplink assignment and power-control simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo SNR sweep and write CSV (and optionally an SVG plot).
    Run(RunArgs),
    /// Check the fast solvers against exhaustive oracles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Optional key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Users per cell (= sub-channels per cell) [default: 3]
    #[arg(long)]
    users: Option<usize>,
    /// Monte Carlo trials per SNR point [default: 2000]
    #[arg(long)]
    trials: Option<usize>,
    /// First SNR point, dB [default: -10]
    #[arg(long)]
    snr_start: Option<f64>,
    /// Last SNR point, dB [default: 30]
    #[arg(long)]
    snr_stop: Option<f64>,
    /// SNR grid spacing, dB [default: 5]
    #[arg(long)]
    snr_step: Option<f64>,
    /// Master seed of all random streams [default: 42]
    #[arg(long)]
    seed: Option<u64>,
    /// Path-loss exponent [default: 3]
    #[arg(long)]
    alpha: Option<f64>,
    /// Convergence tolerance of the power solver [default: 1e-8]
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated method list [default: all methods]
    #[arg(long)]
    methods: Option<String>,
    /// Output CSV path [default: results.csv]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG plot path.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Optional key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid points per axis of the power-solver oracle [default: 1001]
    #[arg(long)]
    grid_resolution: Option<usize>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID_CONFIG,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run(args) => match run_command(args) {
            Ok(()) => EXIT_OK,
            Err(msg) => {
                eprintln!("error: {msg}");
                EXIT_INVALID_CONFIG
            }
        },
        Command::Verify(args) => match verify_command(args) {
            Ok(true) => EXIT_OK,
            Ok(false) => EXIT_VERIFY_FAILED,
            Err(msg) => {
                eprintln!("error: {msg}");
                EXIT_INVALID_CONFIG
            }
        },
    }
}

// ============================================================================
// Config file
// ============================================================================

const KNOWN_KEYS: [&str; 12] = [
    "users",
    "trials",
    "snr-start",
    "snr-stop",
    "snr-step",
    "seed",
    "alpha",
    "delta",
    "methods",
    "out",
    "plot",
    "grid-resolution",
];

/// Parsed `key = value` file; keys mirror the long flag names.
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn empty() -> Self {
        FileConfig(HashMap::new())
    }

    fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        let mut map = HashMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "{}:{}: expected 'key = value', got '{raw_line}'",
                    path.display(),
                    idx + 1
                ));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(format!(
                    "{}:{}: unknown key '{key}' (known: {})",
                    path.display(),
                    idx + 1,
                    KNOWN_KEYS.join(", ")
                ));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(FileConfig(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, String>
    where
        T::Err: Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("config key '{key}': invalid value '{raw}': {e}")),
        }
    }
}

fn load_file_config(path: &Option<PathBuf>) -> Result<FileConfig, String> {
    match path {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::empty()),
    }
}

// ============================================================================
// run
// ============================================================================

fn parse_methods(list: &str) -> Result<Vec<Method>, String> {
    let mut methods = Vec::new();
    for item in list.split(',') {
        let name = item.trim();
        if name.is_empty() {
            return Err("empty entry in method list".into());
        }
        if name == "dc_programming" {
            return Err("method 'dc_programming' is reserved but not implemented \
                 (external DC-programming baseline)"
                .into());
        }
        let method: Method = name.parse().map_err(|e| format!("{e}"))?;
        if !methods.contains(&method) {
            methods.push(method);
        }
    }
    Ok(methods)
}

fn build_snr_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
        return Err("SNR bounds and step must be finite".into());
    }
    if step <= 0.0 {
        return Err("snr-step must be positive".into());
    }
    if stop < start {
        return Err("snr-stop must not be below snr-start".into());
    }
    let points = ((stop - start) / step + 1.0 + 1e-9).floor() as usize;
    if points > 10_000 {
        return Err(format!(
            "SNR grid has {points} points; that is not a desk-scale sweep"
        ));
    }
    Ok((0..points).map(|k| start + step * k as f64).collect())
}

fn run_command(args: RunArgs) -> Result<(), String> {
    let file = load_file_config(&args.config)?;

    let users = args.users.or(file.get("users")?).unwrap_or(3);
    let trials = args.trials.or(file.get("trials")?).unwrap_or(2000);
    let snr_start = args.snr_start.or(file.get("snr-start")?).unwrap_or(-10.0);
    let snr_stop = args.snr_stop.or(file.get("snr-stop")?).unwrap_or(30.0);
    let snr_step = args.snr_step.or(file.get("snr-step")?).unwrap_or(5.0);
    let seed = args.seed.or(file.get("seed")?).unwrap_or(42);
    let alpha = args.alpha.or(file.get("alpha")?).unwrap_or(3.0);
    let delta = args.delta.or(file.get("delta")?).unwrap_or(1e-8);
    let methods_list = args
        .methods
        .or(file.get("methods")?)
        .unwrap_or_else(|| Method::ALL.map(|m| m.name().to_string()).join(","));
    let out = args
        .out
        .or(file.get("out")?)
        .unwrap_or_else(|| PathBuf::from("results.csv"));
    let plot = match args.plot {
        Some(p) => Some(p),
        None => file.get("plot")?,
    };
    let grid_resolution = file.get("grid-resolution")?.unwrap_or(1001);

    let methods = parse_methods(&methods_list)?;
    if methods.is_empty() {
        return Err("method list is empty".into());
    }
    let wants_exhaustive = methods
        .iter()
        .any(|m| matches!(m, Method::ExhaustiveOpt | Method::ExhaustiveFull));
    if wants_exhaustive && users > EXHAUSTIVE_MAX_SUBCHANNELS {
        return Err(format!(
            "exhaustive methods enumerate (users!)² joint assignments and are \
             capped at {EXHAUSTIVE_MAX_SUBCHANNELS} users; got {users}"
        ));
    }

    let cfg = SimConfig {
        num_subchannels: users,
        users_per_cell: users,
        path_loss_exponent: alpha,
        snr_grid_db: build_snr_grid(snr_start, snr_stop, snr_step)?,
        trials,
        master_seed: seed,
        dinkelbach_tolerance: delta,
        grid_resolution,
        ..SimConfig::new(users)
    };
    cfg.validate().map_err(|e| e.to_string())?;

    let result = run_sweep(&cfg, &methods).map_err(|e| e.to_string())?;
    emit_csv(&result, &out).map_err(|e| format!("writing {}: {e}", out.display()))?;
    println!("wrote {} ({} rows)", out.display(), result.rows.len());
    if let Some(plot_path) = plot {
        emit_plot(&result, &plot_path)
            .map_err(|e| format!("writing {}: {e}", plot_path.display()))?;
        println!("wrote {}", plot_path.display());
    }
    Ok(())
}

// ============================================================================
// verify
// ============================================================================

fn report_suite(label: &str, outcome: &VerifyOutcome) {
    if outcome.passed() {
        println!(
            "{label}: {}/{} checks passed",
            outcome.checks, outcome.checks
        );
    } else {
        println!(
            "{label}: {} of {} checks FAILED",
            outcome.failures.len(),
            outcome.checks
        );
        for failure in outcome.failures.iter().take(5) {
            eprintln!("  {failure}");
        }
        if outcome.failures.len() > 5 {
            eprintln!("  ... and {} more", outcome.failures.len() - 5);
        }
    }
}

fn verify_command(args: VerifyArgs) -> Result<bool, String> {
    let file = load_file_config(&args.config)?;
    let grid_resolution = args
        .grid_resolution
        .or(file.get("grid-resolution")?)
        .unwrap_or(1001);
    if grid_resolution < 2 {
        return Err("grid-resolution must be at least 2".into());
    }

    let hungarian = verify_hungarian(VERIFY_HUNGARIAN_CASES, VERIFY_SEED);
    report_suite("hungarian vs enumeration", &hungarian);

    let dinkelbach = verify_dinkelbach(VERIFY_DINKELBACH_CASES, grid_resolution, VERIFY_SEED);
    report_suite(
        &format!("power solver vs grid (resolution {grid_resolution})"),
        &dinkelbach,
    );

    Ok(hungarian.passed() && dinkelbach.passed())
}
