//! `skyring` — command-line front end for the multi-UAV tracking simulator.
//!
//! Three subcommands:
//!
//! - `run` simulates one scenario file and writes CSV logs and SVG plots.
//! - `sweep` repeats a scenario over a range of team sizes on an auto-ring
//!   start and writes per-size run directories plus comparison plots.
//! - `validate` parses and checks a scenario file without running it.
//!
//! Exit codes: 0 on success, 1 on a configuration error (unreadable,
//! unparsable, or invalid scenario), 2 on a runtime simulation error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skyring_core::config::{load_config, ConfigError, Placement, ScenarioConfig};
use skyring_core::{engine, report, SimError};

#[derive(Parser)]
#[command(
    name = "skyring",
    version,
    about = "Deterministic multi-UAV formation and target-tracking simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write CSV logs and plots.
    Run(RunArgs),
    /// Run a scenario at several team sizes and compare the outcomes.
    Sweep(SweepArgs),
    /// Parse and validate a scenario file without simulating.
    Validate {
        /// Scenario file (TOML).
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the scenario's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: scenario `output_dir`, then $SKYRING_OUT,
    /// then ./out).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario file (TOML); team size and placement are overridden per run.
    #[arg(long)]
    config: PathBuf,
    /// Inclusive range of team sizes, e.g. 1..10.
    #[arg(long, value_parser = parse_range)]
    uavs: (usize, usize),
    /// Output directory (default: scenario `output_dir`, then $SKYRING_OUT,
    /// then ./out).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse an inclusive `min..max` team-size range.
fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected min..max, got `{text}`"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad minimum: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad maximum: {e}"))?;
    if lo < 1 {
        return Err("minimum team size is 1".to_string());
    }
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Failures split by exit code.
enum CliError {
    Config(ConfigError),
    Sim(SimError),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Sim(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(&args),
        Command::Sweep(args) => sweep(&args),
        Command::Validate { config } => validate(&config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(e)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(CliError::Sim(e)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

/// `--out` flag, then the scenario's `output_dir`, then $SKYRING_OUT, then
/// `./out`.
fn resolve_output_dir(flag: Option<PathBuf>, config: &ScenarioConfig) -> PathBuf {
    flag.or_else(|| config.output_dir.clone())
        .or_else(|| std::env::var_os("SKYRING_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn run(args: &RunArgs) -> Result<(), CliError> {
    let mut config = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let out_dir = resolve_output_dir(args.out.clone(), &config);

    let log = engine::run(&config)?;
    let mut paths = report::emit_csv(&log, &out_dir)?;
    paths.extend(report::emit_plots(&log, &out_dir)?);
    for path in &paths {
        println!("wrote {}", path.display());
    }
    match log.converged_round {
        Some(round) => println!("converged at round {round}"),
        None => println!("did not converge within {} rounds", config.max_rounds),
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let template = load_config(&args.config)?;
    let out_dir = resolve_output_dir(args.out.clone(), &template);
    // Explicit pose lists cannot scale with the team size, so every swept
    // run starts on the evenly spaced ring; the ring height is kept if the
    // scenario already used one.
    let height = match template.placement {
        Placement::AutoRing { height } => height,
        Placement::Explicit { .. } => 50.0,
    };

    let (lo, hi) = args.uavs;
    let mut points = Vec::with_capacity(hi - lo + 1);
    for m in lo..=hi {
        let config = ScenarioConfig {
            num_uavs: m,
            max_rounds: 200,
            placement: Placement::AutoRing { height },
            output_dir: None,
            ..template.clone()
        };
        config.validate()?;
        let log = engine::run(&config).map_err(|e| {
            eprintln!("sweep failed at {m} UAVs");
            e
        })?;
        let run_dir = out_dir.join(format!("m_{m:02}"));
        report::emit_csv(&log, &run_dir)?;
        report::emit_plots(&log, &run_dir)?;
        let point = report::summarize_final(&log);
        println!(
            "{m} UAVs: total view {:.1} deg, effective view {:.1} deg, {}",
            point.total_view,
            point.effective_view,
            match log.converged_round {
                Some(round) => format!("converged at round {round}"),
                None => "not converged".to_string(),
            }
        );
        points.push(point);
    }

    let mut paths = vec![report::emit_sweep_csv(&points, &out_dir)?];
    paths.extend(report::emit_sweep_plots(&points, &out_dir)?);
    for path in &paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn validate(config_path: &Path) -> Result<(), CliError> {
    let config = load_config(config_path)?;
    println!(
        "{}: valid ({} UAVs, {} rounds)",
        config_path.display(),
        config.num_uavs,
        config.max_rounds
    );
    Ok(())
}
