//! `inac-sim`: run configuration-driven INAC network experiments.
//!
//! Thin front-end over the library; all experiment logic lives in
//! `inac_sim::scenario`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use inac_sim::scenario::{self, ConfigError, RunError, ScenarioReport};
use inac_sim::tle;

#[derive(Parser)]
#[command(name = "inac-sim", version, about = "Integrated navigation and communication satellite network simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario sweep from a JSON config and emit CSV
    Run {
        /// Scenario config document (JSON)
        #[arg(long)]
        config: PathBuf,
        /// Override the config's RNG seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's Monte Carlo trial count
        #[arg(long)]
        trials: Option<usize>,
        /// Output CSV path (default: config's output_path, else <config>.csv)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress the emission timestamp so identical runs are
        /// byte-identical
        #[arg(long)]
        reproducible: bool,
        /// Also write a gnuplot script next to the CSV
        #[arg(long)]
        emit_plot: bool,
    },
    /// Validate a config document and echo the fully-defaulted form
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize a TLE catalog file
    TleInfo { path: PathBuf },
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("INAC_SIM_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: INAC_SIM_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(1);
            }
        }
    }

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, seed, trials, out, reproducible, emit_plot } => {
            cmd_run(&config, seed, trials, out, reproducible, emit_plot)
        }
        Command::Validate { config } => cmd_validate(&config),
        Command::TleInfo { path } => cmd_tle_info(&path),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum CliError {
    Config(ConfigError),
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => CliError::Config(c),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn cmd_run(
    config_path: &Path,
    seed: Option<u64>,
    trials: Option<usize>,
    out: Option<PathBuf>,
    reproducible: bool,
    emit_plot: bool,
) -> Result<(), CliError> {
    let mut config = scenario::validate_config_path(config_path)?;
    if let Some(seed) = seed {
        config.rng_seed = seed;
    }
    if let Some(trials) = trials {
        if trials == 0 {
            return Err(CliError::Config(ConfigError::Semantic("trials must be >= 1".into())));
        }
        config.trials = trials;
    }

    let report = scenario::run_scenario(&config)?;
    print_report(&report);

    let out_path = out
        .or_else(|| config.output_path.clone())
        .unwrap_or_else(|| config_path.with_extension("csv"));
    scenario::emit_csv(&report, &out_path, reproducible)?;
    println!("wrote {}", out_path.display());

    if emit_plot {
        let script = scenario::emit_plot_script(&out_path, report.kind)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        println!("wrote {}", script.display());
    }
    Ok(())
}

fn print_report(report: &ScenarioReport) {
    print!("{:>14}", "sweep_value");
    for name in &report.metric_names {
        print!(" {name:>16}");
    }
    println!();
    for row in &report.rows {
        print!("{:>14.4}", row.sweep_value);
        for m in &row.metrics {
            print!(" {m:>16.6}");
        }
        println!();
    }
}

fn cmd_validate(config_path: &Path) -> Result<(), CliError> {
    let config = scenario::validate_config_path(config_path)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&config).map_err(|e| CliError::Runtime(e.to_string()))?
    );
    if !config.defaults_applied.is_empty() {
        eprintln!("defaults applied: {}", config.defaults_applied.join("; "));
    }
    Ok(())
}

fn cmd_tle_info(path: &Path) -> Result<(), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    let records = tle::parse_tle_file(&text).map_err(|e| CliError::Runtime(e.to_string()))?;
    println!("{}: {} records, all checksums valid", path.display(), records.len());
    if records.is_empty() {
        return Ok(());
    }
    let mut epochs: Vec<_> = records.iter().map(|r| r.epoch_utc).collect();
    epochs.sort();
    println!("epochs: {} .. {}", epochs[0], epochs[epochs.len() - 1]);

    let mut altitudes: Vec<f64> = records
        .iter()
        .map(|r| (r.semi_major_axis_m() - inac_sim::constants::WGS84_A) / 1e3)
        .collect();
    altitudes.sort_by(f64::total_cmp);
    println!(
        "mean altitude: {:.0} .. {:.0} km (median {:.0} km)",
        altitudes[0],
        altitudes[altitudes.len() - 1],
        altitudes[altitudes.len() / 2]
    );
    let mut inclinations: Vec<f64> = records.iter().map(|r| r.inclination_deg).collect();
    inclinations.sort_by(f64::total_cmp);
    println!(
        "inclination: {:.2} .. {:.2} deg",
        inclinations[0],
        inclinations[inclinations.len() - 1]
    );
    Ok(())
}
