use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod svg;

use config::{ExperimentConfig, Overrides};
use error::CliError;

/// Collateral flows and hoarding cascades on rehypothecation networks.
#[derive(Parser)]
#[command(name = "rehypo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Equilibrium of one network (JSON).
    Solve(RunArgs),
    /// Monte Carlo multiplier sweep over density (CSV).
    Sweep(RunArgs),
    /// Shock experiments over density (CSV).
    Cascade(RunArgs),
    /// Sample one network and print it as an edge list.
    Gen(RunArgs),
    /// Line chart of a sweep or cascade CSV.
    PlotSvg(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON).
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct PlotArgs {
    /// CSV produced by `sweep` or `cascade`.
    input: PathBuf,
    #[arg(long, default_value = "grid")]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("REHYPO_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Config(format!(
            "REHYPO_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot set up {threads} threads: {e}")))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn run_config(
    args: &RunArgs,
    f: fn(&ExperimentConfig) -> Result<String, CliError>,
) -> Result<(), CliError> {
    let overrides = Overrides {
        seed: args.seed,
        out: args.out.clone(),
        samples: args.samples,
    };
    let cfg = ExperimentConfig::load(&args.config, &overrides)?;
    let text = f(&cfg)?;
    emit(&text, cfg.output.as_deref())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match &cli.command {
        Command::Solve(a) => run_config(a, commands::solve),
        Command::Sweep(a) => run_config(a, commands::sweep),
        Command::Cascade(a) => run_config(a, commands::cascade),
        Command::Gen(a) => run_config(a, commands::gen),
        Command::PlotSvg(a) => {
            let csv = fs::read_to_string(&a.input)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", a.input.display())))?;
            let svg = svg::render(&csv, &a.x, &a.y, a.title.as_deref())?;
            emit(&svg, a.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rehypo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
