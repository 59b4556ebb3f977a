//! Experiment runner CLI.
//!
//! Exit codes: 0 success, 2 configuration error, 3 experiment failure.

use clap::{Parser, Subcommand};
use geosharp_cli::{parse_config, run_experiment, HarnessError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "geosharp",
    version,
    about = "Quotient-geometry sharpness experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for per-model and per-cell fan-out.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Parse and validate a config without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load_config(path: &PathBuf) -> Result<geosharp_cli::ExperimentConfig, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { config } => match load_config(&config) {
            Ok(cfg) => {
                println!("ok: {} (seed {})", cfg.experiment.name(), cfg.seed);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        Command::Run {
            config,
            out,
            seed,
            jobs,
        } => {
            let mut cfg = match load_config(&config) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(out) = out {
                cfg.output_dir = Some(out);
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(jobs) = jobs {
                cfg.jobs = Some(jobs);
            }
            match run_experiment(&cfg) {
                Ok(artifacts) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&artifacts.summary)
                            .expect("summary serializes")
                    );
                    for f in &artifacts.files {
                        eprintln!("wrote {}", f.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(HarnessError::Config(e)) => {
                    eprintln!("config error: {e}");
                    ExitCode::from(2)
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(3)
                }
            }
        }
    }
}
