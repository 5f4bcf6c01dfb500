//! `asymptotica`: run a configured experiment or start the field REPL.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration
//! error, 3 numeric error.

use clap::{Parser, ValueEnum};
use cli_harness::{
    config::{CliOverrides, ExperimentConfig, ExperimentId},
    repl::{self, ReplSession},
    runner::{run_experiment, RunError},
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CoeffMode {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(
    name = "asymptotica",
    about = "Experiment runner and series-field evaluator",
    disable_help_subcommand = true
)]
struct Cli {
    /// Experiment to run (mollifier, regularize, embed, product, shock,
    /// soliton, equivalence, field-eval), or 'repl'.
    command: String,

    /// Flat key-value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory for the JSON summary and CSV series.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for randomized inputs.
    #[arg(long)]
    seed: Option<u64>,

    /// Coefficient domain for field evaluation.
    #[arg(long, value_enum)]
    coeff: Option<CoeffMode>,

    /// Series truncation window.
    #[arg(long)]
    truncation: Option<i64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = CliOverrides {
        out: cli.out.clone(),
        seed: cli.seed,
        exact: cli.coeff.map(|c| matches!(c, CoeffMode::Exact)),
        truncation: cli.truncation,
    };

    if cli.command == "repl" {
        let session = ReplSession {
            truncation: overrides.truncation.unwrap_or(nonarch_core::DEFAULT_TRUNCATION),
            exact: overrides.exact.unwrap_or(true),
        };
        if session.truncation < 1 {
            eprintln!("configuration error: truncation must be at least 1");
            return ExitCode::from(2);
        }
        let stdin = std::io::stdin();
        let stdout = std::io::stdout();
        return match repl::run(session, stdin.lock(), stdout.lock()) {
            Ok(_) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("i/o error: {e}");
                ExitCode::from(2)
            }
        };
    }

    let Some(experiment) = ExperimentId::parse(&cli.command) else {
        eprintln!(
            "configuration error: unknown experiment '{}'; expected one of mollifier, \
             regularize, embed, product, shock, soliton, equivalence, field-eval, repl",
            cli.command
        );
        return ExitCode::from(2);
    };

    let file_text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("configuration error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => None,
    };

    let config = match ExperimentConfig::load(experiment, file_text.as_deref(), &overrides) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };

    match run_experiment(&config) {
        Ok(outcome) => {
            println!(
                "{}: {} (summary: {}, series: {})",
                experiment.as_str(),
                if outcome.passed { "pass" } else { "fail" },
                outcome.summary_path.display(),
                outcome.series_path.display()
            );
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Config(message)) => {
            eprintln!("configuration error: {message}");
            ExitCode::from(2)
        }
        Err(RunError::Io(e)) => {
            eprintln!("configuration error: cannot write output: {e}");
            ExitCode::from(2)
        }
        Err(RunError::Numeric(message)) => {
            eprintln!("numeric error: {message}");
            ExitCode::from(3)
        }
    }
}
