use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qcc_cli::error::CliError;
use qcc_cli::format::{parse_polynomial_problem, parse_problem, serialize_problem};
use qcc_cli::harness::{verify_props, Generator, HarnessConfig};
use qcc_cli::report;
use qcc_core::DecisionProblem;

/// Exact analysis of finite decision problems: dominance elimination,
/// quasi-concave differences, argmax convexity and single crossing.
#[derive(Parser)]
#[command(name = "qcc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on a problem file.
    Analyze {
        file: PathBuf,
        /// Denominator of the brute-force belief grid.
        #[arg(long, default_value_t = 20)]
        grid: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Quasi-concavity of payoff differences, with a dip witness on failure.
    CheckQcc {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Convexity of every argmax set, with a gap witness on failure.
    CheckConvexity {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Iterated elimination of mixed-dominated and duplicate actions.
    Eliminate {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Reorders states so the problem can satisfy single crossing.
    Relabel {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Samples a polynomial problem at evenly spaced actions.
    Discretize {
        file: PathBuf,
        #[arg(long)]
        grid_points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Randomized property harness.
    VerifyProps {
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long, default_value_t = 6)]
        max_actions: usize,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        /// Payoffs are drawn from [-magnitude, magnitude].
        #[arg(long, default_value_t = 10)]
        magnitude: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        grid: u64,
        #[arg(long, value_enum, default_value_t = Generator::Uniform)]
        generator: Generator,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<DecisionProblem, CliError> {
    parse_problem(&read(path)?).map_err(|e| match e {
        CliError::Input(detail) => CliError::Input(format!("{}: {detail}", path.display())),
        other => other,
    })
}

fn emit<T: Serialize>(value: &T, output: &Output) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::invariant("serialize", e.to_string()))?;
    match &output.out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { file, grid, output } => {
            if grid == 0 {
                return Err(CliError::Input("--grid must be at least 1".into()));
            }
            emit(&report::analyze(&load(&file)?, grid, true)?, &output)
        }
        Command::CheckQcc { file, output } => emit(&report::qcc_report(&load(&file)?)?, &output),
        Command::CheckConvexity { file, output } => emit(&report::convexity_report(&load(&file)?)?, &output),
        Command::Eliminate { file, output } => emit(&report::elimination_report(&load(&file)?)?, &output),
        Command::Relabel { file, output } => emit(&report::relabel_report(&load(&file)?)?, &output),
        Command::Discretize {
            file,
            grid_points,
            output,
        } => {
            let poly = parse_polynomial_problem(&read(&file)?)?;
            let problem = qcc_core::discretize(&poly, grid_points).map_err(|e| CliError::Input(e.to_string()))?;
            let text = serialize_problem(&problem);
            match &output.out {
                Some(path) => fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
                None => {
                    println!("{text}");
                    Ok(())
                }
            }
        }
        Command::VerifyProps {
            instances,
            max_actions,
            max_states,
            magnitude,
            seed,
            grid,
            generator,
            output,
        } => {
            let config = HarnessConfig {
                instances,
                max_actions,
                max_states,
                magnitude,
                seed,
                grid,
                generator,
            };
            let result = verify_props(&config)?;
            emit(&result, &output)?;
            match result.first_invariant_violation() {
                Some(detail) => Err(CliError::invariant("verify_props", detail.to_string())),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
