use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gcs_cli::{cmd_analyze, cmd_measure, cmd_sample, cmd_validate, to_json, CliError, SampleKind, Settings, EXIT_VALIDATION};

/// Classicality of quantum states for irreducible representations of
/// compact semisimple Lie groups.
#[derive(Parser)]
#[command(name = "gcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base numerical tolerance; every check uses a fixed multiple of it.
    #[arg(long, global = true, default_value_t = Settings::default().tol)]
    tol: f64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Iterations per restart of the upper-bound search.
    #[arg(long, global = true, default_value_t = Settings::default().iters)]
    iters: usize,

    /// Restarts of the upper-bound search.
    #[arg(long, global = true, default_value_t = Settings::default().restarts)]
    restarts: usize,

    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose V ∨ V and look for the detecting antiunitary.
    Analyze { spec: PathBuf },
    /// Nonclassicality of a density matrix.
    Measure { spec: PathBuf, rho: PathBuf },
    /// Generate states.
    Sample {
        spec: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum)]
        kind: SampleKind,
    },
    /// Run the invariant checks for a representation.
    Validate { spec: PathBuf },
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let settings = Settings { tol: cli.tol, seed: cli.seed, iters: cli.iters, restarts: cli.restarts };
    match &cli.command {
        Command::Analyze { spec } => emit(&to_json(&cmd_analyze(spec, &settings)?), &cli.out).map(|_| true),
        Command::Measure { spec, rho } => emit(&to_json(&cmd_measure(spec, rho, &settings)?), &cli.out).map(|_| true),
        Command::Sample { spec, count, kind } => {
            emit(&to_json(&cmd_sample(spec, *count, *kind, &settings)?), &cli.out).map(|_| true)
        }
        Command::Validate { spec } => {
            let summary = cmd_validate(spec, &settings)?;
            emit(&to_json(&summary), &cli.out)?;
            for check in summary.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAIL {}: {:e} > {:e}", check.name, check.value, check.threshold);
            }
            Ok(summary.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VALIDATION as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
