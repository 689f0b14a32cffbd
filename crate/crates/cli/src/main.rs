//! `dgla-deform`: run, validate and self-test deformation scenarios.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dgla_core::pipelines::{run_scenario_file, selftest, validate_scenario};
use dgla_core::Error;

#[derive(Parser)]
#[command(name = "dgla-deform", version, about = "Exact deformation-theory computations on Čech models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a scenario and print the report.
    Run {
        scenario: PathBuf,
        /// Override the scenario's weight window.
        #[arg(long)]
        window: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse a scenario and resolve its references without running checks.
    Validate { scenario: PathBuf },
    /// Run the built-in invariant suite.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, window, format } => match run_scenario_file(&scenario, window) {
            Ok(report) => {
                match format {
                    Format::Json => print!("{}", report.to_json()),
                    Format::Text => print!("{}", report.to_text()),
                }
                if report.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(3)
                }
            }
            Err(e) => fail(e),
        },
        Command::Validate { scenario } => {
            let text = match std::fs::read_to_string(&scenario) {
                Ok(t) => t,
                Err(e) => return fail(Error::InvalidInput(format!("{}: {e}", scenario.display()))),
            };
            match validate_scenario(&text) {
                Ok(v) => {
                    for l in v.lines() {
                        println!("{l}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Selftest => {
            let lines = selftest();
            for l in &lines {
                println!("{} {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
            }
            if lines.iter().all(|l| l.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}
