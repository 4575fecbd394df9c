use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use torloc::cli::{emit, run, Command, Format, JobSpec};

/// Supported refinements, localization torsors and fixed-point formulas.
#[derive(Parser, Debug)]
#[command(name = "torloc", version)]
struct Args {
    /// les | lifts | abbv | ktheory | verify
    command: Command,
    /// JSON input (optional for verify)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Cohomological degree for les/lifts
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<i64>,
    /// json | text
    #[arg(long, default_value = "json")]
    format: Format,
    /// Seed for randomized sweeps and spot checks
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Include wall-clock timing (makes output nondeterministic)
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let job = JobSpec { command: args.command, input: args.input, degree: args.degree, seed: args.seed, timing: args.timing };
    match run(&job) {
        Ok(report) => {
            print!("{}", emit(&report, args.format));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("torloc: {e}");
            ExitCode::from(2)
        }
    }
}
