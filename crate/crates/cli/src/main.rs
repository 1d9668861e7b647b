//! `cfl`: solve, verify, generate, benchmark and bound CSP instances.
//!
//! Exit codes: 0 success, 1 cap exceeded or invalid assignment, 2 runtime
//! failure or partial sweep, 64 usage error, 65 malformed input.

mod bench;
mod bound;
mod generate;
mod io;
mod solve;

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cfl_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_UNSOLVED: u8 = 1;
pub const EXIT_FAILURE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;

#[derive(Parser, Debug)]
#[command(
    name = "cfl",
    version,
    about = "Communication-free learning CSP solver and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a DIMACS or instance-JSON file.
    Solve(solve::SolveArgs),
    /// Check an assignment against an instance; prints VALID or INVALID.
    Verify(solve::VerifyArgs),
    /// Write a generated instance (DIMACS for k-SAT, instance-JSON otherwise).
    Generate(generate::GenerateArgs),
    /// Run a random k-SAT sweep and write one record per run.
    Bench(bench::BenchArgs),
    /// Repeated CFL runs on a channel-allocation deployment.
    CaseStudy(bench::CaseStudyArgs),
    /// Evaluate the iteration bound for a given N, D, a, b and epsilon.
    Bound(bound::BoundArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Options shared by every randomized subcommand.
#[derive(Args, Debug, Clone)]
pub struct SeedArgs {
    /// Master seed; drawn from system entropy and printed when absent.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SeedArgs {
    pub fn resolve(&self) -> u64 {
        match self.seed {
            Some(s) => s,
            None => {
                let s = rand::random::<u64>();
                eprintln!("seed: {s}");
                s
            }
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Usage(_) | Error::EnumerationCap { .. } => EXIT_USAGE,
            Error::Parse { .. } | Error::Json(_) | Error::Csv(_) => EXIT_DATA,
            Error::Interrupted { .. } | Error::Consistency(_) | Error::Io(_) => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

pub type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve::solve(a),
        Command::Verify(a) => solve::verify(a),
        Command::Generate(a) => generate::generate(a),
        Command::Bench(a) => bench::bench(a),
        Command::CaseStudy(a) => bench::case_study(a),
        Command::Bound(a) => bound::bound(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
