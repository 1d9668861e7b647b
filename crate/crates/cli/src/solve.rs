use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use cfl_core::baseline;
use cfl_core::cfl::trace::{TraceRecord, TraceWriter};
use cfl_core::cfl::{CflParams, Engine, Outcome, TraceOptions, DEFAULT_CAP};
use cfl_core::csp::{Assignment, CspInstance};

use crate::io::{emit, load_instance, read_text};
use crate::{
    CmdResult, Failure, Format, SeedArgs, EXIT_DATA, EXIT_FAILURE, EXIT_OK, EXIT_UNSOLVED,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Cfl,
    Schoening,
    Walksat,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// DIMACS CNF or instance-JSON file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Solver::Cfl)]
    pub solver: Solver,
    /// Rate on the failing value; defaults depend on the instance family.
    #[arg(long)]
    pub a: Option<f64>,
    /// Rate on the other values.
    #[arg(long)]
    pub b: Option<f64>,
    /// Random-move probability for walksat.
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    /// Maximum rounds (cfl) or flips (baselines).
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Solution file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Solution format; json unless given.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write one JSON line per cfl round to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Sample and update agents on all cores.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub format: String,
    pub solver: Solver,
    pub seed: u64,
    pub outcome: Outcome,
    /// Stopping time (cfl) or flip count (baselines); the budget spent when
    /// capped.
    pub tau: u64,
    pub assignment: Vec<u32>,
}

/// Rates for `instance`: explicit flags win, then the k-SAT defaults for
/// the widest clause, then the wireless default.
fn params_for(
    instance: &CspInstance,
    a: Option<f64>,
    b: Option<f64>,
) -> Result<CflParams, Failure> {
    let base = if instance.is_ksat() {
        let k = instance
            .clauses()
            .iter()
            .map(|c| c.scope().len())
            .max()
            .unwrap_or(3);
        CflParams::ksat_default(k)
    } else {
        CflParams::wireless_default()
    };
    Ok(CflParams::new(
        a.unwrap_or(base.a()),
        b.unwrap_or(base.b()),
    )?)
}

pub fn solve(args: SolveArgs) -> CmdResult {
    let instance = load_instance(&args.input)?;
    if args.solver != Solver::Cfl && (args.a.is_some() || args.b.is_some() || args.trace.is_some())
    {
        return Err(Failure::usage(
            "--a, --b and --trace apply to the cfl solver only",
        ));
    }
    if args.cap == 0 {
        return Err(Failure::usage("--cap must be at least 1"));
    }
    let seed = args.seed.resolve();
    let (outcome, tau, assignment) = match args.solver {
        Solver::Cfl => {
            let params = params_for(&instance, args.a, args.b)?;
            let mut engine = Engine::new(&instance, params, seed)?;
            engine.set_parallel(args.parallel);
            let r = match &args.trace {
                Some(path) => {
                    let file = File::create(path).map_err(|e| Failure::io(path, e))?;
                    let mut writer = TraceWriter::new(BufWriter::new(file));
                    let mut failed = None;
                    let r = engine.run_observed(args.cap, TraceOptions::default(), |s, e| {
                        if failed.is_none() {
                            failed = writer.write(&TraceRecord::from_round(s, e)).err();
                        }
                    })?;
                    if let Some(e) = failed {
                        return Err(e.into());
                    }
                    writer
                        .into_inner()
                        .into_inner()
                        .map_err(|e| Failure::io(path, e.into_error()))?;
                    r
                }
                None => engine.run(args.cap)?,
            };
            (r.outcome, r.tau.unwrap_or(r.rounds), r.assignment)
        }
        Solver::Schoening => {
            let r = baseline::schoening_walk(&instance, seed, args.cap)?;
            (r.outcome, r.flips, r.assignment)
        }
        Solver::Walksat => {
            let r = baseline::walksat(&instance, seed, args.cap, args.noise)?;
            (r.outcome, r.flips, r.assignment)
        }
    };

    let solved = outcome == Outcome::Solved;
    if solved && !instance.is_solution(&assignment)? {
        return Err(Failure {
            code: EXIT_FAILURE,
            message: "solver reported success but the assignment does not verify".into(),
        });
    }
    let doc = SolutionDocument {
        format: "cfl-solution".into(),
        solver: args.solver,
        seed,
        outcome,
        tau,
        assignment: assignment.0,
    };
    let text = match args.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&doc).expect("solution serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("variable,value\n");
            for (i, v) in doc.assignment.iter().enumerate() {
                s.push_str(&format!("{i},{v}\n"));
            }
            s
        }
    };
    emit(args.out.as_ref(), &text)?;
    if solved {
        eprintln!("solved: tau = {tau}");
        Ok(EXIT_OK)
    } else {
        eprintln!("cap exceeded after {tau}");
        Ok(EXIT_UNSOLVED)
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// DIMACS CNF or instance-JSON file.
    pub instance: PathBuf,
    /// Solution JSON, a JSON array, `variable,value` CSV, or whitespace
    /// separated values.
    pub assignment: PathBuf,
}

pub fn parse_assignment(text: &str) -> Result<Assignment, Failure> {
    let bad = |m: String| Failure {
        code: EXIT_DATA,
        message: format!("cannot read assignment: {m}"),
    };
    let t = text.trim_start();
    if t.starts_with('{') {
        let doc: SolutionDocument = serde_json::from_str(t).map_err(|e| bad(e.to_string()))?;
        return Ok(Assignment(doc.assignment));
    }
    if t.starts_with('[') {
        let v: Vec<u32> = serde_json::from_str(t).map_err(|e| bad(e.to_string()))?;
        return Ok(Assignment(v));
    }
    if t.starts_with("variable,value") {
        let mut values = Vec::new();
        for (i, line) in t
            .lines()
            .skip(1)
            .filter(|l| !l.trim().is_empty())
            .enumerate()
        {
            let (idx, val) = line
                .split_once(',')
                .ok_or_else(|| bad(format!("row {:?}", line)))?;
            if idx.trim().parse::<usize>().ok() != Some(i) {
                return Err(bad(format!("row {} is out of order", i + 1)));
            }
            values.push(
                val.trim()
                    .parse()
                    .map_err(|_| bad(format!("value {val:?}")))?,
            );
        }
        return Ok(Assignment(values));
    }
    t.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| bad(format!("value {s:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Assignment)
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    let instance = load_instance(&args.instance)?;
    let assignment = parse_assignment(&read_text(&args.assignment)?)?;
    let valid = match instance.check_assignment(&assignment) {
        Ok(()) => instance.is_solution(&assignment)?,
        Err(e) => {
            eprintln!("{e}");
            false
        }
    };
    if valid {
        println!("VALID");
        Ok(EXIT_OK)
    } else {
        if let Ok(bad) = instance.unsatisfied_clauses(&assignment) {
            eprintln!("violated clauses: {bad:?}");
        }
        println!("INVALID");
        Ok(EXIT_UNSOLVED)
    }
}
