use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use cfl_core::bench::{
    self, ccdf, presets, read_csv, summarize, CaseStudyConfig, CsvSink, GridPoint, PointSummary,
    SolverSpec, SweepConfig, TrialRecord,
};
use cfl_core::cfl::CflParams;
use cfl_core::encoders::spectrum::{DEFAULT_CHANNELS, REFERENCE_SIDE_M, REFERENCE_SPACING_M};
use cfl_core::encoders::BandRule;
use cfl_core::{seed, Error};

use crate::generate::{deployment, Encoding};
use crate::io::{emit, read_text};
use crate::solve::Solver;
use crate::{CmdResult, Failure, Format, SeedArgs, EXIT_FAILURE, EXIT_OK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 3-SAT, n = 100, r = 2.0..4.0 step 0.4, 200 trials, cap 10^6.
    DeskDensity,
    /// 3-SAT, r = 4.0, n in {50, 100, 200}, 200 trials, cap 10^6.
    DeskSize,
    /// 3-, 4-, 5-SAT density sweeps at n = 100, 1000 trials, cap 10^7.
    FullDensity,
    /// 3-SAT, r = 4.0, n from 25 to 800, 1000 trials, cap 10^7.
    FullSize,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, conflicts_with = "config")]
    pub preset: Option<Preset>,
    /// Sweep configuration as JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Variable counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Clause densities, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Solvers, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub solver: Vec<Solver>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub cap: Option<u64>,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Worker threads; output order does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Record file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Continue an interrupted CSV sweep in `--out` from its record count.
    #[arg(long, requires = "out")]
    pub resume: bool,
    /// Fill the wall_ms column (output is then no longer reproducible).
    #[arg(long)]
    pub wall_time: bool,
    /// Write per-point statistics as JSON to this file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn build_configs(args: &BenchArgs) -> Result<Vec<SweepConfig>, Failure> {
    let mut configs = if let Some(path) = &args.config {
        let mut cfg = SweepConfig::from_json(&read_text(path)?)?;
        if let Some(s) = args.seed.seed {
            cfg.master_seed = s;
        }
        vec![cfg]
    } else if let Some(p) = args.preset {
        let s = args.seed.resolve();
        match p {
            Preset::DeskDensity => vec![presets::desk_density(s)],
            Preset::DeskSize => vec![presets::desk_size(s)],
            Preset::FullDensity => presets::full_density(s),
            Preset::FullSize => vec![presets::full_size(s)],
        }
    } else {
        if args.n.is_empty() || args.r.is_empty() {
            return Err(Failure::usage(
                "give --preset, --config, or both --n and --r",
            ));
        }
        let grid = args
            .n
            .iter()
            .flat_map(|&n| args.r.iter().map(move |&r| GridPoint { n, r, k: args.k }))
            .collect();
        let solvers = if args.solver.is_empty() {
            vec![Solver::Cfl]
        } else {
            args.solver.clone()
        };
        let base = CflParams::ksat_default(args.k);
        let solvers = solvers
            .into_iter()
            .map(|s| match s {
                Solver::Cfl => SolverSpec::Cfl {
                    a: args.a.unwrap_or(base.a()),
                    b: args.b.unwrap_or(base.b()),
                },
                Solver::Schoening => SolverSpec::Schoening,
                Solver::Walksat => SolverSpec::Walksat { noise: args.noise },
            })
            .collect();
        vec![SweepConfig {
            grid,
            solvers,
            trials: 200,
            cap: 1_000_000,
            master_seed: args.seed.resolve(),
            jobs: 1,
            record_wall_time: false,
        }]
    };
    for cfg in &mut configs {
        if let Some(t) = args.trials {
            cfg.trials = t;
        }
        if let Some(c) = args.cap {
            cfg.cap = c;
        }
        if let Some(j) = args.jobs {
            cfg.jobs = j;
        }
        cfg.record_wall_time |= args.wall_time;
        cfg.validate()?;
    }
    Ok(configs)
}

enum Sink {
    Csv(Box<CsvSink<Box<dyn Write>>>),
    Json(Box<dyn Write>),
}

impl Sink {
    fn write(&mut self, r: &TrialRecord) -> cfl_core::Result<()> {
        match self {
            Sink::Csv(s) => s.write(r),
            Sink::Json(w) => {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")?;
                Ok(())
            }
        }
    }

    fn flush(&mut self) -> cfl_core::Result<()> {
        match self {
            Sink::Csv(s) => s.flush(),
            Sink::Json(w) => Ok(w.flush()?),
        }
    }
}

fn print_summary(stats: &[PointSummary]) {
    eprintln!("n\tm\tk\tsolver\ttrials\tsuccess\tmedian\tq05\tq95\tmedian/n");
    for s in stats {
        eprintln!(
            "{}\t{}\t{}\t{}\t{}\t{:.3}\t{}\t{}\t{}\t{}",
            s.n,
            s.m,
            s.k,
            s.solver,
            s.trials,
            s.success_rate,
            s.median,
            s.q05,
            s.q95,
            s.median_normalized
                .map_or("censored".to_string(), |v| format!("{v:.3}")),
        );
    }
}

pub fn bench(args: BenchArgs) -> CmdResult {
    let configs = build_configs(&args)?;
    let mut existing: Vec<TrialRecord> = Vec::new();
    let out: Box<dyn Write> = match &args.out {
        Some(path) if args.resume && path.exists() => {
            if args.format != Format::Csv {
                return Err(Failure::usage("--resume needs --format csv"));
            }
            existing = read_csv(File::open(path).map_err(|e| Failure::io(path, e))?)?;
            let file = OpenOptions::new()
                .append(true)
                .open(path)
                .map_err(|e| Failure::io(path, e))?;
            Box::new(BufWriter::new(file))
        }
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::io(path, e))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout())),
    };
    let mut sink = match args.format {
        Format::Csv if !existing.is_empty() => Sink::Csv(Box::new(CsvSink::appending(out))),
        Format::Csv => Sink::Csv(Box::new(CsvSink::new(out))),
        Format::Json => Sink::Json(out),
    };

    let mut records = existing.clone();
    let mut skip = existing.len() as u64;
    let mut outcome = Ok(());
    for cfg in &configs {
        let this_skip = skip.min(cfg.total_records());
        skip -= this_skip;
        let res = bench::run_sweep(cfg, this_skip, |r| {
            sink.write(r)?;
            records.push(r.clone());
            Ok(())
        });
        if let Err(e) = res {
            outcome = Err(e);
            break;
        }
    }
    let flushed = sink.flush();
    if let Some(path) = &args.summary {
        if !records.is_empty() {
            let stats = summarize(&records)?;
            emit(
                Some(path),
                &(serde_json::to_string_pretty(&stats).expect("summary serializes") + "\n"),
            )?;
        }
    }
    if !records.is_empty() {
        print_summary(&summarize(&records)?);
    }
    match (outcome, flushed) {
        (Ok(()), Ok(())) => Ok(EXIT_OK),
        (Err(Error::Interrupted { written, source }), _) => {
            eprintln!("error: {source}");
            eprintln!(
                "partial sweep: {} records in total",
                existing.len() as u64 + written
            );
            Ok(EXIT_FAILURE)
        }
        (Err(e), _) | (Ok(()), Err(e)) => Err(e.into()),
    }
}

#[derive(Args, Debug)]
pub struct CaseStudyArgs {
    /// AP coordinates as `x y z` rows; synthetic placement when absent.
    #[arg(long)]
    pub xyz: Option<PathBuf>,
    /// Synthetic AP count.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = REFERENCE_SIDE_M)]
    pub side: f64,
    #[arg(long, default_value_t = REFERENCE_SPACING_M)]
    pub spacing: f64,
    #[arg(long = "radius-rules", default_value = "5:3,10:2,30:1")]
    pub radius_rules: String,
    #[arg(long = "D", default_value_t = DEFAULT_CHANNELS)]
    pub d: u32,
    #[arg(long, value_enum, default_value_t = Encoding::Pairwise)]
    pub encoding: Encoding,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 100_000)]
    pub cap: u64,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Record file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write `threshold,p_exceed` rows of the empirical tail here.
    #[arg(long)]
    pub ccdf: Option<PathBuf>,
    /// Write `x y z channel` rows for the last trial's solution here.
    #[arg(long)]
    pub map: Option<PathBuf>,
}

pub fn case_study(args: CaseStudyArgs) -> CmdResult {
    let master = args.seed.resolve();
    let dep = deployment(args.xyz.as_ref(), args.n, args.side, args.spacing, || {
        seed::derive(master, &[u64::MAX])
    })?;
    let default = CflParams::wireless_default();
    let mut cfg = CaseStudyConfig::new(args.trials, args.cap, master);
    cfg.rules = BandRule::parse_list(&args.radius_rules)?;
    cfg.channels = args.d;
    cfg.encoding = args.encoding.into();
    cfg.a = args.a.unwrap_or(default.a());
    cfg.b = args.b.unwrap_or(default.b());
    cfg.jobs = args.jobs;
    let result = bench::case_study(&dep, &cfg)?;

    let text = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            bench::write_csv(&mut buf, &result.records)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Json => result
            .records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect(),
    };
    emit(args.out.as_ref(), &text)?;
    if let Some(path) = &args.ccdf {
        match ccdf(&result.records) {
            Ok(series) => {
                let mut s = String::from("threshold,p_exceed\n");
                for (t, p) in series {
                    s.push_str(&format!("{t},{p}\n"));
                }
                emit(Some(path), &s)?;
            }
            Err(e) => eprintln!("no tail written: {e}"),
        }
    }
    if let (Some(path), Some(map)) = (&args.map, &result.channel_map) {
        let rows: String = dep
            .points()
            .iter()
            .zip(map)
            .map(|(p, c)| format!("{} {} {} {c}\n", p.x, p.y, p.z))
            .collect();
        emit(Some(path), &rows)?;
    }
    let s = &result.summary;
    eprintln!(
        "aps {} clauses {} trials {} success {:.3} median {} q95 {} mean {}",
        s.n,
        s.m,
        s.trials,
        s.success_rate,
        s.median,
        s.q95,
        s.mean_solved.map_or("-".into(), |m| format!("{m:.2}")),
    );
    Ok(EXIT_OK)
}
