use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TrialRecord;
use crate::baseline;
use crate::cfl::{CflParams, Engine, Outcome};
use crate::csp::CspInstance;
use crate::encoders::{clauses_for_ratio, random_ksat};
use crate::{seed, Error, Result};

/// One point of a random k-SAT grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    /// Clause density `M / N`; the clause count is `round(r n)`.
    pub r: f64,
    pub k: usize,
}

impl GridPoint {
    pub fn m(&self) -> usize {
        clauses_for_ratio(self.n, self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "solver")]
pub enum SolverSpec {
    Cfl { a: f64, b: f64 },
    Schoening,
    Walksat { noise: f64 },
}

impl SolverSpec {
    /// Identifier written to the `solver` column.
    pub fn id(&self) -> String {
        match self {
            SolverSpec::Cfl { .. } => "cfl".into(),
            SolverSpec::Schoening => "schoening".into(),
            SolverSpec::Walksat { noise } => format!("walksat-p{noise}"),
        }
    }

    fn rates(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            SolverSpec::Cfl { a, b } => (Some(a), Some(b)),
            _ => (None, None),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SolverSpec::Cfl { a, b } => CflParams::new(a, b).map(|_| ()),
            SolverSpec::Walksat { noise } if !(0.0..=1.0).contains(&noise) => Err(Error::usage(
                format!("noise must lie in [0, 1], got {noise}"),
            )),
            _ => Ok(()),
        }
    }

    /// Run on `instance`; returns the outcome and the stopping time, or the
    /// budget spent when capped.
    pub fn run(&self, instance: &CspInstance, seed: u64, cap: u64) -> Result<(Outcome, u64)> {
        match *self {
            SolverSpec::Cfl { a, b } => {
                let mut engine = Engine::new(instance, CflParams::new(a, b)?, seed)?;
                let r = engine.run(cap)?;
                Ok((r.outcome, r.tau.unwrap_or(r.rounds)))
            }
            SolverSpec::Schoening => {
                let r = baseline::schoening_walk(instance, seed, cap)?;
                Ok((r.outcome, r.flips))
            }
            SolverSpec::Walksat { noise } => {
                let r = baseline::walksat(instance, seed, cap, noise)?;
                Ok((r.outcome, r.flips))
            }
        }
    }
}

/// A random k-SAT sweep.
///
/// Records are emitted in canonical order: grid point, then trial, then
/// solver. Trial `t` at point `p` uses instance seed
/// `derive(master_seed, [p, t])`; every solver runs that instance with
/// `derive(instance_seed, [1])`. The `seed` column holds the instance seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: Vec<GridPoint>,
    pub solvers: Vec<SolverSpec>,
    pub trials: usize,
    pub cap: u64,
    pub master_seed: u64,
    #[serde(default = "one")]
    pub jobs: usize,
    /// Fill the `wall_ms` column. Off by default so output is reproducible
    /// byte for byte.
    #[serde(default)]
    pub record_wall_time: bool,
}

fn one() -> usize {
    1
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::usage("sweep grid is empty"));
        }
        if self.solvers.is_empty() {
            return Err(Error::usage("sweep has no solvers"));
        }
        if self.trials == 0 {
            return Err(Error::usage("trials must be at least 1"));
        }
        if self.cap == 0 {
            return Err(Error::usage("cap must be at least 1"));
        }
        if self.jobs == 0 {
            return Err(Error::usage("jobs must be at least 1"));
        }
        for p in &self.grid {
            if p.k == 0 || p.k > p.n {
                return Err(Error::usage(format!(
                    "clause width {} invalid for n = {}",
                    p.k, p.n
                )));
            }
            if !(p.r.is_finite() && p.r >= 0.0) {
                return Err(Error::usage(format!(
                    "density must be finite and nonnegative, got {}",
                    p.r
                )));
            }
        }
        self.solvers.iter().try_for_each(SolverSpec::validate)
    }

    pub fn total_records(&self) -> u64 {
        (self.grid.len() * self.trials * self.solvers.len()) as u64
    }

    pub fn instance_seed(&self, point: usize, trial: usize) -> u64 {
        seed::derive(self.master_seed, &[point as u64, trial as u64])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run_seed(instance_seed: u64) -> u64 {
    seed::derive(instance_seed, &[1])
}

/// Run one trial: build the instance and run the selected solvers on it.
fn run_trial(
    cfg: &SweepConfig,
    point: usize,
    trial: usize,
    solvers: &[usize],
) -> Result<Vec<TrialRecord>> {
    let p = cfg.grid[point];
    let s = cfg.instance_seed(point, trial);
    let instance = random_ksat(p.n, p.m(), p.k, s)?;
    solvers
        .iter()
        .map(|&i| {
            let spec = cfg.solvers[i];
            let start = Instant::now();
            let (outcome, tau) = spec.run(&instance, run_seed(s), cfg.cap)?;
            let wall = cfg
                .record_wall_time
                .then(|| start.elapsed().as_secs_f64() * 1e3);
            let (a, b) = spec.rates();
            Ok(TrialRecord {
                family: "ksat".into(),
                n: p.n,
                m: p.m(),
                k: p.k,
                d: 2,
                solver: spec.id(),
                a,
                b,
                seed: s,
                outcome,
                tau,
                normalized_tau: tau as f64 / p.n as f64,
                wall_ms: wall,
            })
        })
        .collect()
}

/// Run the sweep, passing records to `sink` in canonical order.
///
/// The first `skip` records are neither computed nor emitted, which resumes
/// an interrupted sweep from its record count. Returns the number of
/// records emitted. Any failure is wrapped in [`Error::Interrupted`] with
/// the count emitted so far.
pub fn run_sweep(
    cfg: &SweepConfig,
    skip: u64,
    mut sink: impl FnMut(&TrialRecord) -> Result<()>,
) -> Result<u64> {
    cfg.validate()?;
    let s = cfg.solvers.len();
    let mut written = 0u64;
    let interrupted = |written: u64, e: Error| Error::Interrupted {
        written,
        source: Box::new(e),
    };
    let units: Vec<(usize, usize, Vec<usize>)> = (0..cfg.grid.len())
        .flat_map(|p| (0..cfg.trials).map(move |t| (p, t)))
        .enumerate()
        .filter_map(|(g, (p, t))| {
            let first = (g * s) as u64;
            let from = skip.saturating_sub(first).min(s as u64) as usize;
            (from < s).then(|| (p, t, (from..s).collect()))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::usage(format!("cannot start worker pool: {e}")))?;
    let batch = (cfg.jobs * 4).max(1);
    for chunk in units.chunks(batch) {
        let results: Vec<Result<Vec<TrialRecord>>> = if cfg.jobs == 1 {
            chunk
                .iter()
                .map(|(p, t, sv)| run_trial(cfg, *p, *t, sv))
                .collect()
        } else {
            pool.install(|| {
                chunk
                    .par_iter()
                    .map(|(p, t, sv)| run_trial(cfg, *p, *t, sv))
                    .collect()
            })
        };
        for res in results {
            let records = res.map_err(|e| interrupted(written, e))?;
            for r in &records {
                sink(r).map_err(|e| interrupted(written, e))?;
                written += 1;
            }
        }
    }
    Ok(written)
}

/// Collect a whole sweep in memory.
pub fn collect_sweep(cfg: &SweepConfig) -> Result<Vec<TrialRecord>> {
    let mut out = Vec::with_capacity(cfg.total_records() as usize);
    run_sweep(cfg, 0, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

/// Named sweep presets.
pub mod presets {
    use super::*;

    fn densities(from: f64, to: f64, step: f64) -> Vec<f64> {
        let count = ((to - from) / step).round() as usize;
        (0..=count)
            .map(|i| ((from + i as f64 * step) * 100.0).round() / 100.0)
            .collect()
    }

    fn cfl(k: usize) -> SolverSpec {
        let p = CflParams::ksat_default(k);
        SolverSpec::Cfl { a: p.a(), b: p.b() }
    }

    /// 3-SAT at `n = 100`, densities 2.0 to 4.0 in steps of 0.4, 200 trials,
    /// cap `10^6`.
    pub fn desk_density(master_seed: u64) -> SweepConfig {
        SweepConfig {
            grid: densities(2.0, 4.0, 0.4)
                .into_iter()
                .map(|r| GridPoint { n: 100, r, k: 3 })
                .collect(),
            solvers: vec![cfl(3)],
            trials: 200,
            cap: 1_000_000,
            master_seed,
            jobs: 1,
            record_wall_time: false,
        }
    }

    /// 3-SAT at density 4.0, `n` in {50, 100, 200}, 200 trials, cap `10^6`.
    pub fn desk_size(master_seed: u64) -> SweepConfig {
        SweepConfig {
            grid: [50, 100, 200]
                .iter()
                .map(|&n| GridPoint { n, r: 4.0, k: 3 })
                .collect(),
            solvers: vec![cfl(3)],
            trials: 200,
            cap: 1_000_000,
            master_seed,
            jobs: 1,
            record_wall_time: false,
        }
    }

    /// Full-scale density sweeps for 3-, 4- and 5-SAT at `n = 100`, 1000
    /// trials, cap `10^7`, one config per clause width with its default
    /// rates. Densities reach 4.2, 9.9 and 21.1 respectively.
    pub fn full_density(master_seed: u64) -> Vec<SweepConfig> {
        [
            (3, 2.0, 4.2, 0.2),
            (4, 5.0, 9.9, 0.7),
            (5, 10.0, 21.1, 1.85),
        ]
        .into_iter()
        .map(|(k, from, to, step)| SweepConfig {
            grid: densities(from, to, step)
                .into_iter()
                .map(|r| GridPoint { n: 100, r, k })
                .collect(),
            solvers: vec![cfl(k)],
            trials: 1000,
            cap: 10_000_000,
            master_seed: seed::derive(master_seed, &[k as u64]),
            jobs: 1,
            record_wall_time: false,
        })
        .collect()
    }

    /// Full-scale size sweep for 3-SAT at density 4.0, 1000 trials, cap
    /// `10^7`.
    pub fn full_size(master_seed: u64) -> SweepConfig {
        SweepConfig {
            grid: [25, 50, 100, 200, 400, 800]
                .iter()
                .map(|&n| GridPoint { n, r: 4.0, k: 3 })
                .collect(),
            solvers: vec![cfl(3)],
            trials: 1000,
            cap: 10_000_000,
            master_seed,
            jobs: 1,
            record_wall_time: false,
        }
    }
}
