use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{summarize_point, PointSummary, TrialRecord};
use crate::cfl::{CflParams, Engine};
use crate::encoders::spectrum::DEFAULT_CHANNELS;
use crate::encoders::{
    default_band_rules, spectrum_instance_encoded, BandRule, Deployment, SpectrumEncoding,
};
use crate::{seed, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyConfig {
    pub rules: Vec<BandRule>,
    pub channels: u32,
    pub encoding: SpectrumEncoding,
    pub trials: usize,
    pub a: f64,
    pub b: f64,
    pub cap: u64,
    pub seed: u64,
    pub jobs: usize,
}

impl CaseStudyConfig {
    /// Eleven channels, the default band rules, pairwise clauses,
    /// `a = b = 0.1`.
    pub fn new(trials: usize, cap: u64, seed: u64) -> Self {
        let p = CflParams::wireless_default();
        CaseStudyConfig {
            rules: default_band_rules(),
            channels: DEFAULT_CHANNELS,
            encoding: SpectrumEncoding::Pairwise,
            trials,
            a: p.a(),
            b: p.b(),
            cap,
            seed,
            jobs: 1,
        }
    }

    /// Run seed of trial `t`.
    pub fn trial_seed(&self, t: usize) -> u64 {
        seed::derive(self.seed, &[t as u64])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseStudyResult {
    pub records: Vec<TrialRecord>,
    pub summary: PointSummary,
    /// Channel per AP from the last trial, when it solved.
    pub channel_map: Option<Vec<u32>>,
}

/// Repeated CFL runs on the channel-allocation instance of one deployment.
pub fn case_study(dep: &Deployment, cfg: &CaseStudyConfig) -> Result<CaseStudyResult> {
    if cfg.trials == 0 {
        return Err(Error::usage("trials must be at least 1"));
    }
    if cfg.jobs == 0 {
        return Err(Error::usage("jobs must be at least 1"));
    }
    let params = CflParams::new(cfg.a, cfg.b)?;
    let instance = spectrum_instance_encoded(dep, &cfg.rules, cfg.channels, cfg.encoding)?;
    let run = |t: usize| -> Result<(TrialRecord, Vec<u32>)> {
        let s = cfg.trial_seed(t);
        let mut engine = Engine::new(&instance, params, s)?;
        let r = engine.run(cfg.cap)?;
        let tau = r.tau.unwrap_or(r.rounds);
        let record = TrialRecord {
            family: "spectrum".into(),
            n: dep.len(),
            m: instance.num_clauses(),
            k: 0,
            d: cfg.channels,
            solver: "cfl".into(),
            a: Some(cfg.a),
            b: Some(cfg.b),
            seed: s,
            outcome: r.outcome,
            tau,
            normalized_tau: tau as f64 / dep.len() as f64,
            wall_ms: None,
        };
        Ok((record, r.assignment.0))
    };
    let results: Vec<Result<(TrialRecord, Vec<u32>)>> = if cfg.jobs == 1 {
        (0..cfg.trials).map(run).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::usage(format!("cannot start worker pool: {e}")))?
            .install(|| (0..cfg.trials).into_par_iter().map(run).collect())
    };
    let mut records = Vec::with_capacity(cfg.trials);
    let mut last = None;
    for res in results {
        let (rec, values) = res?;
        last = rec.is_solved().then_some(values);
        records.push(rec);
    }
    let summary = summarize_point(&records.iter().collect::<Vec<_>>())?;
    Ok(CaseStudyResult {
        records,
        summary,
        channel_map: last,
    })
}
