//! Stopping-time statistics with right-censoring.
//!
//! Quantiles use the nearest-rank convention: the `q`-quantile of `n`
//! sorted observations is the one at 1-based rank `max(1, ceil(q n))`.
//! Censored runs sort above every solved run, so a quantile that lands on
//! one is reported as censored rather than as a number.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::TrialRecord;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Quantile {
    Value {
        value: u64,
    },
    /// Exceeds the cap: more than `cap` rounds or flips.
    Censored {
        cap: u64,
    },
}

impl Quantile {
    pub fn value(&self) -> Option<u64> {
        match *self {
            Quantile::Value { value } => Some(value),
            Quantile::Censored { .. } => None,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, Quantile::Censored { .. })
    }

    /// Orders values below censored entries.
    fn sort_key(&self) -> (bool, u64) {
        match *self {
            Quantile::Value { value } => (false, value),
            Quantile::Censored { cap } => (true, cap),
        }
    }
}

impl PartialOrd for Quantile {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.sort_key().cmp(&other.sort_key()))
    }
}

impl fmt::Display for Quantile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantile::Value { value } => write!(f, "{value}"),
            Quantile::Censored { cap } => write!(f, "> {cap}"),
        }
    }
}

/// 0-based index of the nearest-rank `q`-quantile among `n` sorted items.
pub fn nearest_rank(n: usize, q: f64) -> usize {
    assert!(n > 0 && (0.0..=1.0).contains(&q));
    ((q * n as f64).ceil() as usize).clamp(1, n) - 1
}

/// Nearest-rank quantile of a sample where `None` marks a censored run.
pub fn quantile(sample: &[Option<u64>], q: f64, cap: u64) -> Result<Quantile> {
    if sample.is_empty() {
        return Err(Error::usage("quantile of an empty sample"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::usage(format!(
            "quantile level must lie in [0, 1], got {q}"
        )));
    }
    let mut solved: Vec<u64> = sample.iter().flatten().copied().collect();
    solved.sort_unstable();
    let idx = nearest_rank(sample.len(), q);
    Ok(match solved.get(idx) {
        Some(&value) => Quantile::Value { value },
        None => Quantile::Censored { cap },
    })
}

/// Statistics over the runs of one grid point and solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub solver: String,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub trials: usize,
    pub solved: usize,
    pub success_rate: f64,
    /// Largest `tau` among censored runs, 0 when none were censored.
    pub cap: u64,
    pub median: Quantile,
    pub q05: Quantile,
    pub q95: Quantile,
    /// `median / n`, absent when the median is censored.
    pub median_normalized: Option<f64>,
    /// Mean over solved runs only.
    pub mean_solved: Option<f64>,
}

fn same_point(a: &TrialRecord, b: &TrialRecord) -> bool {
    a.family == b.family
        && (a.n, a.m, a.k, a.d) == (b.n, b.m, b.k, b.d)
        && a.solver == b.solver
        && a.a.map(f64::to_bits) == b.a.map(f64::to_bits)
        && a.b.map(f64::to_bits) == b.b.map(f64::to_bits)
}

/// Group records by grid point and solver, in order of first appearance.
pub fn group(records: &[TrialRecord]) -> Vec<Vec<&TrialRecord>> {
    let mut groups: Vec<Vec<&TrialRecord>> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|g| same_point(g[0], r)) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    groups
}

/// Summarize one group of records that share a grid point and solver.
pub fn summarize_point(records: &[&TrialRecord]) -> Result<PointSummary> {
    let first = *records
        .first()
        .ok_or_else(|| Error::usage("cannot summarize an empty record set"))?;
    if records.iter().any(|r| !same_point(first, r)) {
        return Err(Error::usage("records span more than one grid point"));
    }
    let cap = records
        .iter()
        .filter(|r| !r.is_solved())
        .map(|r| r.tau)
        .max()
        .unwrap_or(0);
    let sample: Vec<Option<u64>> = records
        .iter()
        .map(|r| r.is_solved().then_some(r.tau))
        .collect();
    let solved: Vec<u64> = sample.iter().flatten().copied().collect();
    let median = quantile(&sample, 0.5, cap)?;
    Ok(PointSummary {
        family: first.family.clone(),
        n: first.n,
        m: first.m,
        k: first.k,
        d: first.d,
        solver: first.solver.clone(),
        a: first.a,
        b: first.b,
        trials: records.len(),
        solved: solved.len(),
        success_rate: solved.len() as f64 / records.len() as f64,
        cap,
        median,
        q05: quantile(&sample, 0.05, cap)?,
        q95: quantile(&sample, 0.95, cap)?,
        median_normalized: median.value().map(|v| v as f64 / first.n.max(1) as f64),
        mean_solved: (!solved.is_empty())
            .then(|| solved.iter().map(|&t| t as f64).sum::<f64>() / solved.len() as f64),
    })
}

/// Per-point statistics, one entry per grid point and solver.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<PointSummary>> {
    group(records).iter().map(|g| summarize_point(g)).collect()
}

/// Empirical `P(τ > t)` at `t = 0` and at every distinct solved `τ`.
///
/// Censored runs count as exceeding every threshold. The series is
/// nonincreasing in `t`.
pub fn ccdf(records: &[TrialRecord]) -> Result<Vec<(u64, f64)>> {
    if !records.iter().any(TrialRecord::is_solved) {
        return Err(Error::usage("empirical tail needs at least one solved run"));
    }
    let total = records.len() as f64;
    let mut solved: Vec<u64> = records
        .iter()
        .filter(|r| r.is_solved())
        .map(|r| r.tau)
        .collect();
    solved.sort_unstable();
    let mut thresholds = vec![0u64];
    thresholds.extend(solved.iter().copied().filter(|&t| t > 0));
    thresholds.dedup();
    Ok(thresholds
        .into_iter()
        .map(|t| {
            let at_most = solved.partition_point(|&x| x <= t);
            (t, (records.len() - at_most) as f64 / total)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfl::Outcome;

    fn rec(tau: u64, solved: bool) -> TrialRecord {
        TrialRecord {
            family: "x".into(),
            n: 10,
            m: 0,
            k: 0,
            d: 3,
            solver: "cfl".into(),
            a: Some(0.1),
            b: Some(0.1),
            seed: 0,
            outcome: if solved {
                Outcome::Solved
            } else {
                Outcome::CapExceeded
            },
            tau,
            normalized_tau: tau as f64 / 10.0,
            wall_ms: None,
        }
    }

    #[test]
    fn five_point_example() {
        let rs: Vec<_> = [1, 2, 3, 4, 100].iter().map(|&t| rec(t, true)).collect();
        let s = &summarize(&rs).unwrap()[0];
        assert_eq!(s.median, Quantile::Value { value: 3 });
        assert_eq!(s.q95, Quantile::Value { value: 100 });
        assert_eq!(s.q05, Quantile::Value { value: 1 });
        assert_eq!(s.success_rate, 1.0);
        assert_eq!(s.mean_solved, Some(22.0));
        assert_eq!(s.median_normalized, Some(0.3));
    }

    #[test]
    fn all_censored() {
        let rs: Vec<_> = (0..4).map(|_| rec(1000, false)).collect();
        let s = &summarize(&rs).unwrap()[0];
        assert_eq!(s.success_rate, 0.0);
        assert_eq!(s.median, Quantile::Censored { cap: 1000 });
        assert_eq!(s.median.to_string(), "> 1000");
        assert_eq!(s.mean_solved, None);
    }

    #[test]
    fn ccdf_example() {
        let rs: Vec<_> = [1, 1, 2].iter().map(|&t| rec(t, true)).collect();
        assert_eq!(ccdf(&rs).unwrap(), vec![(0, 1.0), (1, 1.0 / 3.0), (2, 0.0)]);
        let mut with_censored = rs.clone();
        with_censored.push(rec(50, false));
        assert_eq!(ccdf(&with_censored).unwrap().last().unwrap(), &(2, 0.25));
        assert!(ccdf(&[rec(5, false)]).is_err());
    }

    #[test]
    fn groups_keep_first_appearance_order() {
        let mut other = rec(4, true);
        other.solver = "schoening".into();
        let rs = vec![rec(1, true), other.clone(), rec(2, true), other];
        let s = summarize(&rs).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].solver.as_str(), s[0].trials), ("cfl", 2));
        assert!(summarize_point(&rs.iter().collect::<Vec<_>>()).is_err());
    }
}
