//! Communication-free learning (CFL).
//!
//! Every variable runs an independent learning agent holding a probability
//! vector over its domain. Rounds are synchronous: all agents sample, every
//! agent is told whether all of its clauses hold, and each updates on that
//! single bit. Once a sampled assignment satisfies every clause, all agents
//! lock onto it and the assignment is reproduced forever.

mod agent;
mod bounds;
mod engine;
pub mod trace;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use agent::{Agent, Belief, NORMALIZATION_TOLERANCE};
pub use bounds::{gamma, iteration_bound_log, BoundKind};
pub use engine::{
    agent_rng, Engine, Outcome, RoundReport, RoundSummary, RunResult, Trace, TraceOptions,
};

/// Default iteration cap.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// The two design weights: `a` sets the aversion to a value that caused
/// dissatisfaction, `b` how quickly past experience is forgotten.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CflParams {
    a: f64,
    b: f64,
}

impl CflParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::usage(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        Ok(CflParams { a, b })
    }

    /// `a = b`.
    pub fn symmetric(b: f64) -> Result<Self> {
        CflParams::new(b, b)
    }

    /// Tuned defaults for random k-SAT: 0.2, 0.1 and 0.05 for k = 3, 4, 5.
    /// Other k fall back to the wireless setting.
    pub fn ksat_default(k: usize) -> Self {
        let b = match k {
            3 => 0.2,
            4 => 0.1,
            5 => 0.05,
            _ => 0.1,
        };
        CflParams { a: b, b }
    }

    /// Default for channel allocation and colouring problems.
    pub fn wireless_default() -> Self {
        CflParams { a: 0.1, b: 0.1 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_range() {
        assert!(CflParams::new(0.0, 0.5).is_err());
        assert!(CflParams::new(0.5, 1.5).is_err());
        assert!(CflParams::new(f64::NAN, 0.5).is_err());
        assert!(CflParams::new(1.0, 1.0).is_ok());
        assert_eq!(CflParams::ksat_default(4).b(), 0.1);
        assert_eq!(CflParams::ksat_default(5).a(), 0.05);
    }
}
