use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::csp::Value;
use crate::{Error, Result};

use super::CflParams;

/// Largest tolerated deviation of a probability vector's sum from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// The learning state of one variable: a distribution over `{1..D}` and the
/// value most recently drawn from it.
///
/// An agent sees nothing about the instance. Each round it draws a value and
/// is then told one bit: whether all of its clauses held.
#[derive(Clone, Debug)]
pub struct Agent {
    domain: u32,
    // Some(k) when the distribution is the point mass on k; `probs` is then
    // stale and ignored.
    point_mass: Option<Value>,
    probs: Vec<f64>,
    value: Value,
    rng: ChaCha8Rng,
}

/// Read-only view of an agent's distribution.
#[derive(Clone, Debug, PartialEq)]
pub enum Belief<'a> {
    PointMass(Value),
    Mixed(&'a [f64]),
}

impl Agent {
    /// Uniform distribution `1/D` on every value.
    pub fn new(domain: u32, rng: ChaCha8Rng) -> Self {
        assert!(domain >= 1, "domain must be non-empty");
        Agent {
            domain,
            point_mass: None,
            probs: vec![1.0 / f64::from(domain); domain as usize],
            value: 1,
            rng,
        }
    }

    pub fn domain(&self) -> u32 {
        self.domain
    }

    /// Value drawn in the most recent [`Agent::sample`].
    pub fn value(&self) -> Value {
        self.value
    }

    pub fn belief(&self) -> Belief<'_> {
        match self.point_mass {
            Some(k) => Belief::PointMass(k),
            None => Belief::Mixed(&self.probs),
        }
    }

    /// Probability of value `k` (1-based).
    pub fn probability(&self, k: Value) -> f64 {
        match self.point_mass {
            Some(m) => f64::from(u8::from(m == k)),
            None => self.probs[(k - 1) as usize],
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (1..=self.domain).map(|k| self.probability(k)).collect()
    }

    /// Draw `x_i` from the current distribution. A point-mass agent still
    /// consumes one draw so every stream advances in lockstep.
    pub fn sample(&mut self) -> Value {
        let u: f64 = self.rng.gen();
        self.value = match self.point_mass {
            Some(k) => k,
            None => {
                // rounding can leave the running sum just below u; fall back
                // to the last value with positive mass
                let mut acc = 0.0;
                let mut chosen = None;
                let mut last_positive = self.domain;
                for (j, &p) in self.probs.iter().enumerate() {
                    if p > 0.0 {
                        last_positive = j as Value + 1;
                    }
                    acc += p;
                    if u < acc {
                        chosen = Some(j as Value + 1);
                        break;
                    }
                }
                chosen.unwrap_or(last_positive)
            }
        };
        self.value
    }

    /// Apply the learning update for the value last sampled.
    ///
    /// Satisfied: lock onto the sampled value. Unsatisfied: interpolate with
    /// weight `b` toward the distribution that puts `a / (D-1+a/b)` on the
    /// failed value and `b / (D-1+a/b)` on every other value.
    pub fn update(&mut self, satisfied: bool, params: &CflParams) -> Result<()> {
        if satisfied {
            self.point_mass = Some(self.value);
            return Ok(());
        }
        if let Some(k) = self.point_mass.take() {
            self.probs.fill(0.0);
            self.probs[(k - 1) as usize] = 1.0;
        }
        let (a, b) = (params.a(), params.b());
        let denom = f64::from(self.domain - 1) + a / b;
        let keep = 1.0 - b;
        let to_failed = a / denom;
        let to_other = b / denom;
        let failed = (self.value - 1) as usize;
        let mut sum = 0.0;
        for (j, p) in self.probs.iter_mut().enumerate() {
            *p = keep * *p + if j == failed { to_failed } else { to_other };
            sum += *p;
        }
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Consistency(format!(
                "probability vector sums to {sum} after update"
            )));
        }
        Ok(())
    }

    /// Overwrite the distribution; used by tests that start agents from an
    /// arbitrary state.
    pub fn set_probabilities(&mut self, probs: &[f64]) -> Result<()> {
        if probs.len() != self.domain as usize {
            return Err(Error::usage(
                "probability vector length differs from domain",
            ));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p))
            || (probs.iter().sum::<f64>() - 1.0).abs() > NORMALIZATION_TOLERANCE
        {
            return Err(Error::usage("not a probability vector"));
        }
        self.point_mass = None;
        self.probs.copy_from_slice(probs);
        Ok(())
    }

    /// Force the value reported by [`Agent::value`] without drawing.
    pub fn set_value(&mut self, value: Value) -> Result<()> {
        if value == 0 || value > self.domain {
            return Err(Error::usage("value outside the domain"));
        }
        self.value = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn agent(d: u32) -> Agent {
        Agent::new(d, ChaCha8Rng::seed_from_u64(1))
    }

    #[test]
    fn starts_uniform() {
        let a = agent(2);
        assert_eq!(a.probabilities(), vec![0.5, 0.5]);
        let a = agent(11);
        assert!(a.probabilities().iter().all(|&p| p == 1.0 / 11.0));
    }

    #[test]
    fn unsatisfied_with_a_b_one_resets_to_uniform() {
        let params = CflParams::new(1.0, 1.0).unwrap();
        let mut a = agent(2);
        a.set_probabilities(&[0.9, 0.1]).unwrap();
        a.set_value(2).unwrap();
        a.update(false, &params).unwrap();
        assert_eq!(a.probabilities(), vec![0.5, 0.5]);
    }

    #[test]
    fn unsatisfied_small_weights() {
        let params = CflParams::new(0.2, 0.2).unwrap();
        let mut a = agent(2);
        a.set_probabilities(&[1.0, 0.0]).unwrap();
        a.set_value(1).unwrap();
        a.update(false, &params).unwrap();
        let p = a.probabilities();
        assert!((p[0] - 0.9).abs() < 1e-15);
        assert!((p[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn satisfied_locks_value() {
        let params = CflParams::new(0.3, 0.7).unwrap();
        let mut a = agent(5);
        let v = a.sample();
        a.update(true, &params).unwrap();
        assert_eq!(a.belief(), Belief::PointMass(v));
        for _ in 0..50 {
            assert_eq!(a.sample(), v);
        }
    }

    #[test]
    fn leaving_point_mass_starts_from_delta() {
        let params = CflParams::new(0.1, 0.1).unwrap();
        let mut a = agent(3);
        a.set_value(2).unwrap();
        a.update(true, &params).unwrap();
        a.update(false, &params).unwrap();
        let p = a.probabilities();
        let denom = 2.0 + 1.0;
        assert!((p[1] - (0.9 + 0.1 / denom)).abs() < 1e-15);
        assert!((p[0] - 0.1 / denom).abs() < 1e-15);
    }

    #[test]
    fn single_value_domain_stays_put() {
        let params = CflParams::new(0.5, 0.25).unwrap();
        let mut a = agent(1);
        for _ in 0..10 {
            assert_eq!(a.sample(), 1);
            a.update(false, &params).unwrap();
        }
        assert!((a.probability(1) - 1.0).abs() < 1e-12);
    }
}
