use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csp::{Assignment, ClauseId, CspInstance, SatisfactionSignal, Value, VarId};
use crate::{Error, Result};

use super::{Agent, CflParams};

/// The random stream of agent `index` under a master seed. Streams are
/// independent ChaCha8 streams keyed by the same seed, so any agent's draws
/// can be reproduced without running the others.
pub fn agent_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Solved,
    CapExceeded,
}

/// Compact description of one completed round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundSummary {
    /// Index `t` of the round; the first round is 0.
    pub round: u64,
    /// `n_t`: variables with at least one violated clause.
    pub unsatisfied_variables: usize,
    /// Whether the sampled assignment `X(t)` satisfies every clause.
    pub solved: bool,
}

/// A round with copies of the sampled assignment and the signal vector.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundReport {
    pub round: u64,
    pub assignment: Assignment,
    pub signal: SatisfactionSignal,
    pub solved: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceOptions {
    pub unsatisfied_counts: bool,
    pub assignments: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub unsatisfied_counts: Vec<usize>,
    pub assignments: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub outcome: Outcome,
    /// Stopping time: index of the first round whose sample satisfied every
    /// clause.
    pub tau: Option<u64>,
    /// Rounds completed by the engine so far.
    pub rounds: u64,
    /// Last sampled assignment.
    pub assignment: Assignment,
    pub trace: Option<Trace>,
}

impl RunResult {
    pub fn is_solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }
}

/// Synchronous CFL over one instance.
///
/// A round is: every agent samples, all local signals are computed on the
/// joint sample, every agent updates on its own bit. Clause results are
/// cached between rounds and only clauses touching a changed variable are
/// re-evaluated.
pub struct Engine<'a> {
    instance: &'a CspInstance,
    params: CflParams,
    agents: Vec<Agent>,
    round: u64,
    parallel: bool,
    first_solution: Option<u64>,

    values: Vec<Value>,
    clause_ok: Vec<bool>,
    // per variable: violated clauses in its participation set
    failing: Vec<u32>,
    unsat_clauses: usize,
    unsat_vars: usize,
    cache_valid: bool,

    changed: Vec<VarId>,
    dirty: Vec<ClauseId>,
    dirty_mark: Vec<u64>,
}

impl<'a> Engine<'a> {
    /// All agents start uniform at `1/D_i`; agent `i` draws from
    /// [`agent_rng`]`(seed, i)`.
    pub fn new(instance: &'a CspInstance, params: CflParams, seed: u64) -> Result<Self> {
        if instance.domains().contains(&0) {
            return Err(Error::usage("domain size must be at least 1"));
        }
        let n = instance.num_variables();
        let agents = (0..n)
            .map(|i| Agent::new(instance.domain_size(i), agent_rng(seed, i)))
            .collect();
        Ok(Engine {
            instance,
            params,
            agents,
            round: 0,
            parallel: false,
            first_solution: None,
            values: vec![1; n],
            clause_ok: vec![true; instance.num_clauses()],
            failing: vec![0; n],
            unsat_clauses: 0,
            unsat_vars: 0,
            cache_valid: false,
            changed: Vec::with_capacity(n),
            dirty: Vec::new(),
            dirty_mark: vec![u64::MAX; instance.num_clauses()],
        })
    }

    /// Fan sampling and updates out over the rayon pool. Results are
    /// identical either way since each agent owns its stream.
    pub fn set_parallel(&mut self, parallel: bool) {
        self.parallel = parallel;
    }

    pub fn instance(&self) -> &'a CspInstance {
        self.instance
    }

    pub fn params(&self) -> &CflParams {
        &self.params
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, i: VarId) -> &Agent {
        &self.agents[i]
    }

    /// Number of completed rounds; also the index of the next round.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Stopping time, if a satisfying sample has been seen since the last
    /// instance change.
    pub fn tau(&self) -> Option<u64> {
        self.first_solution
    }

    /// Assignment sampled in the last round.
    pub fn assignment(&self) -> Assignment {
        Assignment(self.values.clone())
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Local signal of `var` in the last round.
    pub fn signal_bit(&self, var: VarId) -> bool {
        self.failing[var] == 0
    }

    pub fn signal(&self) -> SatisfactionSignal {
        SatisfactionSignal(self.failing.iter().map(|&f| f == 0).collect())
    }

    pub fn unsatisfied_variables(&self) -> usize {
        self.unsat_vars
    }

    /// Swap in a changed instance over the same variables. Agents keep their
    /// distributions; the stopping time is reset.
    pub fn replace_instance(&mut self, instance: &'a CspInstance) -> Result<()> {
        if instance.domains() != self.instance.domains() {
            return Err(Error::usage(
                "replacement instance must keep the same variables and domains",
            ));
        }
        self.instance = instance;
        self.first_solution = None;
        self.clause_ok = vec![true; instance.num_clauses()];
        self.dirty_mark = vec![u64::MAX; instance.num_clauses()];
        self.cache_valid = false;
        Ok(())
    }

    /// One synchronous round.
    pub fn step(&mut self) -> Result<RoundSummary> {
        self.sample_all();
        self.evaluate();
        self.update_all()?;
        let solved = self.unsat_clauses == 0;
        let summary = RoundSummary {
            round: self.round,
            unsatisfied_variables: self.unsat_vars,
            solved,
        };
        if solved && self.first_solution.is_none() {
            self.first_solution = Some(self.round);
        }
        self.round += 1;
        Ok(summary)
    }

    /// One round, returning copies of `X(t)` and the signal vector.
    pub fn step_report(&mut self) -> Result<RoundReport> {
        let s = self.step()?;
        Ok(RoundReport {
            round: s.round,
            assignment: self.assignment(),
            signal: self.signal(),
            solved: s.solved,
        })
    }

    /// Step until a sampled assignment satisfies every clause or `cap` more
    /// rounds have run. A capped engine can be resumed by calling `run`
    /// again.
    pub fn run(&mut self, cap: u64) -> Result<RunResult> {
        self.run_observed(cap, TraceOptions::default(), |_, _| {})
    }

    pub fn run_traced(&mut self, cap: u64, opts: TraceOptions) -> Result<RunResult> {
        self.run_observed(cap, opts, |_, _| {})
    }

    /// As [`Engine::run`], calling `observe` after every round.
    pub fn run_observed(
        &mut self,
        cap: u64,
        opts: TraceOptions,
        mut observe: impl FnMut(&RoundSummary, &Engine<'a>),
    ) -> Result<RunResult> {
        if cap == 0 {
            return Err(Error::usage("cap must be at least 1"));
        }
        let mut trace = (opts.unsatisfied_counts || opts.assignments).then(Trace::default);
        let mut budget = cap;
        while self.first_solution.is_none() && budget > 0 {
            let s = self.step()?;
            budget -= 1;
            if let Some(t) = trace.as_mut() {
                if opts.unsatisfied_counts {
                    t.unsatisfied_counts.push(s.unsatisfied_variables);
                }
                if opts.assignments {
                    t.assignments.push(self.assignment());
                }
            }
            observe(&s, self);
        }
        let outcome = match self.first_solution {
            Some(_) => Outcome::Solved,
            None => Outcome::CapExceeded,
        };
        Ok(RunResult {
            outcome,
            tau: self.first_solution,
            rounds: self.round,
            assignment: self.assignment(),
            trace,
        })
    }

    fn sample_all(&mut self) {
        self.changed.clear();
        if self.parallel {
            let fresh: Vec<Value> = self.agents.par_iter_mut().map(Agent::sample).collect();
            for (i, (old, new)) in self.values.iter_mut().zip(fresh).enumerate() {
                if *old != new {
                    *old = new;
                    self.changed.push(i);
                }
            }
        } else {
            for (i, (agent, old)) in self
                .agents
                .iter_mut()
                .zip(self.values.iter_mut())
                .enumerate()
            {
                let new = agent.sample();
                if *old != new {
                    *old = new;
                    self.changed.push(i);
                }
            }
        }
    }

    fn evaluate(&mut self) {
        let inst = self.instance;
        if !self.cache_valid {
            self.failing.fill(0);
            self.unsat_clauses = 0;
            for (m, c) in inst.clauses().iter().enumerate() {
                let ok = c.evaluate(&self.values);
                self.clause_ok[m] = ok;
                if !ok {
                    self.unsat_clauses += 1;
                    for &v in inst.members(m) {
                        self.failing[v] += 1;
                    }
                }
            }
            self.unsat_vars = self.failing.iter().filter(|&&f| f > 0).count();
            self.cache_valid = true;
            return;
        }
        self.dirty.clear();
        for &v in &self.changed {
            for &m in inst.occurrences(v) {
                if self.dirty_mark[m] != self.round {
                    self.dirty_mark[m] = self.round;
                    self.dirty.push(m);
                }
            }
        }
        for &m in &self.dirty {
            let ok = inst.clause(m).evaluate(&self.values);
            if ok == self.clause_ok[m] {
                continue;
            }
            self.clause_ok[m] = ok;
            if ok {
                self.unsat_clauses -= 1;
                for &v in inst.members(m) {
                    self.failing[v] -= 1;
                    if self.failing[v] == 0 {
                        self.unsat_vars -= 1;
                    }
                }
            } else {
                self.unsat_clauses += 1;
                for &v in inst.members(m) {
                    if self.failing[v] == 0 {
                        self.unsat_vars += 1;
                    }
                    self.failing[v] += 1;
                }
            }
        }
    }

    fn update_all(&mut self) -> Result<()> {
        let params = self.params;
        if self.parallel {
            self.agents
                .par_iter_mut()
                .zip(self.failing.par_iter())
                .try_for_each(|(agent, &f)| agent.update(f == 0, &params))
        } else {
            for (agent, &f) in self.agents.iter_mut().zip(&self.failing) {
                agent.update(f == 0, &params)?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Clause;

    fn triangle() -> CspInstance {
        CspInstance::uniform(
            3,
            3,
            vec![
                Clause::not_equal(0, 1).unwrap(),
                Clause::not_equal(1, 2).unwrap(),
                Clause::not_equal(0, 2).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn init_is_uniform_and_unsampled() {
        let inst = CspInstance::uniform(4, 11, vec![]).unwrap();
        let e = Engine::new(&inst, CflParams::symmetric(0.1).unwrap(), 3).unwrap();
        assert_eq!(e.round(), 0);
        assert_eq!(e.tau(), None);
        for a in e.agents() {
            assert!(a.probabilities().iter().all(|&p| p == 1.0 / 11.0));
        }
    }

    #[test]
    fn zero_clauses_stop_at_round_zero() {
        let inst = CspInstance::uniform(5, 4, vec![]).unwrap();
        let mut e = Engine::new(&inst, CflParams::symmetric(0.5).unwrap(), 9).unwrap();
        let r = e.run(10).unwrap();
        assert_eq!(r.outcome, Outcome::Solved);
        assert_eq!(r.tau, Some(0));
        assert_eq!(r.rounds, 1);
    }

    #[test]
    fn incremental_cache_matches_full_evaluation() {
        let inst = triangle();
        let mut e = Engine::new(&inst, CflParams::symmetric(0.3).unwrap(), 17).unwrap();
        for _ in 0..200 {
            let rep = e.step_report().unwrap();
            assert_eq!(rep.signal, inst.signals(&rep.assignment).unwrap());
            assert_eq!(rep.solved, inst.is_solution(&rep.assignment).unwrap());
        }
    }

    #[test]
    fn run_rejects_zero_cap() {
        let inst = triangle();
        let mut e = Engine::new(&inst, CflParams::symmetric(0.3).unwrap(), 1).unwrap();
        assert!(e.run(0).is_err());
    }

    #[test]
    fn capped_run_resumes() {
        let inst = CspInstance::uniform(2, 1, vec![Clause::not_equal(0, 1).unwrap()]).unwrap();
        let mut e = Engine::new(&inst, CflParams::symmetric(0.3).unwrap(), 1).unwrap();
        let r = e.run(5).unwrap();
        assert_eq!(r.outcome, Outcome::CapExceeded);
        assert_eq!(r.rounds, 5);
        let r = e.run(7).unwrap();
        assert_eq!(r.rounds, 12);
    }

    #[test]
    fn replacement_must_keep_domains() {
        let inst = triangle();
        let other = CspInstance::uniform(3, 2, vec![]).unwrap();
        let mut e = Engine::new(&inst, CflParams::symmetric(0.3).unwrap(), 1).unwrap();
        assert!(e.replace_instance(&other).is_err());
    }

    #[test]
    fn traces_record_every_round() {
        let inst = triangle();
        let mut e = Engine::new(&inst, CflParams::symmetric(0.1).unwrap(), 5).unwrap();
        let opts = TraceOptions {
            unsatisfied_counts: true,
            assignments: true,
        };
        let r = e.run_traced(100_000, opts).unwrap();
        let t = r.trace.unwrap();
        assert_eq!(t.unsatisfied_counts.len() as u64, r.rounds);
        assert_eq!(t.assignments.len() as u64, r.rounds);
        assert_eq!(*t.unsatisfied_counts.last().unwrap(), 0);
        assert_eq!(t.assignments.last().unwrap(), &r.assignment);
    }
}
