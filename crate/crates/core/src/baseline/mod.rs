//! Centralized stochastic local search for k-SAT.
//!
//! Both walks start from a uniformly random assignment and repeatedly pick a
//! uniformly random violated clause and flip one of its variables. They
//! differ only in which variable is flipped. Violated clauses are tracked
//! incrementally, so a flip costs time proportional to the flipped
//! variable's occurrences.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cfl::Outcome;
use crate::csp::{Assignment, CspInstance, Literal, VarId};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct WalkResult {
    pub outcome: Outcome,
    pub flips: u64,
    pub assignment: Assignment,
    /// Variable flipped at each step, when requested.
    pub flip_trace: Option<Vec<VarId>>,
}

impl WalkResult {
    pub fn is_solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }
}

/// How a variable is chosen inside the selected violated clause.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "strategy")]
pub enum FlipRule {
    /// Uniformly random scope variable.
    Uniform,
    /// With probability `noise` a random variable, otherwise one with the
    /// fewest clauses broken by the flip (ties uniform).
    BreakCount { noise: f64 },
}

/// Random walk: flip a uniformly random variable of a uniformly random
/// violated clause.
pub fn schoening_walk(instance: &CspInstance, seed: u64, cap: u64) -> Result<WalkResult> {
    walk(instance, seed, cap, FlipRule::Uniform, false)
}

/// WalkSAT with break-count greedy moves and the given noise probability.
pub fn walksat(instance: &CspInstance, seed: u64, cap: u64, noise: f64) -> Result<WalkResult> {
    walk(instance, seed, cap, FlipRule::BreakCount { noise }, false)
}

pub fn walk(
    instance: &CspInstance,
    seed: u64,
    cap: u64,
    rule: FlipRule,
    record_flips: bool,
) -> Result<WalkResult> {
    if !instance.is_ksat() {
        return Err(Error::usage("local-search baselines need a k-SAT instance"));
    }
    if let FlipRule::BreakCount { noise } = rule {
        if !(0.0..=1.0).contains(&noise) {
            return Err(Error::usage(format!(
                "noise must lie in [0, 1], got {noise}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = WalkState::new(instance, &mut rng);
    let mut trace = record_flips.then(Vec::new);
    let mut flips = 0u64;
    let mut candidates: Vec<VarId> = Vec::new();
    while !state.unsat.is_empty() && flips < cap {
        let c = state.unsat[rng.gen_range(0..state.unsat.len())];
        let lits = &state.clauses[c];
        let var = match rule {
            FlipRule::Uniform => lits[rng.gen_range(0..lits.len())].var,
            FlipRule::BreakCount { noise } => {
                if rng.gen::<f64>() < noise {
                    lits[rng.gen_range(0..lits.len())].var
                } else {
                    candidates.clear();
                    let mut best = u32::MAX;
                    for l in lits {
                        let b = state.break_count(l.var);
                        if b < best {
                            best = b;
                            candidates.clear();
                        }
                        if b == best {
                            candidates.push(l.var);
                        }
                    }
                    candidates[rng.gen_range(0..candidates.len())]
                }
            }
        };
        state.flip(var);
        flips += 1;
        if let Some(t) = trace.as_mut() {
            t.push(var);
        }
    }
    let outcome = if state.unsat.is_empty() {
        Outcome::Solved
    } else {
        Outcome::CapExceeded
    };
    Ok(WalkResult {
        outcome,
        flips,
        assignment: Assignment(
            state
                .values
                .iter()
                .map(|&b| if b { 2 } else { 1 })
                .collect(),
        ),
        flip_trace: trace,
    })
}

struct WalkState {
    // tautologies dropped, repeated literals merged
    clauses: Vec<Vec<Literal>>,
    // per variable: (clause, literal is negated)
    occurrences: Vec<Vec<(usize, bool)>>,
    true_count: Vec<u32>,
    unsat: Vec<usize>,
    // position of each clause in `unsat`, usize::MAX when satisfied
    unsat_pos: Vec<usize>,
    values: Vec<bool>,
}

impl WalkState {
    fn new(instance: &CspInstance, rng: &mut ChaCha8Rng) -> Self {
        let n = instance.num_variables();
        let values: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let mut clauses = Vec::new();
        for c in instance.clauses() {
            let mut lits: Vec<Literal> = Vec::new();
            let mut tautology = false;
            for &l in c.literals().expect("checked k-SAT") {
                if lits.contains(&l) {
                    continue;
                }
                if lits.iter().any(|o| o.var == l.var) {
                    tautology = true;
                    break;
                }
                lits.push(l);
            }
            if !tautology {
                clauses.push(lits);
            }
        }
        let mut occurrences = vec![Vec::new(); n];
        let mut true_count = vec![0u32; clauses.len()];
        let mut unsat = Vec::new();
        let mut unsat_pos = vec![usize::MAX; clauses.len()];
        for (c, lits) in clauses.iter().enumerate() {
            for l in lits {
                occurrences[l.var].push((c, l.negated));
                if values[l.var] != l.negated {
                    true_count[c] += 1;
                }
            }
            if true_count[c] == 0 {
                unsat_pos[c] = unsat.len();
                unsat.push(c);
            }
        }
        WalkState {
            clauses,
            occurrences,
            true_count,
            unsat,
            unsat_pos,
            values,
        }
    }

    /// Clauses that the flip of `var` would leave with no true literal.
    fn break_count(&self, var: VarId) -> u32 {
        let v = self.values[var];
        self.occurrences[var]
            .iter()
            .filter(|&&(c, neg)| v != neg && self.true_count[c] == 1)
            .count() as u32
    }

    fn flip(&mut self, var: VarId) {
        let was = self.values[var];
        self.values[var] = !was;
        for i in 0..self.occurrences[var].len() {
            let (c, neg) = self.occurrences[var][i];
            if was != neg {
                // literal goes from true to false
                self.true_count[c] -= 1;
                if self.true_count[c] == 0 {
                    self.unsat_pos[c] = self.unsat.len();
                    self.unsat.push(c);
                }
            } else {
                self.true_count[c] += 1;
                if self.true_count[c] == 1 {
                    let pos = self.unsat_pos[c];
                    let last = *self.unsat.last().expect("clause was violated");
                    self.unsat.swap_remove(pos);
                    if last != c {
                        self.unsat_pos[last] = pos;
                    }
                    self.unsat_pos[c] = usize::MAX;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Clause;
    use crate::encoders::{parse_dimacs, random_ksat};

    #[test]
    fn unit_clause_from_false_start_takes_one_flip() {
        let inst = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        // find seeds whose initial value is false; they must take one flip
        let mut checked = 0;
        for seed in 0..50 {
            let r = schoening_walk(&inst, seed, 10).unwrap();
            assert!(r.is_solved());
            assert!(r.flips <= 1);
            if r.flips == 1 {
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn zero_clauses_zero_flips() {
        let inst = random_ksat(4, 0, 3, 1).unwrap();
        let r = schoening_walk(&inst, 3, 10).unwrap();
        assert_eq!((r.outcome, r.flips), (Outcome::Solved, 0));
    }

    #[test]
    fn walksat_two_literal_clause_one_flip() {
        let inst = parse_dimacs("p cnf 2 1\n1 2 0\n").unwrap();
        for noise in [0.0, 0.5, 1.0] {
            for seed in 0..40 {
                let r = walksat(&inst, seed, 10, noise).unwrap();
                assert!(r.is_solved() && r.flips <= 1);
            }
        }
    }

    #[test]
    fn rejects_non_ksat_and_bad_noise() {
        let inst = CspInstance::uniform(2, 2, vec![Clause::not_equal(0, 1).unwrap()]).unwrap();
        assert!(schoening_walk(&inst, 0, 10).is_err());
        let k = parse_dimacs("p cnf 1 1\n1 0\n").unwrap();
        assert!(walksat(&k, 0, 10, 1.5).is_err());
    }

    #[test]
    fn unsatisfiable_hits_cap() {
        let inst = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let r = schoening_walk(&inst, 0, 100).unwrap();
        assert_eq!((r.outcome, r.flips), (Outcome::CapExceeded, 100));
    }

    #[test]
    fn incremental_state_matches_recount() {
        let inst = random_ksat(30, 120, 3, 8).unwrap();
        let r = walk(&inst, 4, 500, FlipRule::BreakCount { noise: 0.4 }, true).unwrap();
        let unsat = inst.unsatisfied_clauses(&r.assignment).unwrap();
        assert_eq!(r.is_solved(), unsat.is_empty());
        assert_eq!(r.flip_trace.unwrap().len() as u64, r.flips);
    }

    #[test]
    fn tautologies_are_ignored() {
        let inst = parse_dimacs("p cnf 2 2\n1 -1 0\n2 2 0\n").unwrap();
        let r = schoening_walk(&inst, 5, 10).unwrap();
        assert!(r.is_solved());
        assert_eq!(r.assignment.values()[1], 2);
    }
}
