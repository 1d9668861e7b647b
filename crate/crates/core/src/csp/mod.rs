//! CSP data model: finite-domain variables, scoped clause predicates and
//! declared participation sets.
//!
//! Variables are indexed from 0; domain values run over `1..=D`.

mod clause;
mod document;
mod participation;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub(crate) use clause::for_each_tuple;
pub use clause::{coding_vector, Clause, ClauseKind, Gf2Target, Literal};
pub use document::{InstanceDocument, INSTANCE_FORMAT, INSTANCE_VERSION};
pub use participation::{ParticipationReport, DEFAULT_ENUMERATION_CAP};

pub type VarId = usize;
pub type ClauseId = usize;
pub type Value = u32;

/// A full assignment `x = (x_1, ..., x_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub Vec<Value>);

impl Assignment {
    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Value>> for Assignment {
    fn from(v: Vec<Value>) -> Self {
        Assignment(v)
    }
}

/// One bit per variable: satisfied iff every clause in its participation
/// set holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SatisfactionSignal(pub Vec<bool>);

impl SatisfactionSignal {
    pub fn unsatisfied_count(&self) -> usize {
        self.0.iter().filter(|s| !**s).count()
    }

    pub fn all_satisfied(&self) -> bool {
        self.0.iter().all(|s| *s)
    }
}

/// An immutable CSP instance.
#[derive(Clone, Debug, PartialEq)]
pub struct CspInstance {
    domains: Vec<u32>,
    clauses: Vec<Clause>,
    participation: Vec<Vec<ClauseId>>,
    // clause -> variables whose participation set contains it
    members: Vec<Vec<VarId>>,
    // variable -> clauses whose scope contains it
    occurrences: Vec<Vec<ClauseId>>,
}

impl CspInstance {
    /// Build an instance with an explicit participation declaration.
    ///
    /// Participation sets are sorted and deduplicated. Every scope member of
    /// a clause must declare that clause; declaring extra clauses is allowed.
    pub fn new(
        domains: Vec<u32>,
        clauses: Vec<Clause>,
        mut participation: Vec<Vec<ClauseId>>,
    ) -> Result<Self> {
        if domains.is_empty() {
            return Err(Error::usage("instance needs at least one variable"));
        }
        if domains.contains(&0) {
            return Err(Error::usage("domain size must be at least 1"));
        }
        if participation.len() != domains.len() {
            return Err(Error::usage(
                "participation map must have one entry per variable",
            ));
        }
        for c in &clauses {
            c.check_domains(&domains)?;
        }
        let mut members = vec![Vec::new(); clauses.len()];
        for (var, set) in participation.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            for &m in set.iter() {
                if m >= clauses.len() {
                    return Err(Error::usage(format!(
                        "variable {var} declares clause {m}, which does not exist"
                    )));
                }
                members[m].push(var);
            }
        }
        let mut occurrences = vec![Vec::new(); domains.len()];
        for (m, c) in clauses.iter().enumerate() {
            for &v in c.scope() {
                if participation[v].binary_search(&m).is_err() {
                    return Err(Error::usage(format!(
                        "variable {v} is in the scope of clause {m} but does not declare it"
                    )));
                }
                occurrences[v].push(m);
            }
        }
        Ok(CspInstance {
            domains,
            clauses,
            participation,
            members,
            occurrences,
        })
    }

    /// Build an instance whose participation sets are exactly the clause
    /// scopes.
    pub fn from_scopes(domains: Vec<u32>, clauses: Vec<Clause>) -> Result<Self> {
        let mut participation = vec![Vec::new(); domains.len()];
        for (m, c) in clauses.iter().enumerate() {
            for &v in c.scope() {
                if v >= domains.len() {
                    return Err(Error::usage(format!(
                        "clause {m} references variable {v} out of range"
                    )));
                }
                participation[v].push(m);
            }
        }
        CspInstance::new(domains, clauses, participation)
    }

    /// `n` variables sharing the domain `{1..d}`, participation from scopes.
    pub fn uniform(n: usize, d: u32, clauses: Vec<Clause>) -> Result<Self> {
        CspInstance::from_scopes(vec![d; n], clauses)
    }

    pub fn num_variables(&self) -> usize {
        self.domains.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn domains(&self) -> &[u32] {
        &self.domains
    }

    pub fn domain_size(&self, var: VarId) -> u32 {
        self.domains[var]
    }

    /// Largest domain size across variables.
    pub fn max_domain(&self) -> u32 {
        self.domains.iter().copied().max().unwrap_or(1)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id]
    }

    /// The declared participation set `M_i`.
    pub fn participation(&self, var: VarId) -> &[ClauseId] {
        &self.participation[var]
    }

    /// Variables declaring participation in clause `m`.
    pub fn members(&self, m: ClauseId) -> &[VarId] {
        &self.members[m]
    }

    /// Clauses whose scope contains `var`.
    pub fn occurrences(&self, var: VarId) -> &[ClauseId] {
        &self.occurrences[var]
    }

    /// True when every clause is a k-SAT disjunction.
    pub fn is_ksat(&self) -> bool {
        self.clauses
            .iter()
            .all(|c| matches!(c.kind(), ClauseKind::KsatDisjunction { .. }))
    }

    pub fn check_assignment(&self, x: &Assignment) -> Result<()> {
        if x.len() != self.num_variables() {
            return Err(Error::usage(format!(
                "assignment has {} values, instance has {} variables",
                x.len(),
                self.num_variables()
            )));
        }
        for (i, (&v, &d)) in x.values().iter().zip(&self.domains).enumerate() {
            if v == 0 || v > d {
                return Err(Error::usage(format!(
                    "value {v} of variable {i} outside domain 1..={d}"
                )));
            }
        }
        Ok(())
    }

    /// `Φ_m(x)`.
    pub fn evaluate_clause(&self, clause_id: ClauseId, x: &Assignment) -> Result<bool> {
        if clause_id >= self.num_clauses() {
            return Err(Error::usage(format!("clause {clause_id} out of range")));
        }
        self.check_assignment(x)?;
        Ok(self.clauses[clause_id].evaluate(x.values()))
    }

    /// `min_{m in M_i} Φ_m(x)`; empty participation sets are satisfied.
    pub fn local_signal(&self, var: VarId, x: &Assignment) -> Result<bool> {
        if var >= self.num_variables() {
            return Err(Error::usage(format!("variable {var} out of range")));
        }
        self.check_assignment(x)?;
        Ok(self.local_signal_unchecked(var, x.values()))
    }

    pub(crate) fn local_signal_unchecked(&self, var: VarId, x: &[Value]) -> bool {
        self.participation[var]
            .iter()
            .all(|&m| self.clauses[m].evaluate(x))
    }

    /// All local signals, evaluating each clause once.
    pub fn signals(&self, x: &Assignment) -> Result<SatisfactionSignal> {
        self.check_assignment(x)?;
        let mut sat = vec![true; self.num_variables()];
        for (m, c) in self.clauses.iter().enumerate() {
            if !c.evaluate(x.values()) {
                for &v in &self.members[m] {
                    sat[v] = false;
                }
            }
        }
        Ok(SatisfactionSignal(sat))
    }

    /// True iff every clause holds.
    pub fn is_solution(&self, x: &Assignment) -> Result<bool> {
        self.check_assignment(x)?;
        Ok(self.is_solution_unchecked(x.values()))
    }

    pub(crate) fn is_solution_unchecked(&self, x: &[Value]) -> bool {
        self.clauses.iter().all(|c| c.evaluate(x))
    }

    /// Indices of clauses violated by `x`.
    pub fn unsatisfied_clauses(&self, x: &Assignment) -> Result<Vec<ClauseId>> {
        self.check_assignment(x)?;
        Ok((0..self.num_clauses())
            .filter(|&m| !self.clauses[m].evaluate(x.values()))
            .collect())
    }

    /// Copy of this instance with extra clauses appended; participation for
    /// the new clauses comes from their scopes.
    pub fn with_added_clauses(&self, extra: Vec<Clause>) -> Result<Self> {
        let mut clauses = self.clauses.clone();
        let mut participation = self.participation.clone();
        for c in extra {
            let m = clauses.len();
            for &v in c.scope() {
                if v >= self.num_variables() {
                    return Err(Error::usage("added clause references unknown variable"));
                }
                participation[v].push(m);
            }
            clauses.push(c);
        }
        CspInstance::new(self.domains.clone(), clauses, participation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(d: u32) -> CspInstance {
        CspInstance::uniform(
            3,
            d,
            vec![
                Clause::not_equal(0, 1).unwrap(),
                Clause::not_equal(1, 2).unwrap(),
                Clause::not_equal(0, 2).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_clause_examples() {
        let inst = CspInstance::uniform(2, 2, vec![Clause::not_equal(0, 1).unwrap()]).unwrap();
        assert!(inst.evaluate_clause(0, &vec![1, 2].into()).unwrap());
        assert!(!inst.evaluate_clause(0, &vec![2, 2].into()).unwrap());
        assert!(inst.evaluate_clause(1, &vec![1, 2].into()).is_err());
        assert!(inst.evaluate_clause(0, &vec![1].into()).is_err());
        assert!(inst.evaluate_clause(0, &vec![1, 3].into()).is_err());
    }

    #[test]
    fn local_signal_examples() {
        let lonely = CspInstance::uniform(3, 2, vec![Clause::not_equal(0, 1).unwrap()]).unwrap();
        for x in [[1, 1, 1], [2, 2, 2]] {
            assert!(lonely.local_signal(2, &x.to_vec().into()).unwrap());
        }
        let t = triangle(3);
        assert!(!t.local_signal(0, &vec![1, 1, 2].into()).unwrap());
        assert!(t.local_signal(0, &vec![1, 2, 3].into()).unwrap());
        assert!(t.local_signal(3, &vec![1, 2, 3].into()).is_err());
    }

    #[test]
    fn is_solution_examples() {
        let empty = CspInstance::uniform(2, 4, vec![]).unwrap();
        assert!(empty.is_solution(&vec![3, 4].into()).unwrap());
        let t = triangle(3);
        assert!(t.is_solution(&vec![1, 2, 3].into()).unwrap());
        assert!(!t.is_solution(&vec![1, 1, 2].into()).unwrap());
        assert_eq!(
            t.unsatisfied_clauses(&vec![1, 1, 2].into()).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn signals_match_local_signal() {
        let t = triangle(2);
        let x: Assignment = vec![1, 2, 1].into();
        let s = t.signals(&x).unwrap();
        for v in 0..3 {
            assert_eq!(s.0[v], t.local_signal(v, &x).unwrap());
        }
        assert_eq!(s.unsatisfied_count(), 2);
    }

    #[test]
    fn construction_invariants() {
        assert!(CspInstance::uniform(0, 2, vec![]).is_err());
        assert!(CspInstance::uniform(2, 0, vec![]).is_err());
        let c = Clause::not_equal(0, 1).unwrap();
        // scope member missing the declaration
        assert!(CspInstance::new(vec![2, 2], vec![c.clone()], vec![vec![0], vec![]]).is_err());
        // dangling clause id
        assert!(CspInstance::new(vec![2, 2], vec![c.clone()], vec![vec![0, 3], vec![0]]).is_err());
        // over-declaration is fine
        let inst =
            CspInstance::new(vec![2, 2, 2], vec![c], vec![vec![0], vec![0], vec![0]]).unwrap();
        assert_eq!(inst.members(0), &[0, 1, 2]);
        // ksat over a ternary variable
        let k = Clause::ksat(vec![Literal::positive(0)]).unwrap();
        assert!(CspInstance::uniform(1, 3, vec![k]).is_err());
    }
}
