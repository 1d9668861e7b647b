use crate::{Error, Result};

use super::{for_each_tuple, ClauseId, CspInstance, Value, VarId};

/// Default budget of predicate evaluations for [`CspInstance::validate_participation`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// Discrepancies between declared and semantic clause participation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParticipationReport {
    /// Declared `(variable, clause)` pairs where the variable cannot change
    /// the clause's value. Warnings only.
    pub inert: Vec<(VarId, ClauseId)>,
    /// `(variable, clause)` pairs where the variable can influence the clause
    /// but does not declare it.
    pub missing: Vec<(VarId, ClauseId)>,
    pub evaluations: u64,
}

impl ParticipationReport {
    /// No missing participations; inert declarations are tolerated.
    pub fn is_sound(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.inert.is_empty()
    }
}

impl CspInstance {
    /// Exhaustively determine which variables can influence each clause and
    /// compare against the declared participation sets.
    ///
    /// Predicates only read their scope, so variables outside a scope never
    /// influence it. Each clause is tabulated once over its scope's domain
    /// product; the total number of tabulated tuples is bounded by `cap`.
    pub fn validate_participation(&self, cap: u64) -> Result<ParticipationReport> {
        let mut needed: u128 = 0;
        for c in self.clauses() {
            let size: u128 = c
                .scope()
                .iter()
                .map(|&v| u128::from(self.domain_size(v)))
                .product();
            needed += size;
        }
        if needed > u128::from(cap) {
            return Err(Error::EnumerationCap { needed, cap });
        }

        let mut report = ParticipationReport::default();
        let mut scratch: Vec<Value> = Vec::new();
        for (m, c) in self.clauses().iter().enumerate() {
            let domains: Vec<u32> = c.scope().iter().map(|&v| self.domain_size(v)).collect();
            let mut table = Vec::new();
            for_each_tuple(&domains, |t| table.push(c.evaluate_tuple(t, &mut scratch)));
            report.evaluations += table.len() as u64;

            // strides for mixed-radix indexing in lexicographic order
            let mut strides = vec![1usize; domains.len()];
            for k in (0..domains.len().saturating_sub(1)).rev() {
                strides[k] = strides[k + 1] * domains[k + 1] as usize;
            }
            let mut influences = vec![false; domains.len()];
            for (idx, &val) in table.iter().enumerate() {
                for k in 0..domains.len() {
                    if influences[k] {
                        continue;
                    }
                    let digit = (idx / strides[k]) % domains[k] as usize;
                    let base = idx - digit * strides[k];
                    if (0..domains[k] as usize).any(|d| table[base + d * strides[k]] != val) {
                        influences[k] = true;
                    }
                }
            }
            for (k, &v) in c.scope().iter().enumerate() {
                let declared = self.participation(v).binary_search(&m).is_ok();
                if influences[k] && !declared {
                    report.missing.push((v, m));
                }
            }
            for &v in self.members(m) {
                let pos = c.scope().iter().position(|&s| s == v);
                if !pos.is_some_and(|k| influences[k]) {
                    report.inert.push((v, m));
                }
            }
        }
        report.inert.sort_unstable();
        report.missing.sort_unstable();
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Clause;

    #[test]
    fn edge_endpoints_influence() {
        let inst = CspInstance::uniform(2, 3, vec![Clause::not_equal(0, 1).unwrap()]).unwrap();
        let r = inst
            .validate_participation(DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert!(r.is_exact());
        assert_eq!(r.evaluations, 9);
    }

    #[test]
    fn constant_clause_members_are_inert() {
        let c = Clause::tabulate(vec![0, 1], &[2, 2], |_| true).unwrap();
        let inst = CspInstance::uniform(2, 2, vec![c]).unwrap();
        let r = inst
            .validate_participation(DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert_eq!(r.inert, vec![(0, 0), (1, 0)]);
        assert!(r.is_sound());
    }

    #[test]
    fn over_declaration_outside_scope_is_inert() {
        let c = Clause::not_equal(0, 1).unwrap();
        let inst =
            CspInstance::new(vec![2, 2, 2], vec![c], vec![vec![0], vec![0], vec![0]]).unwrap();
        let r = inst
            .validate_participation(DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert_eq!(r.inert, vec![(2, 0)]);
        assert!(r.missing.is_empty());
    }

    #[test]
    fn cap_refuses_large_enumerations() {
        let scope: Vec<usize> = (0..12).collect();
        let c = Clause::channel_band(0, &scope[1..], 1).unwrap();
        let inst = CspInstance::uniform(12, 11, vec![c]).unwrap();
        assert!(matches!(
            inst.validate_participation(DEFAULT_ENUMERATION_CAP),
            Err(Error::EnumerationCap { .. })
        ));
    }
}
