use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csp::{Clause, CspInstance, Literal};
use crate::{Error, Result};

/// Random k-SAT phase-transition thresholds in clause density `r = M/N`.
pub mod thresholds {
    /// Clause widths the table covers.
    pub const K: [usize; 6] = [3, 4, 5, 7, 10, 20];
    /// `2^k log 2`.
    pub const FIRST_MOMENT: [f64; 6] = [5.54, 11.09, 22.18, 88.72, 709.78, 726_817.0];
    /// Rigorous upper bounds on the unsatisfiability threshold.
    pub const UNSAT_UPPER_BOUND: [f64; 6] = [4.51, 10.23, 21.33, 87.88, 708.94, 726_817.0];
    /// Rigorous lower bounds on the satisfiability threshold.
    pub const SAT_LOWER_BOUND: [f64; 6] = [3.52, 7.91, 18.79, 84.82, 704.94, 726_809.0];
    /// `2^k log 2 - k`.
    pub const SECOND_MOMENT: [f64; 6] = [2.54, 7.09, 17.18, 81.72, 699.78, 706_817.0];
    /// Lower bounds on the polynomial-time threshold.
    pub const POLY_LOWER_BOUND: [f64; 6] = [3.52, 5.54, 9.63, 33.23, 172.65, 95_263.0];
    /// Statistical-physics estimates of the unsatisfiability threshold
    /// (unavailable for k = 20).
    pub const UNSAT_ESTIMATE: [Option<f64>; 6] = [
        Some(4.267),
        Some(9.93),
        Some(21.12),
        Some(87.79),
        Some(708.91),
        None,
    ];
    /// One-step replica symmetry breaking estimates.
    pub const ONE_RSB_ESTIMATE: [Option<f64>; 6] =
        [Some(4.15), Some(9.38), Some(19.16), Some(62.5), None, None];

    fn lookup(table: &[Option<f64>; 6], k: usize) -> Option<f64> {
        K.iter().position(|&x| x == k).and_then(|i| table[i])
    }

    pub fn unsat_estimate(k: usize) -> Option<f64> {
        lookup(&UNSAT_ESTIMATE, k)
    }

    pub fn one_rsb_estimate(k: usize) -> Option<f64> {
        lookup(&ONE_RSB_ESTIMATE, k)
    }
}

/// Clause count for density `r` over `n` variables, `round(r n)`.
pub fn clauses_for_ratio(n: usize, r: f64) -> usize {
    (r * n as f64).round() as usize
}

/// Random k-SAT: `m` clauses, each over `k` distinct variables drawn
/// uniformly without replacement, each literal negated with probability 1/2.
/// Duplicate clauses are allowed. Variables are binary with 1 = false and
/// 2 = true.
pub fn random_ksat(n: usize, m: usize, k: usize, seed: u64) -> Result<CspInstance> {
    generate(n, m, k, seed, false)
}

/// As [`random_ksat`] but rejects repeated clauses.
pub fn random_ksat_distinct(n: usize, m: usize, k: usize, seed: u64) -> Result<CspInstance> {
    generate(n, m, k, seed, true)
}

fn generate(n: usize, m: usize, k: usize, seed: u64, distinct: bool) -> Result<CspInstance> {
    if k == 0 || k > n {
        return Err(Error::usage(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if distinct {
        let possible = (binomial(n, k) as f64) * 2f64.powi(k as i32);
        if (m as f64) > possible {
            return Err(Error::usage("more distinct clauses requested than exist"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<Literal>> = HashSet::new();
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let mut vars = index::sample(&mut rng, n, k).into_vec();
        vars.sort_unstable();
        let literals: Vec<Literal> = vars
            .into_iter()
            .map(|v| Literal::new(v, rng.gen::<bool>()))
            .collect();
        if distinct && !seen.insert(literals.clone()) {
            continue;
        }
        clauses.push(Clause::ksat(literals)?);
    }
    CspInstance::uniform(n, 2, clauses)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::Assignment;

    #[test]
    fn threshold_preset_clause_count() {
        let r = thresholds::unsat_estimate(3).unwrap();
        assert_eq!(r, 4.267);
        assert_eq!(clauses_for_ratio(100, r), 427);
        let inst = random_ksat(100, 427, 3, 1).unwrap();
        assert_eq!(inst.num_clauses(), 427);
    }

    #[test]
    fn no_clauses_is_trivially_satisfied() {
        let inst = random_ksat(3, 0, 3, 5).unwrap();
        assert_eq!(inst.num_clauses(), 0);
        assert!(inst.is_solution(&Assignment(vec![1, 2, 1])).unwrap());
    }

    #[test]
    fn reproducible_and_well_formed() {
        let a = random_ksat(10, 50, 3, 42).unwrap();
        let b = random_ksat(10, 50, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_ksat(10, 50, 3, 43).unwrap());
        for c in a.clauses() {
            let s = c.scope();
            assert_eq!(s.len(), 3);
            assert!(s[0] != s[1] && s[1] != s[2] && s[0] != s[2]);
            assert!(s.iter().all(|&v| v < 10));
        }
    }

    #[test]
    fn k_larger_than_n_is_rejected() {
        assert!(random_ksat(2, 1, 3, 0).is_err());
        assert!(random_ksat(2, 1, 0, 0).is_err());
    }

    #[test]
    fn distinct_mode() {
        let inst = random_ksat_distinct(3, 8, 3, 7).unwrap();
        let mut lits: Vec<_> = inst
            .clauses()
            .iter()
            .map(|c| c.literals().unwrap().to_vec())
            .collect();
        lits.sort_by_key(|l| l.iter().map(|x| x.negated).collect::<Vec<_>>());
        lits.dedup();
        assert_eq!(lits.len(), 8);
        assert!(random_ksat_distinct(3, 9, 3, 7).is_err());
    }
}
