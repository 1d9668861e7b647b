use serde::{Deserialize, Serialize};

use crate::encoders::gf2;
use crate::{Error, Result};

use super::{Value, VarId};

/// A literal of a k-SAT disjunction. Domain value 1 encodes false and 2
/// encodes true.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: VarId,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: VarId, negated: bool) -> Self {
        Literal { var, negated }
    }

    pub fn positive(var: VarId) -> Self {
        Literal::new(var, false)
    }

    pub fn negative(var: VarId) -> Self {
        Literal::new(var, true)
    }

    /// True when the literal holds under the given domain value.
    #[inline]
    pub fn holds(self, value: Value) -> bool {
        (value == 2) != self.negated
    }
}

/// Which vector a GF(2) realizability clause must reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type", content = "flow")]
pub enum Gf2Target {
    /// The coding vector selected by the clause's own edge (scope[0]).
    OwnCoding,
    /// The unit vector of a flow, delivered at that flow's destination.
    Flow(usize),
}

/// Clause predicate families. The tag doubles as the serialized `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClauseKind {
    /// Disjunction of literals; the scope is the set of distinct literal
    /// variables in first-occurrence order.
    KsatDisjunction { literals: Vec<Literal> },
    /// Satisfied iff the two scope variables differ.
    NotEqual,
    /// Violated only when both scope variables select `channel`.
    ChannelConflict { channel: Value },
    /// scope[0] is the centre; satisfied iff every other scope member's
    /// value differs from the centre's by at least `min_separation`.
    ChannelBand { min_separation: u32 },
    /// scope[0] is the edge owning the clause. Upstream coding rows are the
    /// fixed rows plus the coding vectors of scope[1..].
    Gf2Realizability {
        flows: usize,
        fixed_rows: Vec<u64>,
        target: Gf2Target,
    },
    /// Explicit table of satisfying scope tuples, sorted.
    Custom { satisfying: Vec<Vec<Value>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub(crate) scope: Vec<VarId>,
    #[serde(flatten)]
    pub(crate) kind: ClauseKind,
}

/// Coding vector of a network-coding domain value: the binary expansion of
/// `value - 1`, least significant bit = first flow.
#[inline]
pub fn coding_vector(value: Value) -> u64 {
    u64::from(value - 1)
}

impl Clause {
    /// Build a clause from an explicit scope and kind, checking the
    /// kind-specific arity rules.
    pub fn new(scope: Vec<VarId>, kind: ClauseKind) -> Result<Self> {
        if scope.is_empty() {
            return Err(Error::usage("clause scope must be non-empty"));
        }
        let mut sorted = scope.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::usage("clause scope contains a duplicate variable"));
        }
        match &kind {
            ClauseKind::KsatDisjunction { literals } => {
                let derived = literal_scope(literals);
                if derived != scope {
                    return Err(Error::usage(
                        "k-SAT scope must list the literal variables in first-occurrence order",
                    ));
                }
            }
            ClauseKind::NotEqual | ClauseKind::ChannelConflict { .. } => {
                if scope.len() != 2 {
                    return Err(Error::usage("pairwise clause needs a scope of two"));
                }
            }
            ClauseKind::ChannelBand { min_separation } => {
                if *min_separation == 0 {
                    return Err(Error::usage("band separation must be at least 1"));
                }
            }
            ClauseKind::Gf2Realizability {
                flows,
                fixed_rows,
                target,
            } => {
                if *flows == 0 || *flows > 63 {
                    return Err(Error::usage("flow count must be in 1..=63"));
                }
                let mask = !((1u64 << flows) - 1);
                if fixed_rows.iter().any(|r| r & mask != 0) {
                    return Err(Error::usage("fixed coding row wider than the flow count"));
                }
                if let Gf2Target::Flow(p) = target {
                    if p >= flows {
                        return Err(Error::usage("target flow out of range"));
                    }
                }
            }
            ClauseKind::Custom { satisfying } => {
                if satisfying.iter().any(|t| t.len() != scope.len()) {
                    return Err(Error::usage("custom tuple length differs from scope"));
                }
            }
        }
        let kind = match kind {
            ClauseKind::Custom { mut satisfying } => {
                satisfying.sort();
                satisfying.dedup();
                ClauseKind::Custom { satisfying }
            }
            other => other,
        };
        Ok(Clause { scope, kind })
    }

    pub fn ksat(literals: Vec<Literal>) -> Result<Self> {
        if literals.is_empty() {
            return Err(Error::usage("empty disjunction"));
        }
        Clause::new(
            literal_scope(&literals),
            ClauseKind::KsatDisjunction { literals },
        )
    }

    pub fn not_equal(i: VarId, j: VarId) -> Result<Self> {
        Clause::new(vec![i, j], ClauseKind::NotEqual)
    }

    pub fn channel_conflict(i: VarId, j: VarId, channel: Value) -> Result<Self> {
        Clause::new(vec![i, j], ClauseKind::ChannelConflict { channel })
    }

    pub fn channel_band(centre: VarId, others: &[VarId], min_separation: u32) -> Result<Self> {
        let mut scope = Vec::with_capacity(others.len() + 1);
        scope.push(centre);
        scope.extend_from_slice(others);
        Clause::new(scope, ClauseKind::ChannelBand { min_separation })
    }

    /// Custom clause given as the set of satisfying scope tuples.
    pub fn custom(scope: Vec<VarId>, satisfying: Vec<Vec<Value>>) -> Result<Self> {
        Clause::new(scope, ClauseKind::Custom { satisfying })
    }

    /// Custom clause tabulated from a predicate over the scope's domain
    /// product. `domains[k]` is the domain size of `scope[k]`.
    pub fn tabulate(
        scope: Vec<VarId>,
        domains: &[u32],
        predicate: impl Fn(&[Value]) -> bool,
    ) -> Result<Self> {
        if domains.len() != scope.len() {
            return Err(Error::usage("domain list length differs from scope"));
        }
        let mut satisfying = Vec::new();
        for_each_tuple(domains, |tuple| {
            if predicate(tuple) {
                satisfying.push(tuple.to_vec());
            }
        });
        Clause::custom(scope, satisfying)
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn kind(&self) -> &ClauseKind {
        &self.kind
    }

    /// Short tag for the predicate family.
    pub fn kind_tag(&self) -> &'static str {
        match self.kind {
            ClauseKind::KsatDisjunction { .. } => "ksat-disjunction",
            ClauseKind::NotEqual => "not-equal",
            ClauseKind::ChannelConflict { .. } => "channel-conflict",
            ClauseKind::ChannelBand { .. } => "channel-band",
            ClauseKind::Gf2Realizability { .. } => "gf2-realizability",
            ClauseKind::Custom { .. } => "custom",
        }
    }

    pub fn literals(&self) -> Option<&[Literal]> {
        match &self.kind {
            ClauseKind::KsatDisjunction { literals } => Some(literals),
            _ => None,
        }
    }

    /// Evaluate the predicate on a full assignment vector. The caller is
    /// responsible for the vector covering every scope variable.
    #[inline]
    pub fn evaluate(&self, x: &[Value]) -> bool {
        match &self.kind {
            ClauseKind::KsatDisjunction { literals } => literals.iter().any(|l| l.holds(x[l.var])),
            ClauseKind::NotEqual => x[self.scope[0]] != x[self.scope[1]],
            ClauseKind::ChannelConflict { channel } => {
                !(x[self.scope[0]] == *channel && x[self.scope[1]] == *channel)
            }
            ClauseKind::ChannelBand { min_separation } => {
                let centre = x[self.scope[0]];
                self.scope[1..]
                    .iter()
                    .all(|&j| centre.abs_diff(x[j]) >= *min_separation)
            }
            ClauseKind::Gf2Realizability {
                fixed_rows, target, ..
            } => {
                let goal = match target {
                    Gf2Target::OwnCoding => coding_vector(x[self.scope[0]]),
                    Gf2Target::Flow(p) => 1u64 << p,
                };
                let mut rows = fixed_rows.clone();
                rows.extend(self.scope[1..].iter().map(|&j| coding_vector(x[j])));
                gf2::in_span(&rows, goal)
            }
            ClauseKind::Custom { satisfying } => {
                let tuple: Vec<Value> = self.scope.iter().map(|&v| x[v]).collect();
                satisfying.binary_search(&tuple).is_ok()
            }
        }
    }

    /// Evaluate on a tuple of scope values (same order as `scope()`).
    pub fn evaluate_tuple(&self, tuple: &[Value], scratch: &mut Vec<Value>) -> bool {
        let width = self.scope.iter().copied().max().map_or(0, |m| m + 1);
        scratch.clear();
        scratch.resize(width, 1);
        for (&v, &val) in self.scope.iter().zip(tuple) {
            scratch[v] = val;
        }
        self.evaluate(scratch)
    }

    pub(crate) fn check_domains(&self, domains: &[u32]) -> Result<()> {
        if let Some(&v) = self.scope.iter().find(|&&v| v >= domains.len()) {
            return Err(Error::usage(format!(
                "clause references variable {v} out of range"
            )));
        }
        match &self.kind {
            ClauseKind::KsatDisjunction { .. } => {
                if self.scope.iter().any(|&v| domains[v] != 2) {
                    return Err(Error::usage("k-SAT clause over a non-binary variable"));
                }
            }
            ClauseKind::Gf2Realizability { flows, .. } => {
                let d = 1u64 << flows;
                if self.scope.iter().any(|&v| u64::from(domains[v]) != d) {
                    return Err(Error::usage("GF(2) clause variable domain is not 2^flows"));
                }
            }
            ClauseKind::Custom { satisfying } => {
                for t in satisfying {
                    for (&v, &val) in self.scope.iter().zip(t) {
                        if val == 0 || val > domains[v] {
                            return Err(Error::usage("custom tuple value outside the domain"));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn literal_scope(literals: &[Literal]) -> Vec<VarId> {
    let mut scope: Vec<VarId> = Vec::with_capacity(literals.len());
    for l in literals {
        if !scope.contains(&l.var) {
            scope.push(l.var);
        }
    }
    scope
}

/// Visit every tuple of the domain product `{1..d_0} x ... x {1..d_k}` in
/// lexicographic order.
pub(crate) fn for_each_tuple(domains: &[u32], mut f: impl FnMut(&[Value])) {
    if domains.contains(&0) {
        return;
    }
    let mut tuple: Vec<Value> = vec![1; domains.len()];
    loop {
        f(&tuple);
        let mut k = domains.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if tuple[k] < domains[k] {
                tuple[k] += 1;
                break;
            }
            tuple[k] = 1;
        }
    }
}
