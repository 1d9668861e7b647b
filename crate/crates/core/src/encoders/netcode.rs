//! Inter-session network coding over GF(2).
//!
//! Every edge that does not leave a source carries a variable whose value
//! `v` selects the coding vector `v - 1` (bit `p` = flow `p`). Interior edges
//! must be able to form their coding vector as an XOR of the packets arriving
//! at their tail vertex; edges into a destination must be able to form that
//! destination's flow. The value of a destination edge itself is never read.

use serde::{Deserialize, Serialize};

use crate::csp::{Clause, ClauseKind, CspInstance, Gf2Target, VarId};
use crate::{Error, Result};

/// Default cap on the number of flows; the domain has `2^flows` values.
pub const DEFAULT_MAX_FLOWS: usize = 16;

/// Directed acyclic multigraph with unit-rate flows.
///
/// Source vertices have no incoming edges and exactly one outgoing edge per
/// flow they originate; the `k`-th outgoing edge (in edge order) carries the
/// `k`-th such flow (in flow order). Destinations mirror this with incoming
/// edges and no outgoing edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingNetwork {
    pub vertices: usize,
    /// `(tail, head)` per edge.
    pub edges: Vec<(usize, usize)>,
    /// `(source, destination)` per flow.
    pub flows: Vec<(usize, usize)>,
}

/// Role of an edge in a validated network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    /// Leaves the source of the given flow; carries that flow unmodified.
    Source(usize),
    /// Enters the destination of the given flow.
    Destination(usize),
    Interior,
}

impl CodingNetwork {
    /// Two sources, two sinks, one shared bottleneck edge that must carry the
    /// XOR of both flows. Flow 0 runs from vertex 0 to 6, flow 1 from 1 to 7.
    pub fn butterfly() -> Self {
        // 0 s1, 1 s2, 2 u1, 3 u2, 4 c, 5 w, 6 d1, 7 d2, 8 r1, 9 r2
        CodingNetwork {
            vertices: 10,
            edges: vec![
                (0, 2), // s1 -> u1
                (1, 3), // s2 -> u2
                (2, 4), // u1 -> c
                (3, 4), // u2 -> c
                (4, 5), // c -> w (bottleneck)
                (5, 8), // w -> r1
                (5, 9), // w -> r2
                (3, 8), // u2 -> r1 (side link)
                (2, 9), // u1 -> r2 (side link)
                (8, 6), // r1 -> d1
                (9, 7), // r2 -> d2
            ],
            flows: vec![(0, 6), (1, 7)],
        }
    }

    /// Check the structural rules and classify every edge.
    pub fn edge_roles(&self, max_flows: usize) -> Result<Vec<EdgeRole>> {
        if self.flows.is_empty() {
            return Err(Error::usage("network has no flows"));
        }
        if self.flows.len() > max_flows || self.flows.len() > 63 {
            return Err(Error::usage(format!(
                "{} flows exceed the cap of {max_flows}",
                self.flows.len()
            )));
        }
        for &(u, v) in &self.edges {
            if u >= self.vertices || v >= self.vertices {
                return Err(Error::usage(format!(
                    "edge ({u}, {v}) references a missing vertex"
                )));
            }
            if u == v {
                return Err(Error::usage(format!("self-loop on vertex {u}")));
            }
        }
        let is_source = |v: usize| self.flows.iter().any(|f| f.0 == v);
        let is_dest = |v: usize| self.flows.iter().any(|f| f.1 == v);
        for &(s, d) in &self.flows {
            if s >= self.vertices || d >= self.vertices {
                return Err(Error::usage("flow endpoint references a missing vertex"));
            }
            if is_dest(s) || is_source(d) {
                return Err(Error::usage(
                    "a vertex cannot be both a source and a destination",
                ));
            }
        }
        self.topological_order()?;

        let mut roles = vec![EdgeRole::Interior; self.edges.len()];
        for v in 0..self.vertices {
            let out: Vec<usize> = (0..self.edges.len())
                .filter(|&e| self.edges[e].0 == v)
                .collect();
            let inc: Vec<usize> = (0..self.edges.len())
                .filter(|&e| self.edges[e].1 == v)
                .collect();
            let sourced: Vec<usize> = (0..self.flows.len())
                .filter(|&p| self.flows[p].0 == v)
                .collect();
            let sunk: Vec<usize> = (0..self.flows.len())
                .filter(|&p| self.flows[p].1 == v)
                .collect();
            if !sourced.is_empty() {
                if !inc.is_empty() || out.len() != sourced.len() {
                    return Err(Error::usage(format!(
                        "source vertex {v} needs no incoming and one outgoing edge per flow"
                    )));
                }
                for (e, p) in out.into_iter().zip(sourced) {
                    roles[e] = EdgeRole::Source(p);
                }
            } else if !sunk.is_empty() {
                if !out.is_empty() || inc.len() != sunk.len() {
                    return Err(Error::usage(format!(
                        "destination vertex {v} needs no outgoing and one incoming edge per flow"
                    )));
                }
                for (e, p) in inc.into_iter().zip(sunk) {
                    if !matches!(roles[e], EdgeRole::Source(_)) {
                        roles[e] = EdgeRole::Destination(p);
                    }
                }
            }
        }
        Ok(roles)
    }

    /// Vertices in a topological order, or an error on a cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indegree = vec![0usize; self.vertices];
        for &(_, v) in &self.edges {
            indegree[v] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertices).filter(|&v| indegree[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(self.vertices);
        while let Some(u) = ready.pop() {
            order.push(u);
            for &(a, b) in &self.edges {
                if a == u {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        if order.len() != self.vertices {
            return Err(Error::usage("network contains a cycle"));
        }
        Ok(order)
    }
}

/// A network-coding CSP plus the edge/variable correspondence.
#[derive(Clone, Debug)]
pub struct NetworkCodingInstance {
    pub instance: CspInstance,
    pub roles: Vec<EdgeRole>,
    /// Edge carried by each variable.
    pub edge_of_var: Vec<usize>,
    /// Variable of each edge; `None` for source edges.
    pub var_of_edge: Vec<Option<VarId>>,
    pub flows: usize,
}

/// Encode with the default flow cap.
pub fn network_coding_instance(net: &CodingNetwork) -> Result<NetworkCodingInstance> {
    network_coding_instance_capped(net, DEFAULT_MAX_FLOWS)
}

pub fn network_coding_instance_capped(
    net: &CodingNetwork,
    max_flows: usize,
) -> Result<NetworkCodingInstance> {
    let roles = net.edge_roles(max_flows)?;
    let flows = net.flows.len();
    let mut var_of_edge = vec![None; net.edges.len()];
    let mut edge_of_var = Vec::new();
    for (e, role) in roles.iter().enumerate() {
        if !matches!(role, EdgeRole::Source(_)) {
            var_of_edge[e] = Some(edge_of_var.len());
            edge_of_var.push(e);
        }
    }
    if edge_of_var.is_empty() {
        return Err(Error::usage("network has no edges beyond the source links"));
    }

    let mut clauses = Vec::with_capacity(edge_of_var.len());
    for &e in &edge_of_var {
        let tail = net.edges[e].0;
        let mut fixed_rows = Vec::new();
        let mut scope = vec![var_of_edge[e].expect("variable edge")];
        for (j, &(_, head)) in net.edges.iter().enumerate() {
            if head != tail {
                continue;
            }
            match roles[j] {
                EdgeRole::Source(p) => fixed_rows.push(1u64 << p),
                _ => scope.push(var_of_edge[j].expect("variable edge")),
            }
        }
        let target = match roles[e] {
            EdgeRole::Destination(p) => Gf2Target::Flow(p),
            _ => Gf2Target::OwnCoding,
        };
        clauses.push(Clause::new(
            scope,
            ClauseKind::Gf2Realizability {
                flows,
                fixed_rows,
                target,
            },
        )?);
    }
    let domain = 1u32 << flows;
    let instance = CspInstance::uniform(edge_of_var.len(), domain, clauses)?;
    Ok(NetworkCodingInstance {
        instance,
        roles,
        edge_of_var,
        var_of_edge,
        flows,
    })
}
