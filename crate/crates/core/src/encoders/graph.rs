use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::csp::{Clause, CspInstance};
use crate::{Error, Result};

/// Undirected interference graph without self-loops or repeated edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterferenceGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl InterferenceGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::usage(format!(
                    "edge ({u}, {v}) references a missing vertex"
                )));
            }
            if u == v {
                return Err(Error::usage(format!("self-loop on vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::usage(format!("edge ({u}, {v}) listed twice")));
            }
        }
        Ok(InterferenceGraph { vertices, edges })
    }

    pub fn complete(vertices: usize) -> Self {
        let edges = (0..vertices)
            .flat_map(|i| (i + 1..vertices).map(move |j| (i, j)))
            .collect();
        InterferenceGraph { vertices, edges }
    }

    /// Edge list with one `u v` pair of 1-based vertex ids per line; `#` and
    /// `c` lines are comments. The vertex count defaults to the largest id.
    pub fn parse_edge_list(text: &str, vertices: Option<usize>) -> Result<Self> {
        let rows = parse_rows(text, 2)?;
        let edges: Vec<(usize, usize)> = rows.iter().map(|r| (r[0] - 1, r[1] - 1)).collect();
        let n =
            vertices.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        InterferenceGraph::new(n, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Parse lines of `width` positive integers, skipping comments and blanks.
pub(crate) fn parse_rows(text: &str, width: usize) -> Result<Vec<Vec<usize>>> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
            continue;
        }
        let fields = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().ok().filter(|&x| x >= 1))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| Error::parse(idx + 1, "expected positive integers"))?;
        if fields.len() != width {
            return Err(Error::parse(idx + 1, format!("expected {width} fields")));
        }
        rows.push(fields);
    }
    Ok(rows)
}

/// Graph colouring with `d` colours: one not-equal clause per edge, each
/// vertex participating in the clauses of its incident edges.
pub fn coloring_instance(graph: &InterferenceGraph, d: u32) -> Result<CspInstance> {
    if graph.vertices == 0 {
        return Err(Error::usage("graph has no vertices"));
    }
    let clauses = graph
        .edges
        .iter()
        .map(|&(u, v)| Clause::not_equal(u, v))
        .collect::<Result<Vec<_>>>()?;
    CspInstance::uniform(graph.vertices, d, clauses)
}

/// Channel assignment where interference depends on the channel:
/// `graphs[c - 1]` holds the conflicts on channel `c`, so the domain size is
/// `graphs.len()`. The clause for edge `(i, j)` of channel `c` fails only when
/// both endpoints sit on `c`.
pub fn channel_dependent_instance(graphs: &[InterferenceGraph]) -> Result<CspInstance> {
    let Some(first) = graphs.first() else {
        return Err(Error::usage("need one graph per channel"));
    };
    if graphs.iter().any(|g| g.vertices != first.vertices) {
        return Err(Error::usage(
            "per-channel graphs disagree on the vertex count",
        ));
    }
    if first.vertices == 0 {
        return Err(Error::usage("graph has no vertices"));
    }
    let mut clauses = Vec::new();
    for (c, g) in graphs.iter().enumerate() {
        for &(u, v) in &g.edges {
            clauses.push(Clause::channel_conflict(u, v, c as u32 + 1)?);
        }
    }
    CspInstance::uniform(first.vertices, graphs.len() as u32, clauses)
}

/// Edge list with `u v c` rows (1-based vertex ids and channel) split into
/// one graph per channel `1..=channels`.
pub fn parse_channel_edge_list(
    text: &str,
    vertices: Option<usize>,
    channels: usize,
) -> Result<Vec<InterferenceGraph>> {
    let rows = parse_rows(text, 3)?;
    let n = vertices.unwrap_or_else(|| rows.iter().map(|r| r[0].max(r[1])).max().unwrap_or(0));
    let mut per_channel = vec![Vec::new(); channels];
    for r in &rows {
        if r[2] > channels {
            return Err(Error::usage(format!("channel {} exceeds {channels}", r[2])));
        }
        per_channel[r[2] - 1].push((r[0] - 1, r[1] - 1));
    }
    per_channel
        .into_iter()
        .map(|edges| InterferenceGraph::new(n, edges))
        .collect()
}

/// Collision-free scheduling of `n` transmitters over `slots` time slots:
/// colouring of the complete graph.
pub fn scheduling_instance(n: usize, slots: u32) -> Result<CspInstance> {
    if n == 0 || slots == 0 {
        return Err(Error::usage("need at least one transmitter and one slot"));
    }
    coloring_instance(&InterferenceGraph::complete(n), slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{Assignment, DEFAULT_ENUMERATION_CAP};

    #[test]
    fn triangle_coloring() {
        let g = InterferenceGraph::complete(3);
        let inst = coloring_instance(&g, 3).unwrap();
        assert!(inst.is_solution(&Assignment(vec![1, 2, 3])).unwrap());
        assert!(!inst.is_solution(&Assignment(vec![1, 1, 2])).unwrap());
        assert_eq!(inst.participation(0), &[0, 1]);
    }

    #[test]
    fn edgeless_graph() {
        let g = InterferenceGraph::new(4, vec![]).unwrap();
        assert_eq!(coloring_instance(&g, 2).unwrap().num_clauses(), 0);
    }

    #[test]
    fn graph_validation() {
        assert!(InterferenceGraph::new(2, vec![(0, 0)]).is_err());
        assert!(InterferenceGraph::new(2, vec![(0, 2)]).is_err());
        assert!(InterferenceGraph::new(2, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn channel_dependent_example() {
        let g1 = InterferenceGraph::new(2, vec![(0, 1)]).unwrap();
        let g2 = InterferenceGraph::new(2, vec![]).unwrap();
        let inst = channel_dependent_instance(&[g1, g2]).unwrap();
        assert_eq!(inst.max_domain(), 2);
        assert!(!inst.is_solution(&Assignment(vec![1, 1])).unwrap());
        assert!(inst.is_solution(&Assignment(vec![2, 2])).unwrap());
        let r = inst
            .validate_participation(DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert!(r.is_exact());
    }

    #[test]
    fn channel_dependent_mismatch() {
        let g1 = InterferenceGraph::new(2, vec![]).unwrap();
        let g2 = InterferenceGraph::new(3, vec![]).unwrap();
        assert!(channel_dependent_instance(&[g1, g2]).is_err());
        assert!(channel_dependent_instance(&[]).is_err());
    }

    #[test]
    fn channel_dependent_all_empty() {
        let gs = vec![InterferenceGraph::new(3, vec![]).unwrap(); 3];
        let inst = channel_dependent_instance(&gs).unwrap();
        assert!(inst.is_solution(&Assignment(vec![2, 2, 2])).unwrap());
    }

    #[test]
    fn scheduling_clause_count() {
        let inst = scheduling_instance(5, 3).unwrap();
        assert_eq!(inst.num_clauses(), 10);
        assert_eq!(inst.max_domain(), 3);
    }

    #[test]
    fn edge_list_parsing() {
        let g = InterferenceGraph::parse_edge_list("# tri\n1 2\n2 3\n\n1 3\n", None).unwrap();
        assert_eq!(g.vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
        assert!(InterferenceGraph::parse_edge_list("1 0\n", None).is_err());
        let gs = parse_channel_edge_list("1 2 1\n2 3 2\n", None, 2).unwrap();
        assert_eq!(gs[1].edges(), &[(1, 2)]);
        assert!(parse_channel_edge_list("1 2 3\n", None, 2).is_err());
    }
}
