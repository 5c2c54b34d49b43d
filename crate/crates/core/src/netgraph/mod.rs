//! Directed radio topologies.
//!
//! An edge `u -> v` means `v` is inside `u`'s transmission range, so `v`
//! hears `u` when `u` transmits. Receivers care about their in-neighbours
//! and the channel only ever walks out-edges of transmitters.

mod build;
mod io;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, NodeId, Result};

pub use build::{gen_gnp_directed, gen_lowerbound_network, gen_star_dumbbell, LowerBoundLayout};
pub use io::{read_graph, write_graph, GRAPH_HEADER};

/// Construction role of a node in one of the adversarial networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Source,
    /// Center `c_i` of star `S_i`.
    Center(u32),
    /// Leaf of star `S_i`.
    Leaf(u32),
    /// Path node `v_j`.
    Path(u32),
    /// Intermediate `u_i` of the dumbbell.
    Intermediate(u32),
    /// Destination `d_i` of the dumbbell.
    Destination(u32),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Source => write!(f, "source"),
            Role::Center(i) => write!(f, "center:{i}"),
            Role::Leaf(i) => write!(f, "leaf:{i}"),
            Role::Path(j) => write!(f, "path:{j}"),
            Role::Intermediate(i) => write!(f, "intermediate:{i}"),
            Role::Destination(i) => write!(f, "destination:{i}"),
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "source" {
            return Ok(Role::Source);
        }
        let (kind, idx) = s
            .split_once(':')
            .ok_or_else(|| format!("unknown role {s:?}"))?;
        let idx: u32 = idx.parse().map_err(|_| format!("bad role index in {s:?}"))?;
        match kind {
            "center" => Ok(Role::Center(idx)),
            "leaf" => Ok(Role::Leaf(idx)),
            "path" => Ok(Role::Path(idx)),
            "intermediate" => Ok(Role::Intermediate(idx)),
            "destination" => Ok(Role::Destination(idx)),
            _ => Err(format!("unknown role {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    out_edges: Vec<Vec<NodeId>>,
    labels: BTreeMap<NodeId, Role>,
}

impl DirectedGraph {
    /// Graph on `n` nodes without edges.
    pub fn empty(n: usize) -> Self {
        Self {
            out_edges: vec![Vec::new(); n],
            labels: BTreeMap::new(),
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, dangling ids
    /// and repeated edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn from_adjacency(out_edges: Vec<Vec<NodeId>>) -> Self {
        Self {
            out_edges,
            labels: BTreeMap::new(),
        }
    }

    fn try_add_edge(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        let n = self.n();
        for node in [u, v] {
            if node as usize >= n {
                return Err(Error::NodeOutOfRange { node: node as u64, n });
            }
        }
        if u == v {
            return Err(Error::InvalidConfig(format!("self-loop at node {u}")));
        }
        let outs = &mut self.out_edges[u as usize];
        if outs.contains(&v) {
            return Err(Error::InvalidConfig(format!("duplicate edge {u} -> {v}")));
        }
        outs.push(v);
        Ok(())
    }

    pub(crate) fn push_edge(&mut self, u: NodeId, v: NodeId) {
        debug_assert!(u != v && !self.out_edges[u as usize].contains(&v));
        self.out_edges[u as usize].push(v);
    }

    pub fn n(&self) -> usize {
        self.out_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    /// Receivers of `u`'s transmissions.
    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.out_edges[u as usize]
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u as NodeId, v)))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_edges
            .get(u as usize)
            .is_some_and(|outs| outs.contains(&v))
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for (_, v) in self.edges() {
            deg[v as usize] += 1;
        }
        deg
    }

    /// In-neighbour lists, computed on demand.
    pub fn in_neighbors(&self) -> Vec<Vec<NodeId>> {
        let mut ins = vec![Vec::new(); self.n()];
        for (u, v) in self.edges() {
            ins[v as usize].push(u);
        }
        ins
    }

    pub fn labels(&self) -> &BTreeMap<NodeId, Role> {
        &self.labels
    }

    pub fn label(&self, node: NodeId) -> Option<Role> {
        self.labels.get(&node).copied()
    }

    pub fn set_label(&mut self, node: NodeId, role: Role) -> Result<()> {
        if node as usize >= self.n() {
            return Err(Error::NodeOutOfRange {
                node: node as u64,
                n: self.n(),
            });
        }
        self.labels.insert(node, role);
        Ok(())
    }

    /// Nodes carrying a label for which `pred` holds, in id order.
    pub fn nodes_with(&self, pred: impl Fn(Role) -> bool) -> Vec<NodeId> {
        self.labels
            .iter()
            .filter(|(_, r)| pred(**r))
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if (node as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: node as u64,
                n: self.n(),
            })
        }
    }
}

/// Hop distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distances(g: &DirectedGraph, source: NodeId) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[source as usize] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].expect("queued nodes have a distance");
        for &v in g.out_neighbors(u) {
            if dist[v as usize].is_none() {
                dist[v as usize] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Longest shortest path from `source`, or `None` if some node cannot be
/// reached.
///
/// # Panics
///
/// If `source` is not a node of `g`.
pub fn bfs_eccentricity(g: &DirectedGraph, source: NodeId) -> Option<u32> {
    assert!((source as usize) < g.n(), "source {source} out of range");
    bfs_distances(g, source)
        .into_iter()
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    /// Mean out-degree, the `d = np` of a random graph.
    pub avg_degree: f64,
    pub source: NodeId,
    pub source_eccentricity: Option<u32>,
    /// Largest finite BFS distance seen from the source and a few evenly
    /// spaced probe nodes. A lower bound on the true diameter.
    pub diameter_estimate: u32,
}

impl GraphSummary {
    const PROBES: usize = 8;

    pub fn of(g: &DirectedGraph, source: NodeId) -> Result<Self> {
        g.check_node(source)?;
        let n = g.n();
        let edges = g.edge_count();
        let source_eccentricity = bfs_eccentricity(g, source);
        let step = (n / Self::PROBES).max(1);
        let diameter_estimate = std::iter::once(source)
            .chain((0..n).step_by(step).map(|v| v as NodeId))
            .map(|s| bfs_distances(g, s).into_iter().flatten().max().unwrap_or(0))
            .max()
            .unwrap_or(0);
        Ok(Self {
            n,
            edges,
            avg_degree: edges as f64 / n as f64,
            source,
            source_eccentricity,
            diameter_estimate,
        })
    }
}

impl fmt::Display for GraphSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes={} edges={} avg_degree={:.3} source={} eccentricity={} diameter_estimate={}",
            self.n,
            self.edges,
            self.avg_degree,
            self.source,
            self.source_eccentricity
                .map_or_else(|| "unreachable".to_string(), |e| e.to_string()),
            self.diameter_estimate
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(k: usize) -> DirectedGraph {
        DirectedGraph::from_edges(k, (0..k).map(|i| (i as NodeId, ((i + 1) % k) as NodeId)))
            .unwrap()
    }

    #[test]
    fn path_eccentricity() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(bfs_eccentricity(&g, 0), Some(2));
        assert_eq!(bfs_eccentricity(&g, 1), None);
    }

    #[test]
    fn edgeless_is_unreachable() {
        let g = DirectedGraph::empty(2);
        assert_eq!(bfs_eccentricity(&g, 0), None);
        assert_eq!(bfs_eccentricity(&DirectedGraph::empty(1), 0), Some(0));
    }

    #[test]
    fn cycle_eccentricity_is_k_minus_one() {
        for k in 2..20 {
            let g = cycle(k);
            for s in 0..k {
                assert_eq!(bfs_eccentricity(&g, s as NodeId), Some(k as u32 - 1));
            }
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            DirectedGraph::from_edges(2, [(0, 0)]),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            DirectedGraph::from_edges(2, [(0, 2)]),
            Err(Error::NodeOutOfRange { node: 2, n: 2 })
        ));
        assert!(DirectedGraph::from_edges(2, [(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn role_text_round_trips() {
        for r in [
            Role::Source,
            Role::Center(3),
            Role::Leaf(1),
            Role::Path(0),
            Role::Intermediate(7),
            Role::Destination(2),
        ] {
            assert_eq!(r.to_string().parse::<Role>().unwrap(), r);
        }
        assert!("hub:1".parse::<Role>().is_err());
        assert!("leaf".parse::<Role>().is_err());
    }

    #[test]
    fn summary_bounds() {
        let g = cycle(10);
        let s = GraphSummary::of(&g, 0).unwrap();
        assert_eq!(s.edges, 10);
        assert_eq!(s.avg_degree, 1.0);
        assert_eq!(s.source_eccentricity, Some(9));
        assert_eq!(s.diameter_estimate, 9);
        assert!(GraphSummary::of(&g, 10).is_err());
    }
}
