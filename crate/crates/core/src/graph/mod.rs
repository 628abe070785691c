//! Metric-graph machinery for opinion spaces.
//!
//! An [`OpinionGraph`] is an immutable, connected, simple, undirected graph
//! with a cached all-pairs hop-distance table. Everything else in this module
//! (intervals, convex hulls, gates, win sets, Θ-classes, medians, Condorcet
//! winners, median-graph recognition) is driven by that table.

mod convex;
mod cuts;
mod median;
mod nodeset;
mod profile;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub use convex::{convex_hull, gate, interval, is_convex};
pub use cuts::{theta_decomposition, win_sets, EdgeCut, ThetaDecomposition};
pub use median::{
    canonical_median, condorcet_winner, is_median_graph, is_median_graph_structural, median_of_three, median_unique,
};
pub use nodeset::NodeSet;
pub use profile::{generalized_median, total_distance, OpinionProfile};

/// Dense node id in `0..node_count`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("graph is disconnected (node {0} unreachable from node 0)")]
    DisconnectedGraph(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("node set is empty")]
    EmptySet,
    #[error("node set is not convex")]
    NotConvex,
    #[error("node {0} has no gate in the set")]
    NoGate(NodeId),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(NodeId, NodeId),
    #[error("graph is not a median graph")]
    NotMedianGraph,
    #[error("profile has {got} entries, graph has {expected} nodes")]
    ProfileSize { expected: usize, got: usize },
    #[error("profile has no participants")]
    EmptyProfile,
}

#[derive(Clone)]
pub struct OpinionGraph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
    dist: Vec<u32>,
    median: OnceLock<bool>,
}

impl OpinionGraph {
    /// Builds a graph from an undirected edge list and computes all-pairs
    /// distances by BFS from every node.
    pub fn new(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); node_count];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut dist = vec![u32::MAX; node_count * node_count];
        let mut queue = VecDeque::with_capacity(node_count);
        for source in 0..node_count {
            let row = &mut dist[source * node_count..(source + 1) * node_count];
            row[source] = 0;
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &w in &adjacency[u] {
                    if row[w] == u32::MAX {
                        row[w] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(missing) = row.iter().position(|&d| d == u32::MAX) {
                return Err(GraphError::DisconnectedGraph(missing));
            }
        }

        Ok(OpinionGraph { adjacency, edge_count: seen.len(), dist, median: OnceLock::new() })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn distance(&self, x: NodeId, y: NodeId) -> u32 {
        self.dist[x * self.node_count() + y]
    }

    /// Distances from `x` to every node.
    pub fn distances_from(&self, x: NodeId) -> &[u32] {
        let n = self.node_count();
        &self.dist[x * n..(x + 1) * n]
    }

    pub fn neighbors(&self, x: NodeId) -> &[NodeId] {
        &self.adjacency[x]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && v < self.node_count() && self.distance(u, v) == 1
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn check_node(&self, node: NodeId) -> Result<(), GraphError> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node, node_count: self.node_count() })
        }
    }

    /// `w` lies on some shortest path between `x` and `y`.
    #[inline]
    pub fn between(&self, x: NodeId, w: NodeId, y: NodeId) -> bool {
        self.distance(x, w) + self.distance(w, y) == self.distance(x, y)
    }

    /// Median-graph status, computed once with the structural recognizer and
    /// cached.
    pub fn is_median(&self) -> bool {
        *self.median.get_or_init(|| is_median_graph_structural(self))
    }

    pub fn require_median(&self) -> Result<(), GraphError> {
        if self.is_median() {
            Ok(())
        } else {
            Err(GraphError::NotMedianGraph)
        }
    }
}

impl fmt::Debug for OpinionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpinionGraph")
            .field("node_count", &self.node_count())
            .field("edge_count", &self.edge_count)
            .finish()
    }
}

impl PartialEq for OpinionGraph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for OpinionGraph {}

/// Convenience wrapper over [`OpinionGraph::new`].
pub fn build_graph(edges: &[(NodeId, NodeId)], node_count: usize) -> Result<OpinionGraph, GraphError> {
    OpinionGraph::new(node_count, edges)
}
