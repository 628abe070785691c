use serde::{Deserialize, Serialize};

use super::median::condorcet_winner_weighted;
use super::{GraphError, NodeId, NodeSet, OpinionGraph};

/// Multiplicity of participant opinions per node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpinionProfile {
    counts: Vec<u64>,
}

impl OpinionProfile {
    pub fn new(g: &OpinionGraph, counts: Vec<u64>) -> Result<Self, GraphError> {
        if counts.len() != g.node_count() {
            return Err(GraphError::ProfileSize { expected: g.node_count(), got: counts.len() });
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(GraphError::EmptyProfile);
        }
        Ok(OpinionProfile { counts })
    }

    /// One participant per listed opinion.
    pub fn from_opinions(g: &OpinionGraph, opinions: &[NodeId]) -> Result<Self, GraphError> {
        let mut counts = vec![0; g.node_count()];
        for &x in opinions {
            g.check_node(x)?;
            counts[x] += 1;
        }
        Self::new(g, counts)
    }

    /// `k` participants at every node.
    pub fn uniform(g: &OpinionGraph, k: u64) -> Result<Self, GraphError> {
        Self::new(g, vec![k; g.node_count()])
    }

    /// Total participant count `n`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count_at(&self, x: NodeId) -> u64 {
        self.counts[x]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn node_count(&self) -> usize {
        self.counts.len()
    }

    /// Occupied nodes with their multiplicities, in node order.
    pub fn support(&self) -> impl Iterator<Item = (NodeId, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(v, &c)| (v, c))
    }

    /// Every participant's opinion, in node order.
    pub fn opinions(&self) -> Vec<NodeId> {
        self.support().flat_map(|(v, c)| std::iter::repeat_n(v, c as usize)).collect()
    }

    /// Condorcet winner over the whole profile, if one exists.
    pub fn condorcet_winner(&self, g: &OpinionGraph) -> Option<NodeId> {
        let voters: Vec<_> = self.support().collect();
        condorcet_winner_weighted(g, &voters)
    }
}

/// `D(x)`: the multiplicity-weighted sum of distances from `x` to every
/// participant opinion.
pub fn total_distance(g: &OpinionGraph, p: &OpinionProfile, x: NodeId) -> u64 {
    let dx = g.distances_from(x);
    p.support().map(|(v, c)| u64::from(dx[v]) * c).sum()
}

/// All minimizers of `D` together with the minimum cost.
pub fn generalized_median(g: &OpinionGraph, p: &OpinionProfile) -> (NodeSet, u64) {
    let costs: Vec<u64> = g.nodes().map(|x| total_distance(g, p, x)).collect();
    let best = costs.iter().copied().min().unwrap_or(0);
    let set = NodeSet::from_nodes(g.node_count(), g.nodes().filter(|&x| costs[x] == best));
    (set, best)
}
