use std::fmt;

use fixedbitset::FixedBitSet;

use super::NodeId;

/// A set of nodes of one graph, stored as a bitset over `0..node_count`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    bits: FixedBitSet,
}

impl NodeSet {
    pub fn empty(node_count: usize) -> Self {
        NodeSet { bits: FixedBitSet::with_capacity(node_count) }
    }

    pub fn full(node_count: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(node_count);
        bits.insert_range(..);
        NodeSet { bits }
    }

    pub fn from_nodes(node_count: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut set = Self::empty(node_count);
        for v in nodes {
            set.insert(v);
        }
        set
    }

    /// Size of the universe this set lives in.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: NodeId) {
        self.bits.set(v, false);
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bits.ones()
    }

    /// Lowest node id in the set.
    pub fn first(&self) -> Option<NodeId> {
        self.bits.ones().next()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
