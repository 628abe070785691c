use std::collections::HashSet;

use super::{GraphError, NodeId, NodeSet, OpinionGraph};

/// An edge `(u, v)` together with its win sets: `side_u` holds the nodes
/// strictly closer to `u`, `side_v` those strictly closer to `v`. Nodes
/// equidistant from both endpoints (possible only off median graphs) are in
/// neither side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCut {
    pub edge: (NodeId, NodeId),
    pub side_u: NodeSet,
    pub side_v: NodeSet,
}

impl EdgeCut {
    pub fn is_partition(&self) -> bool {
        self.side_u.is_disjoint(&self.side_v) && self.side_u.len() + self.side_v.len() == self.side_u.universe()
    }

    /// `x` and `y` lie on opposite sides of the cut.
    pub fn separates(&self, x: NodeId, y: NodeId) -> bool {
        (self.side_u.contains(x) && self.side_v.contains(y)) || (self.side_v.contains(x) && self.side_u.contains(y))
    }

    /// Both nodes lie on the same side.
    pub fn same_side(&self, x: NodeId, y: NodeId) -> bool {
        (self.side_u.contains(x) && self.side_u.contains(y)) || (self.side_v.contains(x) && self.side_v.contains(y))
    }

    /// The side containing `x`, if any.
    pub fn side_of(&self, x: NodeId) -> Option<&NodeSet> {
        if self.side_u.contains(x) {
            Some(&self.side_u)
        } else if self.side_v.contains(x) {
            Some(&self.side_v)
        } else {
            None
        }
    }
}

pub fn win_sets(g: &OpinionGraph, edge: (NodeId, NodeId)) -> Result<EdgeCut, GraphError> {
    let (u, v) = edge;
    g.check_node(u)?;
    g.check_node(v)?;
    if !g.has_edge(u, v) {
        return Err(GraphError::NotAnEdge(u, v));
    }
    let from_u = g.distances_from(u);
    let from_v = g.distances_from(v);
    let n = g.node_count();
    Ok(EdgeCut {
        edge,
        side_u: NodeSet::from_nodes(n, g.nodes().filter(|&w| from_u[w] < from_v[w])),
        side_v: NodeSet::from_nodes(n, g.nodes().filter(|&w| from_v[w] < from_u[w])),
    })
}

/// One representative cut per Θ-class of a median graph.
#[derive(Debug, Clone)]
pub struct ThetaDecomposition {
    pub cuts: Vec<EdgeCut>,
}

impl ThetaDecomposition {
    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    /// Number of cuts separating `x` from `y`; equals `d(x, y)` on median graphs.
    pub fn separating_count(&self, x: NodeId, y: NodeId) -> usize {
        self.cuts.iter().filter(|c| c.separates(x, y)).count()
    }
}

/// Groups the edges of a median graph by the partition their win sets
/// induce. Representatives are the lexicographically first edge of each class;
/// classes are keyed by the side containing node 0.
pub fn theta_decomposition(g: &OpinionGraph) -> Result<ThetaDecomposition, GraphError> {
    g.require_median()?;
    let mut seen: HashSet<NodeSet> = HashSet::new();
    let mut cuts = Vec::new();
    for edge in g.edges() {
        let cut = win_sets(g, edge)?;
        if !cut.is_partition() {
            return Err(GraphError::NotMedianGraph);
        }
        let key = if cut.side_u.contains(0) { cut.side_u.clone() } else { cut.side_v.clone() };
        if seen.insert(key) {
            cuts.push(cut);
        }
    }
    Ok(ThetaDecomposition { cuts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn grid(k: usize) -> OpinionGraph {
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let v = k * r + c;
                if c + 1 < k {
                    edges.push((v, v + 1));
                }
                if r + 1 < k {
                    edges.push((v, v + k));
                }
            }
        }
        build_graph(&edges, k * k).unwrap()
    }

    fn hypercube(dim: usize) -> OpinionGraph {
        let n = 1usize << dim;
        let mut edges = Vec::new();
        for v in 0..n {
            for b in 0..dim {
                let w = v ^ (1 << b);
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        build_graph(&edges, n).unwrap()
    }

    #[test]
    fn path_cut() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3)], 4).unwrap();
        let cut = win_sets(&g, (1, 2)).unwrap();
        assert_eq!(cut.side_u.to_vec(), vec![0, 1]);
        assert_eq!(cut.side_v.to_vec(), vec![2, 3]);
        assert!(cut.is_partition());
        assert!(cut.separates(0, 3));
        assert_eq!(win_sets(&g, (0, 2)), Err(GraphError::NotAnEdge(0, 2)));
    }

    #[test]
    fn triangle_cut_leaves_apex_unassigned() {
        let g = build_graph(&[(0, 1), (1, 2), (0, 2)], 3).unwrap();
        let cut = win_sets(&g, (0, 1)).unwrap();
        assert_eq!(cut.side_u.to_vec(), vec![0]);
        assert_eq!(cut.side_v.to_vec(), vec![1]);
        assert!(!cut.is_partition());
        assert_eq!(cut.side_of(2), None);
    }

    #[test]
    fn square_cuts_split_in_half() {
        let g = grid(2);
        for e in g.edges() {
            let cut = win_sets(&g, e).unwrap();
            assert_eq!(cut.side_u.len(), 2);
            assert_eq!(cut.side_v.len(), 2);
        }
    }

    #[test]
    fn theta_class_counts() {
        let p = build_graph(&(1..7).map(|i| (i - 1, i)).collect::<Vec<_>>(), 7).unwrap();
        assert_eq!(theta_decomposition(&p).unwrap().len(), 6);
        for k in 2..6 {
            let g = grid(k);
            let theta = theta_decomposition(&g).unwrap();
            assert_eq!(theta.len(), 2 * (k - 1));
            for x in g.nodes() {
                for y in g.nodes() {
                    assert_eq!(theta.separating_count(x, y) as u32, g.distance(x, y));
                }
            }
        }
        assert_eq!(theta_decomposition(&hypercube(3)).unwrap().len(), 3);
    }

    #[test]
    fn theta_rejects_non_median() {
        let tri = build_graph(&[(0, 1), (1, 2), (0, 2)], 3).unwrap();
        assert_eq!(theta_decomposition(&tri).unwrap_err(), GraphError::NotMedianGraph);
    }
}
