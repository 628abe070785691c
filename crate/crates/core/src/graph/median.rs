use std::collections::HashMap;

use super::{NodeId, NodeSet, OpinionGraph};

/// All minimizers of `d(u,x) + d(u,y) + d(u,z)` over the whole graph.
pub fn median_of_three(g: &OpinionGraph, x: NodeId, y: NodeId, z: NodeId) -> NodeSet {
    let (dx, dy, dz) = (g.distances_from(x), g.distances_from(y), g.distances_from(z));
    let cost = |u: NodeId| dx[u] + dy[u] + dz[u];
    let best = g.nodes().map(cost).min().unwrap_or(0);
    NodeSet::from_nodes(g.node_count(), g.nodes().filter(|&u| cost(u) == best))
}

/// Lowest-id minimizer of the three-point cost. Defined on every graph; on
/// median graphs it is the unique median.
pub fn canonical_median(g: &OpinionGraph, x: NodeId, y: NodeId, z: NodeId) -> NodeId {
    median_of_three(g, x, y, z).first().expect("a connected graph always has a minimizer")
}

/// The median of three nodes of a median graph, found by walking from `x`
/// while some neighbor is closer to both `y` and `z`.
///
/// The walk stays inside `I(x,y) ∩ I(x,z) = I(x, m)` and stops exactly at
/// `m`, so it costs `O(d(x,m) · deg)`. The result is unspecified when the
/// graph is not a median graph.
pub fn median_unique(g: &OpinionGraph, x: NodeId, y: NodeId, z: NodeId) -> NodeId {
    if x == y || x == z {
        return x;
    }
    if y == z {
        return y;
    }
    let (dy, dz) = (g.distances_from(y), g.distances_from(z));
    let mut cur = x;
    'walk: loop {
        for &w in g.neighbors(cur) {
            if dy[w] < dy[cur] && dz[w] < dz[cur] {
                cur = w;
                continue 'walk;
            }
        }
        return cur;
    }
}

/// Median-graph test straight from the definition: every triple of nodes
/// has exactly one node lying on shortest paths between each pair.
///
/// Triples with a repeated node always qualify, so only distinct triples are
/// scanned. `O(n^4)`; meant for small graphs and for cross-checking
/// [`is_median_graph_structural`].
pub fn is_median_graph(g: &OpinionGraph) -> bool {
    let n = g.node_count();
    for x in 0..n {
        let dx = g.distances_from(x);
        for y in x + 1..n {
            let dy = g.distances_from(y);
            let dxy = dx[y];
            for z in y + 1..n {
                let dz = g.distances_from(z);
                let (dxz, dyz) = (dx[z], dy[z]);
                let mut found = 0;
                for w in 0..n {
                    if dx[w] + dy[w] == dxy && dx[w] + dz[w] == dxz && dy[w] + dz[w] == dyz {
                        found += 1;
                        if found > 1 {
                            return false;
                        }
                    }
                }
                if found == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Median-graph recognition via the modular/K₂,₃ characterization: a
/// connected graph is median iff it is bipartite, satisfies the quadrangle
/// condition, and no two nodes share three common neighbors.
pub fn is_median_graph_structural(g: &OpinionGraph) -> bool {
    let root = g.distances_from(0);
    if g.edges().any(|(u, v)| root[u] == root[v]) {
        return false;
    }

    let mut common: HashMap<(NodeId, NodeId), u32> = HashMap::new();
    for z in g.nodes() {
        let ns = g.neighbors(z);
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                let c = common.entry((a, b)).or_insert(0);
                *c += 1;
                if *c >= 3 {
                    return false;
                }
            }
        }
    }

    // Quadrangle condition: if v, w are both one step closer to u than their
    // common neighbor z, some other common neighbor of v, w is closer still.
    let mut lower = Vec::new();
    for u in g.nodes() {
        let du = g.distances_from(u);
        for z in g.nodes() {
            if du[z] < 2 {
                continue;
            }
            lower.clear();
            lower.extend(g.neighbors(z).iter().copied().filter(|&v| du[v] + 1 == du[z]));
            for (i, &v) in lower.iter().enumerate() {
                for &w in &lower[i + 1..] {
                    let closes =
                        g.neighbors(v).iter().any(|&x| du[x] + 2 == du[z] && g.neighbors(w).binary_search(&x).is_ok());
                    if !closes {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A node that a strict majority of `voters` prefers to every other node.
/// Voters equidistant from the two compared nodes abstain.
pub fn condorcet_winner(g: &OpinionGraph, voters: &[NodeId]) -> Option<NodeId> {
    let mut weights: HashMap<NodeId, u64> = HashMap::new();
    for &v in voters {
        *weights.entry(v).or_insert(0) += 1;
    }
    let mut weighted: Vec<(NodeId, u64)> = weights.into_iter().collect();
    weighted.sort_unstable();
    condorcet_winner_weighted(g, &weighted)
}

pub(crate) fn condorcet_winner_weighted(g: &OpinionGraph, voters: &[(NodeId, u64)]) -> Option<NodeId> {
    if voters.is_empty() {
        return None;
    }
    let beats = |x: NodeId, y: NodeId| {
        let (dx, dy) = (g.distances_from(x), g.distances_from(y));
        let (mut for_x, mut for_y) = (0u64, 0u64);
        for &(v, w) in voters {
            match dx[v].cmp(&dy[v]) {
                std::cmp::Ordering::Less => for_x += w,
                std::cmp::Ordering::Greater => for_y += w,
                std::cmp::Ordering::Equal => {}
            }
        }
        for_x > for_y
    };
    // Neighbors are the likeliest refuters, so try them before the rest.
    g.nodes().find(|&x| g.neighbors(x).iter().all(|&y| beats(x, y)) && g.nodes().all(|y| y == x || beats(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn path(n: usize) -> OpinionGraph {
        build_graph(&(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>(), n).unwrap()
    }

    fn cycle(n: usize) -> OpinionGraph {
        build_graph(&(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>(), n).unwrap()
    }

    fn brute_minimizers(g: &OpinionGraph, t: [NodeId; 3]) -> Vec<NodeId> {
        let cost = |u| t.iter().map(|&v| g.distance(u, v)).sum::<u32>();
        let best = g.nodes().map(cost).min().unwrap();
        g.nodes().filter(|&u| cost(u) == best).collect()
    }

    #[test]
    fn median_on_a_line() {
        let g = path(11);
        assert_eq!(median_of_three(&g, 2, 5, 9).to_vec(), vec![5]);
        assert_eq!(median_unique(&g, 2, 5, 9), 5);
        assert_eq!(median_unique(&g, 9, 2, 5), 5);
        assert_eq!(median_of_three(&g, 3, 3, 8).to_vec(), vec![3]);
        assert_eq!(median_unique(&g, 8, 3, 3), 3);
    }

    #[test]
    fn six_cycle_alternate_nodes() {
        let g = cycle(6);
        let expected = brute_minimizers(&g, [0, 2, 4]);
        // every node costs 0+2+2 or 1+1+3; all six tie at 4 or 5
        assert_eq!(median_of_three(&g, 0, 2, 4).to_vec(), expected);
        assert_eq!(expected, vec![0, 2, 4]);
        assert_eq!(canonical_median(&g, 0, 2, 4), 0);
    }

    #[test]
    fn recognition_examples() {
        let mut grid = Vec::new();
        let k = 21;
        for r in 0..k {
            for c in 0..k {
                let v = k * r + c;
                if c + 1 < k {
                    grid.push((v, v + 1));
                }
                if r + 1 < k {
                    grid.push((v, v + k));
                }
            }
        }
        let grid = build_graph(&grid, k * k).unwrap();
        assert!(is_median_graph_structural(&grid));
        let tri = cycle(3);
        assert!(!is_median_graph(&tri));
        assert!(!is_median_graph_structural(&tri));
        assert!(!is_median_graph(&cycle(5)));
        assert!(!is_median_graph(&cycle(6)));
        assert!(is_median_graph(&cycle(4)));
        assert!(is_median_graph(&path(7)));
        // K_{2,3}
        let k23 = build_graph(&[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)], 5).unwrap();
        assert!(!is_median_graph(&k23));
        assert!(!is_median_graph_structural(&k23));
    }

    #[test]
    fn condorcet_examples() {
        let tri = cycle(3);
        assert_eq!(condorcet_winner(&tri, &[0, 1, 2]), None);
        let g = path(11);
        assert_eq!(condorcet_winner(&g, &[2, 5, 9]), Some(5));
        assert_eq!(condorcet_winner(&g, &[7, 7, 1]), Some(7));
        assert_eq!(condorcet_winner(&g, &[]), None);
    }

    #[test]
    fn even_split_on_edge_has_no_winner() {
        let g = path(2);
        assert_eq!(condorcet_winner(&g, &[0, 1]), None);
        assert_eq!(condorcet_winner(&g, &[0, 0, 1]), Some(0));
    }
}
