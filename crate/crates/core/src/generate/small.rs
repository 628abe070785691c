use rayon::prelude::*;

use crate::graph::{NodeId, OpinionGraph};

/// Node pairs `(u, v)`, `u < v`, in the bit order used by edge masks.
pub fn pair_list(n: usize) -> Vec<(NodeId, NodeId)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Edge masks of connected graphs on `n` nodes whose degree sequence is
/// non-increasing in node id. Every connected graph on `n` nodes has such a
/// labeling, so the list covers all of them up to isomorphism (some classes
/// appear more than once).
pub fn connected_graph_masks(n: usize) -> Vec<u64> {
    assert!((1..=9).contains(&n), "exhaustive enumeration is limited to 9 nodes");
    let pairs = pair_list(n);
    let total: u64 = 1 << pairs.len();
    let chunk = 1u64 << 16;
    (0..total.div_ceil(chunk))
        .into_par_iter()
        .flat_map_iter(|c| {
            let pairs = &pairs;
            (c * chunk..((c + 1) * chunk).min(total)).filter(move |&mask| keep(n, pairs, mask))
        })
        .collect()
}

fn keep(n: usize, pairs: &[(NodeId, NodeId)], mask: u64) -> bool {
    let mut adj = [0u16; 9];
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let (u, v) = pairs[i];
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    if (1..n).any(|v| adj[v - 1].count_ones() < adj[v].count_ones()) {
        return false;
    }
    let mut reached: u16 = 1;
    let mut frontier: u16 = 1;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !reached;
        reached |= next;
    }
    reached.count_ones() as usize == n
}

pub fn graph_from_mask(n: usize, mask: u64) -> OpinionGraph {
    let edges: Vec<_> =
        pair_list(n).into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
    OpinionGraph::new(n, &edges).expect("enumerated masks are connected simple graphs")
}
