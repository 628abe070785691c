use super::{GraphError, NodeId, NodeSet, OpinionGraph};

/// All nodes on some shortest path between `x` and `y`.
pub fn interval(g: &OpinionGraph, x: NodeId, y: NodeId) -> NodeSet {
    let dxy = g.distance(x, y);
    let from_x = g.distances_from(x);
    let from_y = g.distances_from(y);
    NodeSet::from_nodes(g.node_count(), g.nodes().filter(|&w| from_x[w] + from_y[w] == dxy))
}

pub fn is_convex(g: &OpinionGraph, s: &NodeSet) -> Result<bool, GraphError> {
    if s.is_empty() {
        return Err(GraphError::EmptySet);
    }
    let members = s.to_vec();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            if g.nodes().any(|w| !s.contains(w) && g.between(x, w, y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Least convex superset of `s`, by closing under pairwise intervals until
/// nothing changes.
pub fn convex_hull(g: &OpinionGraph, s: &NodeSet) -> Result<NodeSet, GraphError> {
    if s.is_empty() {
        return Err(GraphError::EmptySet);
    }
    let mut hull = s.clone();
    loop {
        let members = hull.to_vec();
        let mut next = hull.clone();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                for w in g.nodes() {
                    if !next.contains(w) && g.between(x, w, y) {
                        next.insert(w);
                    }
                }
            }
        }
        if next == hull {
            return Ok(hull);
        }
        hull = next;
    }
}

/// The gate of `x` in the convex set `s`: the node `gx ∈ s` through which
/// every shortest path from `x` into `s` passes.
pub fn gate(g: &OpinionGraph, s: &NodeSet, x: NodeId) -> Result<NodeId, GraphError> {
    g.check_node(x)?;
    if !is_convex(g, s)? {
        return Err(GraphError::NotConvex);
    }
    let from_x = g.distances_from(x);
    // The gate, if any, is the unique nearest member.
    let candidate = s.iter().min_by_key(|&v| (from_x[v], v)).ok_or(GraphError::EmptySet)?;
    let dxg = from_x[candidate];
    if s.iter().all(|y| from_x[y] == dxg + g.distance(candidate, y)) {
        Ok(candidate)
    } else {
        Err(GraphError::NoGate(x))
    }
}
