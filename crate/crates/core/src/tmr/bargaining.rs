use crate::graph::{interval, NodeId, NodeSet, OpinionGraph};

/// Points on a shortest path from `u` to the current winner `w`, other than
/// `w` itself.
pub fn preferred_points(g: &OpinionGraph, u: NodeId, w: NodeId) -> NodeSet {
    let mut p = interval(g, u, w);
    p.remove(w);
    p
}

/// Points preferred by `u` and by at least one of the other two members.
pub fn bargaining_points(g: &OpinionGraph, u: NodeId, others: [NodeId; 2], w: NodeId) -> NodeSet {
    let mine = preferred_points(g, u, w);
    let mut b = mine.intersection(&preferred_points(g, others[0], w));
    b.union_with(&mine.intersection(&preferred_points(g, others[1], w)));
    b
}

/// The bargaining point closest to `u`, lowest id on ties.
pub fn best_bargaining_point(g: &OpinionGraph, u: NodeId, others: [NodeId; 2], w: NodeId) -> Option<NodeId> {
    bargaining_points(g, u, others, w).iter().min_by_key(|&b| (g.distance(u, b), b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{grid_node, GeneratorSpec};
    use crate::graph::build_graph;

    fn path(n: usize) -> OpinionGraph {
        build_graph(&(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>(), n).unwrap()
    }

    #[test]
    fn preferred_examples() {
        let g = path(11);
        assert!(preferred_points(&g, 4, 4).is_empty());
        assert_eq!(preferred_points(&g, 5, 2).to_vec(), vec![3, 4, 5]);
        let (grid, _) = crate::generate::generate(&GeneratorSpec::grid(5, 5)).unwrap();
        let p = preferred_points(&grid, grid_node(&[5, 5], &[2, 2]), grid_node(&[5, 5], &[0, 0]));
        let mut expect: Vec<_> = (0..3)
            .flat_map(|r| (0..3).map(move |c| grid_node(&[5, 5], &[r, c])))
            .filter(|&v| v != grid_node(&[5, 5], &[0, 0]))
            .collect();
        expect.sort_unstable();
        assert_eq!(p.to_vec(), expect);
    }

    #[test]
    fn bargaining_examples() {
        let g = path(11);
        assert_eq!(bargaining_points(&g, 5, [2, 9], 2).to_vec(), vec![3, 4, 5]);
        assert_eq!(best_bargaining_point(&g, 5, [2, 9], 2), Some(5));
        assert_eq!(best_bargaining_point(&g, 9, [2, 5], 5), None);
        assert!(bargaining_points(&g, 2, [5, 9], 2).is_empty());
    }

    #[test]
    fn ties_take_lowest_id() {
        // square 0-1-3-2-0: from u=3 with w=0, both 1 and 2 are adjacent to 3
        // and bargaining points when the others sit at 1 and 2
        let sq = build_graph(&[(0, 1), (1, 3), (3, 2), (2, 0)], 4).unwrap();
        assert_eq!(bargaining_points(&sq, 3, [1, 2], 0).to_vec(), vec![1, 2]);
        assert_eq!(best_bargaining_point(&sq, 3, [1, 2], 0), Some(1));
    }
}
