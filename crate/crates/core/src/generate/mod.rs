//! Graph families and opinion profiles used throughout the experiments,
//! plus the JSON spec loader.
//!
//! Node numbering is fixed: grids are row-major (last coordinate fastest),
//! trees are numbered in BFS order from the root `0`, the star's root is `0`
//! with leaves `1..=leaves`, hypercube nodes are their coordinate bitmasks.

mod small;
mod spec_json;

use thiserror::Error;

use crate::graph::{GraphError, NodeId, OpinionGraph, OpinionProfile};

pub use small::{connected_graph_masks, graph_from_mask, pair_list};
pub use spec_json::{load_spec, parse_spec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("{remainder} participants cannot be split evenly over {leaves} leaves")]
    IndivisibleRemainder { remainder: u64, leaves: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `length` nodes in a line.
    Path {
        length: usize,
    },
    /// Cartesian product of paths with the given side lengths.
    Grid {
        sides: Vec<usize>,
    },
    /// Complete `branching`-ary tree with levels `0..=height`.
    Tree {
        branching: usize,
        height: usize,
    },
    Star {
        leaves: usize,
    },
    Hypercube {
        dim: usize,
    },
    Cycle {
        length: usize,
    },
    Complete {
        nodes: usize,
    },
    Explicit {
        nodes: usize,
        edges: Vec<(NodeId, NodeId)>,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Path { .. } => "path",
            Family::Grid { .. } => "grid",
            Family::Tree { .. } => "tree",
            Family::Star { .. } => "star",
            Family::Hypercube { .. } => "hypercube",
            Family::Cycle { .. } => "cycle",
            Family::Complete { .. } => "complete",
            Family::Explicit { .. } => "explicit",
        }
    }

    pub fn build(&self) -> Result<OpinionGraph, GenError> {
        let (nodes, edges) = match self {
            Family::Path { length } => {
                positive("length", *length)?;
                (*length, path_edges(*length))
            }
            Family::Grid { sides } => grid_edges(sides)?,
            Family::Tree { branching, height } => {
                positive("branching", *branching)?;
                tree_edges(*branching, *height)
            }
            Family::Star { leaves } => {
                positive("leaves", *leaves)?;
                (leaves + 1, (1..=*leaves).map(|l| (0, l)).collect())
            }
            Family::Hypercube { dim } => {
                if *dim > 20 {
                    return Err(GenError::InvalidSpec(format!("hypercube dim {dim} too large")));
                }
                let n = 1usize << dim;
                let edges =
                    (0..n).flat_map(|v| (0..*dim).map(move |b| (v, v ^ (1 << b)))).filter(|(v, w)| v < w).collect();
                (n, edges)
            }
            Family::Cycle { length } => {
                if *length < 3 {
                    return Err(GenError::InvalidSpec("cycle length must be at least 3".into()));
                }
                (*length, (0..*length).map(|i| (i, (i + 1) % length)).collect())
            }
            Family::Complete { nodes } => {
                positive("nodes", *nodes)?;
                let edges = (0..*nodes).flat_map(|u| (u + 1..*nodes).map(move |v| (u, v))).collect();
                (*nodes, edges)
            }
            Family::Explicit { nodes, edges } => (*nodes, edges.clone()),
        };
        Ok(OpinionGraph::new(nodes, &edges)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileSpec {
    /// `k` participants at every node.
    UniformK(u64),
    Counts(Vec<(NodeId, u64)>),
    /// On a path `0..=k`: `k + 1` participants at `0`, one at each of `1..=k`.
    DyadicCounterexample {
        k: usize,
    },
    /// On a `k × k` grid: nine participants per node.
    GridNine {
        k: usize,
    },
    /// On a star: `j` at the root, the remaining `n - j` split evenly over
    /// the leaves.
    StarRoot {
        leaves: usize,
        j: u64,
        n: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub profile: ProfileSpec,
}

impl GeneratorSpec {
    pub fn new(family: Family, profile: ProfileSpec) -> Self {
        GeneratorSpec { family, profile }
    }

    pub fn path(length: usize) -> Self {
        Self::new(Family::Path { length }, ProfileSpec::UniformK(1))
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        Self::new(Family::Grid { sides: vec![rows, cols] }, ProfileSpec::UniformK(1))
    }

    pub fn binary_tree(height: usize) -> Self {
        Self::new(Family::Tree { branching: 2, height }, ProfileSpec::UniformK(1))
    }

    pub fn dyadic_counterexample(k: usize) -> Self {
        Self::new(Family::Path { length: k + 1 }, ProfileSpec::DyadicCounterexample { k })
    }

    pub fn grid_nine(k: usize) -> Self {
        Self::new(Family::Grid { sides: vec![k, k] }, ProfileSpec::GridNine { k })
    }

    pub fn star_root(leaves: usize, j: u64, n: u64) -> Self {
        Self::new(Family::Star { leaves }, ProfileSpec::StarRoot { leaves, j, n })
    }

    pub fn with_profile(mut self, profile: ProfileSpec) -> Self {
        self.profile = profile;
        self
    }

    /// Canonical JSON form; `load_spec` of its text reproduces `self`.
    pub fn to_json(&self) -> serde_json::Value {
        spec_json::to_value(self)
    }
}

/// Builds the graph and the profile described by `spec`. Deterministic.
pub fn generate(spec: &GeneratorSpec) -> Result<(OpinionGraph, OpinionProfile), GenError> {
    let g = spec.family.build()?;
    let profile = match &spec.profile {
        ProfileSpec::UniformK(k) => {
            positive("uniform_k", *k as usize)?;
            OpinionProfile::uniform(&g, *k)?
        }
        ProfileSpec::Counts(entries) => {
            let mut counts = vec![0; g.node_count()];
            for &(v, c) in entries {
                g.check_node(v)?;
                counts[v] += c;
            }
            OpinionProfile::new(&g, counts)?
        }
        ProfileSpec::DyadicCounterexample { k } => {
            if spec.family != (Family::Path { length: k + 1 }) {
                return Err(GenError::InvalidSpec(format!(
                    "dyadic_counterexample(k={k}) needs a path of length {}",
                    k + 1
                )));
            }
            dyadic_counterexample_profile(&g, *k)?
        }
        ProfileSpec::GridNine { k } => {
            if spec.family != (Family::Grid { sides: vec![*k, *k] }) {
                return Err(GenError::InvalidSpec(format!("grid_nine(k={k}) needs a {k}x{k} grid")));
            }
            OpinionProfile::uniform(&g, 9)?
        }
        ProfileSpec::StarRoot { leaves, j, n } => {
            if spec.family != (Family::Star { leaves: *leaves }) {
                return Err(GenError::InvalidSpec(format!("star_root needs a star with {leaves} leaves")));
            }
            star_root_profile(&g, *leaves, *j, *n)?
        }
    };
    Ok((g, profile))
}

pub fn dyadic_counterexample_profile(g: &OpinionGraph, k: usize) -> Result<OpinionProfile, GenError> {
    let mut counts = vec![1; k + 1];
    counts[0] = k as u64 + 1;
    Ok(OpinionProfile::new(g, counts)?)
}

/// `j` participants at the root of a star and `(n - j) / leaves` at each leaf.
pub fn star_root_profile(g: &OpinionGraph, leaves: usize, j: u64, n: u64) -> Result<OpinionProfile, GenError> {
    if j > n {
        return Err(GenError::InvalidSpec(format!("root mass {j} exceeds n = {n}")));
    }
    let remainder = n - j;
    if leaves == 0 || !remainder.is_multiple_of(leaves as u64) {
        return Err(GenError::IndivisibleRemainder { remainder, leaves });
    }
    let mut counts = vec![remainder / leaves as u64; leaves + 1];
    counts[0] = j;
    Ok(OpinionProfile::new(g, counts)?)
}

/// Like [`star_root_profile`], but when `n - j` does not divide evenly the
/// first `(n - j) % leaves` leaves get one extra participant.
pub fn star_root_profile_near_even(
    g: &OpinionGraph,
    leaves: usize,
    j: u64,
    n: u64,
) -> Result<OpinionProfile, GenError> {
    if j > n || leaves == 0 {
        return Err(GenError::InvalidSpec(format!("bad star profile j={j} n={n} leaves={leaves}")));
    }
    let remainder = n - j;
    let (base, extra) = (remainder / leaves as u64, (remainder % leaves as u64) as usize);
    let mut counts = vec![j];
    counts.extend((0..leaves).map(|i| base + u64::from(i < extra)));
    Ok(OpinionProfile::new(g, counts)?)
}

/// Node id of the given grid coordinates (row-major).
pub fn grid_node(sides: &[usize], coords: &[usize]) -> NodeId {
    coords.iter().zip(sides).fold(0, |acc, (&c, &side)| acc * side + c)
}

/// Inverse of [`grid_node`].
pub fn grid_coords(sides: &[usize], mut node: NodeId) -> Vec<usize> {
    let mut coords = vec![0; sides.len()];
    for (slot, &side) in coords.iter_mut().zip(sides).rev() {
        *slot = node % side;
        node /= side;
    }
    coords
}

fn positive(name: &str, value: usize) -> Result<(), GenError> {
    if value == 0 {
        Err(GenError::InvalidSpec(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

fn path_edges(length: usize) -> Vec<(NodeId, NodeId)> {
    (1..length).map(|i| (i - 1, i)).collect()
}

fn grid_edges(sides: &[usize]) -> Result<(usize, Vec<(NodeId, NodeId)>), GenError> {
    if sides.is_empty() {
        return Err(GenError::InvalidSpec("grid needs at least one dimension".into()));
    }
    for &s in sides {
        positive("grid side", s)?;
    }
    let n: usize = sides.iter().product();
    let mut edges = Vec::new();
    for v in 0..n {
        let coords = grid_coords(sides, v);
        for axis in 0..sides.len() {
            if coords[axis] + 1 < sides[axis] {
                let mut next = coords.clone();
                next[axis] += 1;
                edges.push((v, grid_node(sides, &next)));
            }
        }
    }
    Ok((n, edges))
}

fn tree_edges(branching: usize, height: usize) -> (usize, Vec<(NodeId, NodeId)>) {
    let mut level_size = 1usize;
    let mut n = 1usize;
    for _ in 0..height {
        level_size *= branching;
        n += level_size;
    }
    let edges = (1..n).map(|v| ((v - 1) / branching, v)).collect();
    (n, edges)
}
