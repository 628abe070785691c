//! Restricted triadic dynamics on a star, tracked by token counts (RTD), and
//! its concentrated variant (CRTD) in which the leaf counts are re-packed
//! after every step.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rules::restricted_vote_by;
use crate::rng::SimRng;

/// A position on the star: the root or leaf `i` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StarNode {
    Root,
    Leaf(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarState {
    pub root: u64,
    pub leaves: Vec<u64>,
}

impl StarState {
    pub fn new(root: u64, leaves: Vec<u64>) -> Self {
        StarState { root, leaves }
    }

    pub fn total(&self) -> u64 {
        self.root + self.leaves.iter().sum::<u64>()
    }

    pub fn max_leaf(&self) -> u64 {
        self.leaves.iter().copied().max().unwrap_or(0)
    }

    /// `(root count, largest leaf count)`.
    pub fn truncation(&self) -> (u64, u64) {
        (self.root, self.max_leaf())
    }

    pub fn count(&self, at: StarNode) -> u64 {
        match at {
            StarNode::Root => self.root,
            StarNode::Leaf(i) => self.leaves[i],
        }
    }

    fn count_mut(&mut self, at: StarNode) -> &mut u64 {
        match at {
            StarNode::Root => &mut self.root,
            StarNode::Leaf(i) => &mut self.leaves[i],
        }
    }

    pub fn winner(&self) -> Option<StarNode> {
        let n = self.total();
        if self.root == n {
            return Some(StarNode::Root);
        }
        self.leaves.iter().position(|&c| c == n).map(StarNode::Leaf)
    }

    pub fn is_terminal(&self) -> bool {
        self.winner().is_some()
    }

    /// The position of token `index` when tokens are numbered root first,
    /// then leaf by leaf.
    fn locate(&self, mut index: u64) -> StarNode {
        if index < self.root {
            return StarNode::Root;
        }
        index -= self.root;
        for (i, &c) in self.leaves.iter().enumerate() {
            if index < c {
                return StarNode::Leaf(i);
            }
            index -= c;
        }
        unreachable!("token index beyond total")
    }
}

fn star_distance(a: StarNode, b: StarNode) -> u32 {
    match (a, b) {
        _ if a == b => 0,
        (StarNode::Root, _) | (_, StarNode::Root) => 1,
        _ => 2,
    }
}

fn encode(v: StarNode) -> usize {
    match v {
        StarNode::Root => 0,
        StarNode::Leaf(i) => i + 1,
    }
}

fn decode(v: usize) -> StarNode {
    if v == 0 {
        StarNode::Root
    } else {
        StarNode::Leaf(v - 1)
    }
}

/// One restricted-vote round: three tokens drawn with replacement, each
/// distinct drawn token moves to the winner. Token identity only matters
/// through positions, so tokens are numbered by position.
pub fn rtd_step(s: &mut StarState, rng: &mut SimRng) {
    let n = s.total();
    let picks = [rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)];
    let members = picks.map(|i| encode(s.locate(i)));
    let Some(target) = restricted_vote_by(|a, b| star_distance(decode(a), decode(b)), members, rng) else {
        return;
    };
    let target = decode(target);
    for (j, &pick) in picks.iter().enumerate() {
        if picks[..j].contains(&pick) {
            continue;
        }
        let from = decode(members[j]);
        if from != target {
            *s.count_mut(from) -= 1;
            *s.count_mut(target) += 1;
        }
    }
}

/// Re-packs the leaves into non-increasing order, keeping the largest leaf
/// count and the leaf total: as many full leaves as fit, then the remainder.
pub fn concentrate_leaves(s: &mut StarState) {
    let max = s.max_leaf();
    if max == 0 {
        return;
    }
    let mut rest: u64 = s.leaves.iter().sum();
    for leaf in s.leaves.iter_mut() {
        *leaf = rest.min(max);
        rest -= *leaf;
    }
}

pub fn crtd_step(s: &mut StarState, rng: &mut SimRng) {
    rtd_step(s, rng);
    concentrate_leaves(s);
}

/// Runs RTD (or CRTD when `concentrated`) for at most `cap` rounds.
pub fn run_star(mut s: StarState, concentrated: bool, rng: &mut SimRng, cap: u64) -> (Option<StarNode>, u64) {
    let mut rounds = 0;
    while !s.is_terminal() && rounds < cap {
        if concentrated {
            crtd_step(&mut s, rng);
        } else {
            rtd_step(&mut s, rng);
        }
        rounds += 1;
    }
    (s.winner(), rounds)
}
