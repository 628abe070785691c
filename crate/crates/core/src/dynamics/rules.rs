use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{DynamicsError, TokenState};
use crate::graph::{median_unique, NodeId, OpinionGraph};
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SelectionRule {
    /// Three tokens, i.i.d. uniform, with replacement.
    TriadUniform,
    /// Two tokens, i.i.d. uniform, with replacement.
    DyadUniform,
}

impl SelectionRule {
    pub fn group_size(self) -> usize {
        match self {
            SelectionRule::TriadUniform => 3,
            SelectionRule::DyadUniform => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecisionRule {
    /// The triad's unique generalized median (median graphs only).
    GeneralizedMedianOfGroup,
    /// Each member votes for the closer of the other two.
    RestrictedVote,
    /// Midpoint of the dyad's interval; a fair coin between the two central
    /// nodes when the distance is odd.
    DyadicSymmetricMidpoint,
    /// One endpoint of the dyad, by fair coin.
    DyadicRandomEndpoint,
}

impl DecisionRule {
    pub fn is_dyadic(self) -> bool {
        matches!(self, DecisionRule::DyadicSymmetricMidpoint | DecisionRule::DyadicRandomEndpoint)
    }

    pub fn selection(self) -> SelectionRule {
        if self.is_dyadic() {
            SelectionRule::DyadUniform
        } else {
            SelectionRule::TriadUniform
        }
    }
}

/// Token indices chosen for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Group {
    tokens: [usize; 3],
    len: usize,
}

impl Group {
    pub fn triad(a: usize, b: usize, c: usize) -> Self {
        Group { tokens: [a, b, c], len: 3 }
    }

    pub fn dyad(a: usize, b: usize) -> Self {
        Group { tokens: [a, b, 0], len: 2 }
    }

    pub fn tokens(&self) -> &[usize] {
        &self.tokens[..self.len]
    }
}

pub fn select_group(s: &TokenState, rule: SelectionRule, rng: &mut SimRng) -> Group {
    let n = s.total_tokens();
    match rule {
        SelectionRule::TriadUniform => {
            Group::triad(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))
        }
        SelectionRule::DyadUniform => Group::dyad(rng.random_range(0..n), rng.random_range(0..n)),
    }
}

/// The unique generalized median of the (multiset of) members.
pub fn decide_triad_median(g: &OpinionGraph, members: [NodeId; 3]) -> Result<NodeId, DynamicsError> {
    if !g.is_median() {
        return Err(DynamicsError::NotMedianGraph);
    }
    let [x, y, z] = members;
    Ok(median_unique(g, x, y, z))
}

/// Each member votes for whichever of the other two members is strictly
/// closer, flipping a fair coin when they are equidistant. Votes are tallied
/// per node; a node with two or more votes wins, a 1-1-1 split yields `None`.
pub fn decide_restricted_vote(g: &OpinionGraph, members: [NodeId; 3], rng: &mut SimRng) -> Option<NodeId> {
    restricted_vote_by(|a, b| g.distance(a, b), members, rng)
}

pub(crate) fn restricted_vote_by(
    dist: impl Fn(NodeId, NodeId) -> u32,
    members: [NodeId; 3],
    rng: &mut SimRng,
) -> Option<NodeId> {
    let mut votes = [0; 3];
    for (i, vote) in votes.iter_mut().enumerate() {
        let voter = members[i];
        let (a, b) = (members[(i + 1) % 3], members[(i + 2) % 3]);
        let (da, db) = (dist(voter, a), dist(voter, b));
        *vote = if da < db {
            a
        } else if db < da {
            b
        } else if rng.random_bool(0.5) {
            a
        } else {
            b
        };
    }
    if votes[0] == votes[1] || votes[0] == votes[2] {
        Some(votes[0])
    } else if votes[1] == votes[2] {
        Some(votes[1])
    } else {
        None
    }
}

pub fn decide_dyad(
    g: &OpinionGraph,
    members: [NodeId; 2],
    rule: DecisionRule,
    rng: &mut SimRng,
) -> Result<NodeId, DynamicsError> {
    let [x, y] = members;
    match rule {
        DecisionRule::DyadicRandomEndpoint => Ok(if rng.random_bool(0.5) { x } else { y }),
        DecisionRule::DyadicSymmetricMidpoint => {
            let d = g.distance(x, y);
            if d.is_multiple_of(2) {
                central_node(g, x, y, d / 2)
            } else {
                let near = central_node(g, x, y, d / 2)?;
                let far = central_node(g, x, y, d / 2 + 1)?;
                Ok(if rng.random_bool(0.5) { near } else { far })
            }
        }
        other => Err(DynamicsError::IncompatibleRules { selection: SelectionRule::DyadUniform, decision: other }),
    }
}

/// The only node of `I(x, y)` at distance `h` from `x`.
fn central_node(g: &OpinionGraph, x: NodeId, y: NodeId, h: u32) -> Result<NodeId, DynamicsError> {
    let (dx, dy) = (g.distances_from(x), g.distances_from(y));
    let d = dx[y];
    let mut layer = g.nodes().filter(|&w| dx[w] == h && dy[w] == d - h);
    match (layer.next(), layer.next()) {
        (Some(w), None) => Ok(w),
        _ => Err(DynamicsError::AmbiguousMidpoint(x, y)),
    }
}
