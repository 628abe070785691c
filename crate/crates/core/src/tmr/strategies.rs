use std::fmt;

use rand::Rng;

use super::{bargaining_points, best_bargaining_point, Proposal, TmrState};
use crate::graph::{NodeId, OpinionGraph};
use crate::rng::SimRng;

/// A member's behaviour in a round. `me` is the member's index in the group.
/// Implementations may read the full state but only act through their
/// return values; any randomness comes from `rng`.
pub trait Strategy: Send + Sync + fmt::Debug {
    fn propose(&self, g: &OpinionGraph, state: &TmrState, me: usize, rng: &mut SimRng) -> Proposal;

    fn vote(&self, g: &OpinionGraph, state: &TmrState, me: usize, proposal: Proposal, rng: &mut SimRng) -> bool;
}

fn others(state: &TmrState, me: usize) -> [NodeId; 2] {
    [state.group[(me + 1) % 3], state.group[(me + 2) % 3]]
}

/// Accept an alternative iff it is strictly closer than the current winner.
fn sincere(g: &OpinionGraph, state: &TmrState, me: usize, a: NodeId) -> bool {
    let u = state.group[me];
    g.distance(u, a) < g.distance(u, state.winner)
}

/// Propose the best bargaining point, or END when there is none; vote
/// sincerely on alternatives; accept END iff there is nothing left to
/// bargain for.
#[derive(Debug, Clone, Copy, Default)]
pub struct TruthfulBargaining;

impl Strategy for TruthfulBargaining {
    fn propose(&self, g: &OpinionGraph, state: &TmrState, me: usize, _: &mut SimRng) -> Proposal {
        match best_bargaining_point(g, state.group[me], others(state, me), state.winner) {
            Some(b) => Proposal::Node(b),
            None => Proposal::End,
        }
    }

    fn vote(&self, g: &OpinionGraph, state: &TmrState, me: usize, proposal: Proposal, _: &mut SimRng) -> bool {
        match proposal {
            Proposal::Node(a) => sincere(g, state, me, a),
            Proposal::End => bargaining_points(g, state.group[me], others(state, me), state.winner).is_empty(),
        }
    }
}

/// Proposes END with probability `1/(|V|+1)`, otherwise a uniform node, and
/// votes by fair coin.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformRandomProposer;

impl Strategy for UniformRandomProposer {
    fn propose(&self, g: &OpinionGraph, _: &TmrState, _: usize, rng: &mut SimRng) -> Proposal {
        let pick = rng.random_range(0..=g.node_count());
        if pick == g.node_count() {
            Proposal::End
        } else {
            Proposal::Node(pick)
        }
    }

    fn vote(&self, _: &OpinionGraph, _: &TmrState, _: usize, _: Proposal, rng: &mut SimRng) -> bool {
        rng.random_bool(0.5)
    }
}

/// Proposes its own node until it wins, then END; votes sincerely and
/// accepts END only when it holds the winning position.
#[derive(Debug, Clone, Copy, Default)]
pub struct SelfProposer;

impl Strategy for SelfProposer {
    fn propose(&self, _: &OpinionGraph, state: &TmrState, me: usize, _: &mut SimRng) -> Proposal {
        if state.winner == state.group[me] {
            Proposal::End
        } else {
            Proposal::Node(state.group[me])
        }
    }

    fn vote(&self, g: &OpinionGraph, state: &TmrState, me: usize, proposal: Proposal, _: &mut SimRng) -> bool {
        match proposal {
            Proposal::Node(a) => sincere(g, state, me, a),
            Proposal::End => state.winner == state.group[me],
        }
    }
}

/// Always proposes its own node and rejects every motion to end.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverEnd;

impl Strategy for NeverEnd {
    fn propose(&self, _: &OpinionGraph, state: &TmrState, me: usize, _: &mut SimRng) -> Proposal {
        Proposal::Node(state.group[me])
    }

    fn vote(&self, g: &OpinionGraph, state: &TmrState, me: usize, proposal: Proposal, _: &mut SimRng) -> bool {
        match proposal {
            Proposal::Node(a) => sincere(g, state, me, a),
            Proposal::End => false,
        }
    }
}
