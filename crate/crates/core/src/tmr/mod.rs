//! The strategic triadic majority-rule round: a proposer moves an
//! alternative or a motion to end, all three members vote, and the round
//! ends when a motion to end carries.

mod bargaining;
mod ldsg;
mod strategies;

use rand::Rng;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::graph::{GraphError, NodeId, OpinionGraph};
use crate::rng::SimRng;

pub use bargaining::{bargaining_points, best_bargaining_point, preferred_points};
pub use ldsg::{run_strategic_ldsg, StrategicCaps, StrategicTrace, StrategyAssignment};
pub use strategies::{NeverEnd, SelfProposer, Strategy, TruthfulBargaining, UniformRandomProposer};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmrError {
    #[error("step cap must be at least 1")]
    ZeroStepCap,
    #[error("initial winner and proposer must be distinct members in 0..3, got {winner} and {proposer}")]
    InvalidAssignment { winner: usize, proposer: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// A motion: an alternative node, or a motion to end the round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Proposal {
    Node(NodeId),
    End,
}

impl Serialize for Proposal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Proposal::Node(v) => s.serialize_u64(*v as u64),
            Proposal::End => s.serialize_str("END"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmrState {
    /// Member positions; members are referred to by index.
    pub group: [NodeId; 3],
    pub winner: NodeId,
    /// Index of the proposing member.
    pub proposer: usize,
    /// Steps completed so far.
    pub step: u64,
    pub last_proposal: Option<Proposal>,
    pub last_votes: Option<[bool; 3]>,
    pub history: Vec<(Proposal, [bool; 3])>,
}

/// Which members start as winner and proposer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialAssignment {
    Fixed {
        winner: usize,
        proposer: usize,
    },
    /// A uniform ordered pair of distinct members.
    Random,
}

impl InitialAssignment {
    /// All six ordered pairs of distinct members.
    pub fn all() -> [InitialAssignment; 6] {
        [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
            .map(|(winner, proposer)| InitialAssignment::Fixed { winner, proposer })
    }

    fn resolve(self, rng: &mut SimRng) -> Result<(usize, usize), TmrError> {
        match self {
            InitialAssignment::Fixed { winner, proposer } => {
                if winner < 3 && proposer < 3 && winner != proposer {
                    Ok((winner, proposer))
                } else {
                    Err(TmrError::InvalidAssignment { winner, proposer })
                }
            }
            InitialAssignment::Random => {
                let winner = rng.random_range(0..3);
                let proposer = (winner + rng.random_range(1..3)) % 3;
                Ok((winner, proposer))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub proposer: NodeId,
    pub proposal: Proposal,
    /// Member positions and their votes, in member order.
    pub votes: [(NodeId, bool); 3],
    pub winner_after: NodeId,
}

impl Serialize for TranscriptEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Votes<'a>(&'a [(NodeId, bool); 3]);
        impl Serialize for Votes<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                // co-located members share a key; the later member's vote is kept
                let mut keyed: Vec<(NodeId, bool)> = Vec::with_capacity(3);
                for &(node, vote) in self.0 {
                    match keyed.iter_mut().find(|(n, _)| *n == node) {
                        Some(slot) => slot.1 = vote,
                        None => keyed.push((node, vote)),
                    }
                }
                let mut m = s.serialize_map(Some(keyed.len()))?;
                for (node, vote) in keyed {
                    m.serialize_entry(&node.to_string(), &vote)?;
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("TranscriptEntry", 5)?;
        st.serialize_field("proposer", &self.proposer)?;
        st.serialize_field("proposal", &self.proposal)?;
        st.serialize_field("votes", &Votes(&self.votes))?;
        st.serialize_field("member_votes", &self.votes.map(|(_, v)| v))?;
        st.serialize_field("winner_after", &self.winner_after)?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundOutcome {
    Winner(NodeId),
    /// The step cap was reached without a motion to end carrying.
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundResult {
    pub outcome: RoundOutcome,
    /// Index of the step at which the round ended, or the cap.
    pub steps: u64,
    pub transcript: Vec<TranscriptEntry>,
}

impl RoundResult {
    pub fn winner(&self) -> Option<NodeId> {
        match self.outcome {
            RoundOutcome::Winner(w) => Some(w),
            RoundOutcome::Diverged => None,
        }
    }

    pub fn transcript_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.transcript).expect("transcript serializes")
    }
}

/// Plays one round. Strategies are indexed by member.
pub fn run_tmr_round(
    g: &OpinionGraph,
    group: [NodeId; 3],
    strategies: [&dyn Strategy; 3],
    init: InitialAssignment,
    rng: &mut SimRng,
    step_cap: u64,
) -> Result<RoundResult, TmrError> {
    if step_cap == 0 {
        return Err(TmrError::ZeroStepCap);
    }
    for &v in &group {
        g.check_node(v)?;
    }
    let (winner, proposer) = init.resolve(rng)?;
    let mut state = TmrState {
        group,
        winner: group[winner],
        proposer,
        step: 0,
        last_proposal: None,
        last_votes: None,
        history: Vec::new(),
    };
    let mut transcript = Vec::new();
    while state.step < step_cap {
        let proposal = strategies[state.proposer].propose(g, &state, state.proposer, rng);
        let votes: [bool; 3] = std::array::from_fn(|m| strategies[m].vote(g, &state, m, proposal, rng));
        let yes = votes.iter().filter(|&&v| v).count();
        let carried = yes >= 2;
        let proposer_node = group[state.proposer];
        if let (Proposal::Node(a), true) = (proposal, carried) {
            state.winner = a;
        }
        if yes == 1 || yes == 2 {
            state.proposer = votes.iter().position(|&v| v != carried).expect("a dissenter exists");
        }
        state.step += 1;
        state.last_proposal = Some(proposal);
        state.last_votes = Some(votes);
        state.history.push((proposal, votes));
        transcript.push(TranscriptEntry {
            proposer: proposer_node,
            proposal,
            votes: std::array::from_fn(|m| (group[m], votes[m])),
            winner_after: state.winner,
        });
        if proposal == Proposal::End && carried {
            return Ok(RoundResult { outcome: RoundOutcome::Winner(state.winner), steps: state.step, transcript });
        }
    }
    Ok(RoundResult { outcome: RoundOutcome::Diverged, steps: state.step, transcript })
}
