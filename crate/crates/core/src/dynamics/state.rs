use serde::Serialize;

use super::DynamicsError;
use crate::graph::{NodeId, OpinionGraph, OpinionProfile};

/// Who holds each token, plus the round counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenState {
    owners: Vec<NodeId>,
    per_node: Vec<u32>,
    occupied: usize,
    round: u64,
}

impl TokenState {
    /// `k` tokens at every participant's opinion, in node order.
    pub fn new(p: &OpinionProfile, k: u64) -> Result<Self, DynamicsError> {
        if k == 0 {
            return Err(DynamicsError::ZeroTokens);
        }
        let owners: Vec<NodeId> = p.support().flat_map(|(v, c)| std::iter::repeat_n(v, (c * k) as usize)).collect();
        Ok(Self::from_owners(p.node_count(), owners))
    }

    pub fn from_owners(node_count: usize, owners: Vec<NodeId>) -> Self {
        assert!(!owners.is_empty(), "a token state needs at least one token");
        let mut per_node = vec![0u32; node_count];
        for &v in &owners {
            per_node[v] += 1;
        }
        let occupied = per_node.iter().filter(|&&c| c > 0).count();
        TokenState { owners, per_node, occupied, round: 0 }
    }

    pub fn owners(&self) -> &[NodeId] {
        &self.owners
    }

    #[inline]
    pub fn owner(&self, token: usize) -> NodeId {
        self.owners[token]
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn total_tokens(&self) -> usize {
        self.owners.len()
    }

    pub fn tokens_at(&self, v: NodeId) -> u32 {
        self.per_node[v]
    }

    /// Number of distinct nodes holding at least one token.
    pub fn occupied_nodes(&self) -> usize {
        self.occupied
    }

    pub fn is_terminal(&self) -> bool {
        self.occupied == 1
    }

    /// The common owner once every token sits on one node.
    pub fn consensus(&self) -> Option<NodeId> {
        self.is_terminal().then(|| self.owners[0])
    }

    pub(crate) fn move_token(&mut self, token: usize, to: NodeId) {
        let from = self.owners[token];
        if from == to {
            return;
        }
        self.per_node[from] -= 1;
        if self.per_node[from] == 0 {
            self.occupied -= 1;
        }
        if self.per_node[to] == 0 {
            self.occupied += 1;
        }
        self.per_node[to] += 1;
        self.owners[token] = to;
    }

    pub(crate) fn advance_round(&mut self) {
        self.round += 1;
    }

    pub fn check_graph(&self, g: &OpinionGraph) -> Result<(), DynamicsError> {
        if self.per_node.len() != g.node_count() {
            return Err(DynamicsError::StateGraphMismatch);
        }
        Ok(())
    }
}

/// `k` tokens per participant.
pub fn init_tokens(p: &OpinionProfile, k: u64) -> Result<TokenState, DynamicsError> {
    TokenState::new(p, k)
}

/// Average embedded token position. On a line with `embedding = node id`
/// this is a martingale under every symmetric dyadic rule.
pub fn token_mean(s: &TokenState, embedding: impl Fn(NodeId) -> f64) -> f64 {
    s.owners.iter().map(|&v| embedding(v)).sum::<f64>() / s.owners.len() as f64
}

/// One round of a run, as streamed in line-delimited JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundLog {
    pub t: u64,
    pub tokens: Vec<usize>,
    pub members: Vec<NodeId>,
    pub decision: Option<NodeId>,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub terminal_state: TokenState,
    pub winner: Option<NodeId>,
    pub rounds_elapsed: u64,
    pub log: Option<Vec<RoundLog>>,
}

impl Trace {
    pub fn converged(&self) -> bool {
        self.winner.is_some()
    }
}

/// Writes one JSON object per line.
pub fn write_round_log<W: std::io::Write>(mut out: W, rounds: &[RoundLog]) -> std::io::Result<()> {
    for r in rounds {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
