//! The token-passing engine: each round a small group of tokens is drawn,
//! the group decides on a node, and exactly the drawn tokens move there. A
//! run ends when a single node holds every token.

mod consistency;
mod rules;
mod star;
mod state;

use thiserror::Error;

use crate::graph::{GraphError, NodeId, OpinionGraph, OpinionProfile};
use crate::rng::SimRng;

pub use consistency::{check_local_consistency, check_local_consistency_with};
pub use rules::{
    decide_dyad, decide_restricted_vote, decide_triad_median, select_group, DecisionRule, Group, SelectionRule,
};
pub use star::{concentrate_leaves, crtd_step, rtd_step, run_star, StarNode, StarState};
pub use state::{init_tokens, token_mean, write_round_log, RoundLog, TokenState, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("each participant needs at least one token")]
    ZeroTokens,
    #[error("step cap must be at least 1")]
    ZeroStepCap,
    #[error("the generalized-median rule needs a median graph")]
    NotMedianGraph,
    #[error("interval between {0} and {1} is not a path; midpoint undefined")]
    AmbiguousMidpoint(NodeId, NodeId),
    #[error("{decision:?} cannot be used with {selection:?}")]
    IncompatibleRules { selection: SelectionRule, decision: DecisionRule },
    #[error("token state does not match the graph")]
    StateGraphMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// What happened in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    pub group: Group,
    pub decision: Option<NodeId>,
}

fn check_rules(sel: SelectionRule, dec: DecisionRule) -> Result<(), DynamicsError> {
    if (sel == SelectionRule::DyadUniform) == dec.is_dyadic() {
        Ok(())
    } else {
        Err(DynamicsError::IncompatibleRules { selection: sel, decision: dec })
    }
}

/// Plays one round in place. A `None` decision (restricted-vote tie) leaves
/// every token where it was; the round counter advances either way.
pub fn step(
    g: &OpinionGraph,
    s: &mut TokenState,
    sel: SelectionRule,
    dec: DecisionRule,
    rng: &mut SimRng,
) -> Result<StepOutcome, DynamicsError> {
    check_rules(sel, dec)?;
    let group = select_group(s, sel, rng);
    let decision = decide(g, s, group, dec, rng)?;
    apply(s, group, decision);
    Ok(StepOutcome { group, decision })
}

fn decide(
    g: &OpinionGraph,
    s: &TokenState,
    group: Group,
    dec: DecisionRule,
    rng: &mut SimRng,
) -> Result<Option<NodeId>, DynamicsError> {
    let t = group.tokens();
    Ok(match dec {
        DecisionRule::GeneralizedMedianOfGroup => {
            Some(decide_triad_median(g, [s.owner(t[0]), s.owner(t[1]), s.owner(t[2])])?)
        }
        DecisionRule::RestrictedVote => decide_restricted_vote(g, [s.owner(t[0]), s.owner(t[1]), s.owner(t[2])], rng),
        DecisionRule::DyadicSymmetricMidpoint | DecisionRule::DyadicRandomEndpoint => {
            Some(decide_dyad(g, [s.owner(t[0]), s.owner(t[1])], dec, rng)?)
        }
    })
}

pub(crate) fn apply(s: &mut TokenState, group: Group, decision: Option<NodeId>) {
    if let Some(target) = decision {
        for &token in group.tokens() {
            s.move_token(token, target);
        }
    }
    s.advance_round();
}

/// `100 · n · (ln n)² + 1000` for `n` tokens.
pub fn default_step_cap(tokens: usize) -> u64 {
    let n = tokens.max(1) as f64;
    (100.0 * n * n.ln().powi(2)).ceil() as u64 + 1000
}

/// Runs from `k` tokens per participant until consensus or `step_cap`
/// rounds. A capped run has no winner.
pub fn run(
    g: &OpinionGraph,
    p: &OpinionProfile,
    k: u64,
    sel: SelectionRule,
    dec: DecisionRule,
    rng: &mut SimRng,
    step_cap: u64,
) -> Result<Trace, DynamicsError> {
    run_from(g, init_tokens(p, k)?, sel, dec, rng, step_cap, None)
}

/// Like [`run`], recording every round.
pub fn run_logged(
    g: &OpinionGraph,
    p: &OpinionProfile,
    k: u64,
    sel: SelectionRule,
    dec: DecisionRule,
    rng: &mut SimRng,
    step_cap: u64,
) -> Result<Trace, DynamicsError> {
    let mut log = Vec::new();
    let mut trace = run_from(g, init_tokens(p, k)?, sel, dec, rng, step_cap, Some(&mut log))?;
    trace.log = Some(log);
    Ok(trace)
}

/// Runs from an explicit state, optionally appending each round to `log`.
pub fn run_from(
    g: &OpinionGraph,
    mut s: TokenState,
    sel: SelectionRule,
    dec: DecisionRule,
    rng: &mut SimRng,
    step_cap: u64,
    mut log: Option<&mut Vec<RoundLog>>,
) -> Result<Trace, DynamicsError> {
    if step_cap == 0 {
        return Err(DynamicsError::ZeroStepCap);
    }
    check_rules(sel, dec)?;
    s.check_graph(g)?;
    if dec == DecisionRule::GeneralizedMedianOfGroup && !g.is_median() {
        return Err(DynamicsError::NotMedianGraph);
    }
    let start = s.round();
    while !s.is_terminal() && s.round() - start < step_cap {
        let group = select_group(&s, sel, rng);
        let decision = decide(g, &s, group, dec, rng)?;
        if let Some(log) = log.as_deref_mut() {
            log.push(RoundLog {
                t: s.round() + 1,
                tokens: group.tokens().to_vec(),
                members: group.tokens().iter().map(|&i| s.owner(i)).collect(),
                decision,
            });
        }
        apply(&mut s, group, decision);
    }
    Ok(Trace { winner: s.consensus(), rounds_elapsed: s.round() - start, terminal_state: s, log: None })
}
