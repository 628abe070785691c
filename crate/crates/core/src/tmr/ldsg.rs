use std::collections::BTreeMap;
use std::sync::Arc;

use super::{run_tmr_round, InitialAssignment, RoundOutcome, Strategy, TmrError, TruthfulBargaining};
use crate::dynamics::{apply, init_tokens, select_group, RoundLog, SelectionRule, Trace};
use crate::graph::{NodeId, OpinionGraph, OpinionProfile};
use crate::rng::SimRng;

/// Strategy per participant position; positions not listed play truthfully.
#[derive(Debug, Clone, Default)]
pub struct StrategyAssignment {
    deviators: BTreeMap<NodeId, Arc<dyn Strategy>>,
}

static TRUTHFUL: TruthfulBargaining = TruthfulBargaining;

impl StrategyAssignment {
    pub fn all_truthful() -> Self {
        Self::default()
    }

    pub fn with_deviator(mut self, node: NodeId, strategy: Arc<dyn Strategy>) -> Self {
        self.deviators.insert(node, strategy);
        self
    }

    pub fn strategy_for(&self, node: NodeId) -> &dyn Strategy {
        match self.deviators.get(&node) {
            Some(s) => s.as_ref(),
            None => &TRUTHFUL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategicCaps {
    /// Maximum token rounds.
    pub rounds: u64,
    /// Maximum proposal steps within one round.
    pub steps_per_round: u64,
}

#[derive(Debug, Clone)]
pub struct StrategicTrace {
    pub trace: Trace,
    /// Token round whose majority-rule round never ended, if any.
    pub diverged_at: Option<u64>,
    /// Proposal steps summed over all rounds.
    pub proposal_steps: u64,
}

/// Token dynamics where each triad settles on the winner of a strategic
/// round. Selection draws only from `selection_rng` and play only from
/// `play_rng`, so runs sharing a selection seed are coupled round by round.
#[allow(clippy::too_many_arguments)]
pub fn run_strategic_ldsg(
    g: &OpinionGraph,
    p: &OpinionProfile,
    k: u64,
    assignment: &StrategyAssignment,
    init: InitialAssignment,
    selection_rng: &mut SimRng,
    play_rng: &mut SimRng,
    caps: StrategicCaps,
    mut log: Option<&mut Vec<RoundLog>>,
) -> Result<StrategicTrace, TmrError> {
    if caps.rounds == 0 || caps.steps_per_round == 0 {
        return Err(TmrError::ZeroStepCap);
    }
    let mut s = init_tokens(p, k)?;
    s.check_graph(g)?;
    let mut proposal_steps = 0;
    let mut diverged_at = None;
    while !s.is_terminal() && s.round() < caps.rounds {
        let group = select_group(&s, SelectionRule::TriadUniform, selection_rng);
        let t = group.tokens();
        let members = [s.owner(t[0]), s.owner(t[1]), s.owner(t[2])];
        let strategies = members.map(|v| assignment.strategy_for(v));
        let round = run_tmr_round(g, members, strategies, init, play_rng, caps.steps_per_round)?;
        proposal_steps += round.steps;
        let decision = match round.outcome {
            RoundOutcome::Winner(w) => w,
            RoundOutcome::Diverged => {
                diverged_at = Some(s.round() + 1);
                break;
            }
        };
        if let Some(log) = log.as_deref_mut() {
            log.push(RoundLog {
                t: s.round() + 1,
                tokens: t.to_vec(),
                members: members.to_vec(),
                decision: Some(decision),
            });
        }
        apply(&mut s, group, Some(decision));
    }
    Ok(StrategicTrace {
        trace: Trace {
            winner: if diverged_at.is_some() { None } else { s.consensus() },
            rounds_elapsed: s.round(),
            terminal_state: s,
            log: None,
        },
        diverged_at,
        proposal_steps,
    })
}
