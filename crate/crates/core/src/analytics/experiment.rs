//! Seeded Monte Carlo runner. Trial `i` draws from `child_rng(seed, i)`, so a
//! report depends only on the configuration and the seed, never on thread
//! count or completion order.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{ratio_against, stats, wilson_interval, AnalyticsError};
use crate::dynamics::{default_step_cap, run, DecisionRule, SelectionRule};
use crate::generate::{generate, GeneratorSpec};
use crate::graph::{generalized_median, NodeId};
use crate::rng::{child_rng, SimRng};

/// Runs `trials` independent trials in parallel, returned in trial order.
pub fn run_trials<T: Send>(trials: u64, seed: u64, f: impl Fn(u64, &mut SimRng) -> T + Sync) -> Vec<T> {
    (0..trials).into_par_iter().map(|i| f(i, &mut child_rng(seed, i))).collect()
}

/// The named token dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dynamic {
    TriadMedian,
    Restricted,
    DyadMidpoint,
    DyadEndpoint,
}

impl Dynamic {
    pub const ALL: [Dynamic; 4] =
        [Dynamic::TriadMedian, Dynamic::Restricted, Dynamic::DyadMidpoint, Dynamic::DyadEndpoint];

    pub fn name(self) -> &'static str {
        match self {
            Dynamic::TriadMedian => "triad-median",
            Dynamic::Restricted => "restricted",
            Dynamic::DyadMidpoint => "dyad-midpoint",
            Dynamic::DyadEndpoint => "dyad-endpoint",
        }
    }

    pub fn decision(self) -> DecisionRule {
        match self {
            Dynamic::TriadMedian => DecisionRule::GeneralizedMedianOfGroup,
            Dynamic::Restricted => DecisionRule::RestrictedVote,
            Dynamic::DyadMidpoint => DecisionRule::DyadicSymmetricMidpoint,
            Dynamic::DyadEndpoint => DecisionRule::DyadicRandomEndpoint,
        }
    }

    pub fn selection(self) -> SelectionRule {
        self.decision().selection()
    }
}

impl fmt::Display for Dynamic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dynamic {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dynamic::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| AnalyticsError::UnknownDynamic(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub spec: GeneratorSpec,
    pub dynamic: Dynamic,
    /// Tokens per participant.
    pub tokens: u64,
    pub trials: u64,
    /// Round cap per trial; `None` uses [`default_step_cap`].
    pub step_cap: Option<u64>,
}

impl ExperimentConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "spec": self.spec.to_json(),
            "dynamic": self.dynamic.name(),
            "tokens": self.tokens,
            "trials": self.trials,
            "step_cap": self.step_cap,
        })
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().to_string().as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    /// Absent when the trial hit its round cap.
    pub winner: Option<NodeId>,
    pub rounds: u64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
}

impl TrialReport {
    pub fn converged(&self) -> u64 {
        self.trials.iter().filter(|t| t.winner.is_some()).count() as u64
    }

    pub fn wins(&self) -> BTreeMap<NodeId, u64> {
        let mut wins = BTreeMap::new();
        for w in self.trials.iter().filter_map(|t| t.winner) {
            *wins.entry(w).or_insert(0) += 1;
        }
        wins
    }

    /// Fraction of all trials won by a node in `nodes`.
    pub fn win_rate(&self, nodes: &[NodeId]) -> f64 {
        if self.trials.is_empty() {
            return 0.0;
        }
        let hits = self.trials.iter().filter(|t| t.winner.is_some_and(|w| nodes.contains(&w))).count();
        hits as f64 / self.trials.len() as f64
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.trials.iter().filter_map(|t| t.ratio).collect()
    }

    /// Rounds of the trials that converged.
    pub fn rounds(&self) -> Vec<f64> {
        self.trials.iter().filter(|t| t.winner.is_some()).map(|t| t.rounds as f64).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), AnalyticsError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["trial", "winner", "rounds", "ratio"])?;
        for t in &self.trials {
            w.write_record([
                t.trial.to_string(),
                t.winner.map(|v| v.to_string()).unwrap_or_default(),
                t.rounds.to_string(),
                t.ratio.map(|r| format!("{r:.12}")).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aggregate summary. Win counts and their 95% Wilson intervals are
    /// over all trials; ratio and round statistics over converged ones.
    pub fn aggregate_json(&self) -> Value {
        let n = self.trials.len() as u64;
        let wins = self.wins();
        let ci: BTreeMap<String, [f64; 2]> = wins
            .iter()
            .map(|(&v, &c)| {
                let (lo, hi) = wilson_interval(c, n, 0.95).expect("counts within trials");
                (v.to_string(), [lo, hi])
            })
            .collect();
        let ratios = self.ratios();
        let rounds = self.rounds();
        json!({
            "wins": wins.iter().map(|(v, c)| (v.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
            "trials": n,
            "converged": self.converged(),
            "mean_ratio": stats::mean(&ratios),
            "p95_ratio": stats::quantile(&ratios, 0.95),
            "mean_T": stats::mean(&rounds),
            "median_T": stats::median(&rounds),
            "ci": ci,
            "seed": self.seed,
            "config_hash": self.config.config_hash(),
            "config": self.config.to_json(),
        })
    }
}

pub fn run_experiment(config: &ExperimentConfig, seed: u64) -> Result<TrialReport, AnalyticsError> {
    let (g, p) = generate(&config.spec)?;
    if config.tokens == 0 {
        return Err(crate::dynamics::DynamicsError::ZeroTokens.into());
    }
    let (_, best) = generalized_median(&g, &p);
    let total = (p.total() * config.tokens) as usize;
    let cap = config.step_cap.unwrap_or_else(|| default_step_cap(total));
    let (sel, dec) = (config.dynamic.selection(), config.dynamic.decision());
    let trials = run_trials(config.trials, seed, |i, rng| -> Result<TrialRecord, AnalyticsError> {
        let trace = run(&g, &p, config.tokens, sel, dec, rng, cap)?;
        let ratio = trace.winner.map(|w| ratio_against(&g, &p, best, w)).transpose()?;
        Ok(TrialRecord { trial: i, winner: trace.winner, rounds: trace.rounds_elapsed, ratio })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(TrialReport { config: config.clone(), seed, trials })
}
