//! Analytic oracles and statistics: the urn chain that governs token counts
//! across a cut, approximation ratios, confidence intervals, and the seeded
//! experiment runner.

mod experiment;
mod ratio;
pub mod stats;
mod urn;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::generate::GenError;
use crate::graph::GraphError;

pub use experiment::{run_experiment, run_trials, Dynamic, ExperimentConfig, TrialRecord, TrialReport};
pub use ratio::{approx_ratio, edge_cut_counts, ratio_against};
pub use stats::wilson_interval;
pub use urn::{
    absorption_solver, simulate_urn, urn_closed_form, urn_closed_form_exact, urn_transition, AbsorptionResult,
    ExactAbsorption, EXACT_LIMIT,
};

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("every participant holds the same opinion; the approximation ratio is undefined away from it")]
    DegenerateProfile,
    #[error("unknown dynamic {0:?}; expected triad-median, restricted, dyad-midpoint or dyad-endpoint")]
    UnknownDynamic(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
