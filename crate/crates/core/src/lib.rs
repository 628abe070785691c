//! Decision-making through sequences of small-group interactions on median
//! graphs: graph machinery, token consensus dynamics, the strategic triadic
//! majority-rule game, and the analytic oracles used to check them.

pub mod analytics;
pub mod dynamics;
pub mod generate;
pub mod graph;
pub mod reproduce;
pub mod rng;
pub mod tmr;
pub mod verify;

pub use generate::{generate, load_spec, Family, GenError, GeneratorSpec, ProfileSpec};
pub use graph::{GraphError, NodeId, NodeSet, OpinionGraph, OpinionProfile};
