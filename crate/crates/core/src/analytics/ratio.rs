use super::AnalyticsError;
use crate::graph::{generalized_median, total_distance, EdgeCut, NodeId, OpinionGraph, OpinionProfile};

/// `D(x̂) / D(x*)`. A profile concentrated on one node has `D(x*) = 0`; the
/// ratio is then 1 for that node and undefined elsewhere.
pub fn approx_ratio(g: &OpinionGraph, p: &OpinionProfile, x_hat: NodeId) -> Result<f64, AnalyticsError> {
    g.check_node(x_hat)?;
    let (_, best) = generalized_median(g, p);
    ratio_against(g, p, best, x_hat)
}

/// [`approx_ratio`] with the optimal cost already known.
pub fn ratio_against(g: &OpinionGraph, p: &OpinionProfile, best: u64, x_hat: NodeId) -> Result<f64, AnalyticsError> {
    let cost = total_distance(g, p, x_hat);
    match (best, cost) {
        (0, 0) => Ok(1.0),
        (0, _) => Err(AnalyticsError::DegenerateProfile),
        _ => Ok(cost as f64 / best as f64),
    }
}

/// Participant mass on the larger and smaller side of a cut.
pub fn edge_cut_counts(g: &OpinionGraph, p: &OpinionProfile, cut: &EdgeCut) -> Result<(u64, u64), AnalyticsError> {
    g.require_median()?;
    let mass = |side: &crate::graph::NodeSet| side.iter().map(|v| p.count_at(v)).sum::<u64>();
    let (a, b) = (mass(&cut.side_u), mass(&cut.side_v));
    Ok((a.max(b), a.min(b)))
}
