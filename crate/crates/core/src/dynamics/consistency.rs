//! Empirical check that a dyadic rule commutes with the isometries of a
//! path: translating the dyad translates the decision, and reflecting it
//! reflects the decision.

use super::{decide_dyad, DecisionRule, DynamicsError};
use crate::graph::{build_graph, NodeId, OpinionGraph};
use crate::rng::SimRng;

const Z: f64 = 4.0;

pub fn check_local_consistency(
    dec: DecisionRule,
    line_length: usize,
    trials: u64,
    rng: &mut SimRng,
) -> Result<bool, DynamicsError> {
    if !dec.is_dyadic() {
        return Err(DynamicsError::IncompatibleRules { selection: dec.selection(), decision: dec });
    }
    let mut failure = None;
    let ok = check_local_consistency_with(line_length, trials, rng, |g, m, rng| match decide_dyad(g, m, dec, rng) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            m[0]
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(ok),
    }
}

/// Samples `trials` decisions for every dyad `{x, x + d}` on a path with
/// `line_length` nodes, presenting the members in both orders. For each
/// distance `d`, offsets from the left endpoint must be symmetric under
/// `o ↦ d − o` and the same at every position, both within 4σ.
pub fn check_local_consistency_with(
    line_length: usize,
    trials: u64,
    rng: &mut SimRng,
    mut decide: impl FnMut(&OpinionGraph, [NodeId; 2], &mut SimRng) -> NodeId,
) -> bool {
    if line_length < 2 || trials == 0 {
        return true;
    }
    let edges: Vec<_> = (1..line_length).map(|i| (i - 1, i)).collect();
    let g = build_graph(&edges, line_length).expect("path is a valid graph");
    for d in 1..line_length {
        let positions = line_length - d;
        let mut counts = vec![vec![0u64; d + 1]; positions];
        for (x, row) in counts.iter_mut().enumerate() {
            let y = x + d;
            for t in 0..trials {
                let members = if t % 2 == 0 { [x, y] } else { [y, x] };
                let v = decide(&g, members, rng);
                if v < x || v > y {
                    return false;
                }
                row[v - x] += 1;
            }
        }
        let pooled: Vec<u64> = (0..=d).map(|o| counts.iter().map(|r| r[o]).sum()).collect();
        for o in 0..=d / 2 {
            let (a, b) = (pooled[o] as f64, pooled[d - o] as f64);
            if (a - b).abs() > Z * (a + b).sqrt() {
                return false;
            }
        }
        let total = (positions as u64 * trials) as f64;
        for row in &counts {
            for o in 0..=d {
                let p = pooled[o] as f64 / total;
                let expect = p * trials as f64;
                let sd = (trials as f64 * p * (1.0 - p)).sqrt();
                if (row[o] as f64 - expect).abs() > Z * sd + 1e-9 {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn symmetric_rules_pass() {
        let mut rng = seeded(1);
        assert!(check_local_consistency(DecisionRule::DyadicSymmetricMidpoint, 9, 400, &mut rng).unwrap());
        assert!(check_local_consistency(DecisionRule::DyadicRandomEndpoint, 9, 400, &mut rng).unwrap());
    }

    #[test]
    fn left_endpoint_fails() {
        let mut rng = seeded(2);
        assert!(!check_local_consistency_with(9, 200, &mut rng, |_, [x, y], _| x.min(y)));
    }

    #[test]
    fn position_dependent_rule_fails_translation() {
        let mut rng = seeded(3);
        let ok = check_local_consistency_with(9, 2000, &mut rng, |_, [x, y], rng| {
            let (l, r) = (x.min(y), x.max(y));
            let q = if l % 2 == 0 { 0.8 } else { 0.2 };
            if rng.random_bool(q) {
                l
            } else {
                r
            }
        });
        assert!(!ok);
    }

    #[test]
    fn triadic_rule_rejected() {
        let mut rng = seeded(4);
        assert!(check_local_consistency(DecisionRule::RestrictedVote, 5, 10, &mut rng).is_err());
    }
}
