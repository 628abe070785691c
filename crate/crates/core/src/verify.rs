//! Cross-module property suites: graph lemmas, bargaining lemmas, the urn
//! oracle agreement and dynamics invariants, each reported as pass/fail.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::Deserialize;

use crate::analytics::{absorption_solver, simulate_urn, urn_closed_form_exact, urn_transition};
use crate::dynamics::{check_local_consistency, init_tokens, step, DecisionRule, SelectionRule};
use crate::generate::{connected_graph_masks, generate, graph_from_mask, parse_spec, GeneratorSpec};
use crate::graph::{
    condorcet_winner, interval, is_median_graph, median_unique, theta_decomposition, win_sets, NodeId, NodeSet,
    OpinionGraph,
};
use crate::rng::{child_rng, derive_seed};
use crate::tmr::{
    bargaining_points, best_bargaining_point, run_tmr_round, InitialAssignment, NeverEnd, SelfProposer, Strategy,
    TruthfulBargaining, UniformRandomProposer,
};

const CORPUS: &str = include_str!("../corpus/median_labels.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(format!("unknown level {other:?}; expected quick or full")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Property {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Property { name: name.to_string(), pass, detail }
    }
}

pub fn render(props: &[Property]) -> String {
    let mut out = String::new();
    for p in props {
        let _ = writeln!(out, "{} {}: {}", if p.pass { "PASS" } else { "FAIL" }, p.name, p.detail);
    }
    out
}

#[derive(Debug, Deserialize)]
struct CorpusEntry {
    name: String,
    median: bool,
    tmr: bool,
    spec: serde_json::Value,
}

pub struct Instance {
    pub name: String,
    pub median: bool,
    pub tmr: bool,
    pub graph: OpinionGraph,
}

/// The labelled corpus shipped with the crate.
pub fn corpus() -> Vec<Instance> {
    let entries: Vec<CorpusEntry> = serde_json::from_str(CORPUS).expect("corpus is valid JSON");
    entries
        .into_iter()
        .map(|e| {
            let spec = parse_spec(&e.spec.to_string()).unwrap_or_else(|err| panic!("corpus entry {}: {err}", e.name));
            let (graph, _) = generate(&spec).unwrap_or_else(|err| panic!("corpus entry {}: {err}", e.name));
            Instance { name: e.name, median: e.median, tmr: e.tmr, graph }
        })
        .collect()
}

/// Every distinct triple has a Condorcet winner.
pub fn all_triples_have_condorcet_winner(g: &OpinionGraph) -> bool {
    let n = g.node_count();
    (0..n).all(|x| (x + 1..n).all(|y| (y + 1..n).all(|z| condorcet_winner(g, &[x, y, z]).is_some())))
}

/// Bargaining points by the median formula
/// `(I(w, m(w,u,u')) ∪ I(w, m(w,u,u''))) \ {w}`.
pub fn bargaining_points_by_median(g: &OpinionGraph, u: NodeId, others: [NodeId; 2], w: NodeId) -> NodeSet {
    let mut b = interval(g, w, median_unique(g, w, u, others[0]));
    b.union_with(&interval(g, w, median_unique(g, w, u, others[1])));
    b.remove(w);
    b
}

fn characterization(max_nodes: usize) -> Property {
    let mut graphs = 0u64;
    let mut median = 0u64;
    let mut bad = Vec::new();
    for n in 1..=max_nodes {
        for mask in connected_graph_masks(n) {
            let g = graph_from_mask(n, mask);
            graphs += 1;
            let label = is_median_graph(&g);
            median += u64::from(label);
            let condorcet = all_triples_have_condorcet_winner(&g);
            let winners_are_medians = !label
                || (0..n).all(|x| {
                    (0..n).all(|y| (0..n).all(|z| condorcet_winner(&g, &[x, y, z]) == Some(median_unique(&g, x, y, z))))
                });
            if label != condorcet || label != g.is_median() || !winners_are_medians {
                bad.push((n, mask));
            }
        }
    }
    Property::new(
        "characterization",
        bad.is_empty(),
        format!("{graphs} connected graphs on ≤ {max_nodes} nodes, {median} median, {} disagreements", bad.len()),
    )
}

fn corpus_labels(corpus: &[Instance]) -> Property {
    let wrong: Vec<&str> = corpus
        .iter()
        .filter(|i| is_median_graph(&i.graph) != i.median || i.graph.is_median() != i.median)
        .map(|i| i.name.as_str())
        .collect();
    Property::new("corpus-labels", wrong.is_empty(), format!("{} instances, mislabelled: {wrong:?}", corpus.len()))
}

fn graph_lemmas(corpus: &[Instance]) -> Vec<Property> {
    let mut intersect = (0u64, 0u64);
    let mut theta = (0u64, 0u64);
    for inst in corpus.iter().filter(|i| i.median) {
        let g = &inst.graph;
        let n = g.node_count();
        let cuts = theta_decomposition(g).expect("median graph");
        for x in 0..n {
            for y in 0..n {
                theta.0 += 1;
                if cuts.separating_count(x, y) as u32 != g.distance(x, y) {
                    theta.1 += 1;
                }
                for w in 0..n {
                    intersect.0 += 1;
                    let lhs = interval(g, w, x).intersection(&interval(g, w, y));
                    if lhs != interval(g, w, median_unique(g, w, x, y)) {
                        intersect.1 += 1;
                    }
                }
            }
        }
    }
    vec![
        Property::new(
            "interval-intersection",
            intersect.1 == 0,
            format!("I(w,x) ∩ I(w,y) = I(w,m(w,x,y)) on {} triples, {} failures", intersect.0, intersect.1),
        ),
        Property::new(
            "theta-distance",
            theta.1 == 0,
            format!("d(x,y) = #separating cuts on {} pairs, {} failures", theta.0, theta.1),
        ),
    ]
}

fn bargaining_lemmas(corpus: &[Instance], exhaustive_limit: usize) -> Vec<Property> {
    let mut sets = (0u64, 0u64);
    let mut best = (0u64, 0u64);
    let mut criterion = (0u64, 0u64);
    let mut separation = (0u64, 0u64);
    for inst in corpus.iter().filter(|i| i.median && i.graph.node_count() <= exhaustive_limit) {
        let g = &inst.graph;
        let n = g.node_count();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let m = median_unique(g, x, y, z);
                    for w in 0..n {
                        let b = bargaining_points(g, y, [x, z], w);
                        sets.0 += 1;
                        if b != bargaining_points_by_median(g, y, [x, z], w) {
                            sets.1 += 1;
                        }
                        best.0 += 1;
                        let by_formula = [median_unique(g, y, x, w), median_unique(g, y, z, w)]
                            .into_iter()
                            .filter(|&c| c != w)
                            .map(|c| g.distance(y, c))
                            .min();
                        let found = best_bargaining_point(g, y, [x, z], w);
                        if found.map(|c| g.distance(y, c)) != by_formula {
                            best.1 += 1;
                        }
                        criterion.0 += 1;
                        if b.is_empty() != g.between(y, w, m) {
                            criterion.1 += 1;
                        }
                        if g.between(y, w, m) {
                            separation.0 += 1;
                            if !(g.between(x, m, w) && g.between(x, w, y)) {
                                separation.1 += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    vec![
        Property::new(
            "bargaining-sets",
            sets.1 == 0,
            format!("set vs median formula on {} cases, {} failures", sets.0, sets.1),
        ),
        Property::new("best-bargaining-point", best.1 == 0, format!("{} cases, {} failures", best.0, best.1)),
        Property::new(
            "no-bargaining-criterion",
            criterion.1 == 0,
            format!("B_y empty iff w ∈ I(y, m) on {} cases, {} failures", criterion.0, criterion.1),
        ),
        Property::new(
            "median-separation",
            separation.1 == 0,
            format!(
                "w on a shortest y→m path: m ∈ I(x,w), w ∈ I(x,y) on {} cases, {} failures",
                separation.0, separation.1
            ),
        ),
    ]
}

fn truthful_rounds(corpus: &[Instance], seed: u64) -> Property {
    let t = TruthfulBargaining;
    let mut rng = child_rng(seed, 0);
    let (mut rounds, mut failures) = (0u64, 0u64);
    let (mut two, mut one) = (0u64, 0u64);
    for inst in corpus.iter().filter(|i| i.tmr) {
        let g = &inst.graph;
        let n = g.node_count();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let group = [x, y, z];
                    let m = median_unique(g, x, y, z);
                    for init in InitialAssignment::all() {
                        let InitialAssignment::Fixed { winner, .. } = init else { unreachable!() };
                        let r = run_tmr_round(g, group, [&t, &t, &t], init, &mut rng, 10).expect("valid round");
                        rounds += 1;
                        let expected_steps = if group[winner] == m { 1 } else { 2 };
                        if r.winner() != Some(m) || r.steps != expected_steps {
                            failures += 1;
                        }
                        if r.steps == 2 {
                            two += 1;
                        } else {
                            one += 1;
                        }
                    }
                }
            }
        }
    }
    Property::new(
        "truthful-round",
        failures == 0,
        format!(
            "{rounds} rounds: winner = m(group) always; {two} took 2 steps, {one} started at the median and took 1; {failures} failures"
        ),
    )
}

fn deviation_safety(corpus: &[Instance], episodes: u64, seed: u64) -> Property {
    let deviators: [Arc<dyn Strategy>; 3] =
        [Arc::new(UniformRandomProposer), Arc::new(SelfProposer), Arc::new(NeverEnd)];
    let t = TruthfulBargaining;
    let (mut ended, mut diverged, mut bad) = (0u64, 0u64, 0u64);
    for (gi, inst) in corpus.iter().filter(|i| i.tmr).enumerate() {
        let g = &inst.graph;
        let n = g.node_count();
        let mut rng = child_rng(derive_seed(seed, 0xDE71), gi as u64);
        for e in 0..episodes {
            let group = [rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)];
            let who = rng.random_range(0..3);
            let dev = deviators[(e % 3) as usize].as_ref();
            let mut strategies: [&dyn Strategy; 3] = [&t, &t, &t];
            strategies[who] = dev;
            let r = run_tmr_round(g, group, strategies, InitialAssignment::Random, &mut rng, 200).expect("valid round");
            match r.winner() {
                Some(w) => {
                    ended += 1;
                    if !g.between(group[who], median_unique(g, group[0], group[1], group[2]), w) {
                        bad += 1;
                    }
                }
                None => diverged += 1,
            }
        }
    }
    Property::new(
        "deviation-safety",
        bad == 0,
        format!("{ended} terminating and {diverged} capped deviating rounds; {bad} with m(group) ∉ I(deviator, ŵ)"),
    )
}

fn urn_agreement(max_n: u64) -> Property {
    let mut worst = 0f64;
    let mut exact_mismatch = 0u64;
    for n in 1..=max_n {
        let solved = absorption_solver(n).expect("n ≥ 1");
        let exact = solved.exact.as_ref().expect("exact below the limit");
        for x0 in 0..=n {
            let closed = urn_closed_form_exact(n, x0).expect("in range");
            if closed != exact.hit_n[x0 as usize] {
                exact_mismatch += 1;
            }
            let diff = (num_traits::ToPrimitive::to_f64(&closed).unwrap() - solved.hit_n[x0 as usize]).abs();
            worst = worst.max(diff);
        }
    }
    Property::new(
        "urn-oracle",
        worst <= 1e-10 && exact_mismatch == 0,
        format!("closed form vs solver for n ≤ {max_n}: max |Δ| = {worst:.2e}, {exact_mismatch} exact mismatches"),
    )
}

fn urn_simulation(runs: u64, seed: u64) -> Property {
    let mut detail = String::new();
    let mut pass = true;
    for (n, x0) in [(10u64, 3u64), (50, 20)] {
        let p = absorption_solver(n).expect("n ≥ 1").hit_n[x0 as usize];
        let hits = crate::analytics::run_trials(runs, derive_seed(seed, n), |_, rng| {
            simulate_urn(n, x0, rng).expect("valid").0
        })
        .into_iter()
        .filter(|&h| h)
        .count();
        let freq = hits as f64 / runs as f64;
        let sd = (p * (1.0 - p) / runs as f64).sqrt();
        let z = (freq - p) / sd;
        pass &= z.abs() <= 4.0;
        let _ = write!(detail, "n={n} x0={x0}: {freq:.4} vs {p:.4} (z = {z:.2}); ");
    }
    Property::new("urn-simulation", pass, detail.trim_end_matches("; ").to_string())
}

/// Triadic-median runs on a line: one-step moves of the token count left of
/// a central cut against the urn law, pooled by state, then a z-test per state.
fn projection_chain(samples: u64, seed: u64) -> Property {
    let (g, p) = generate(&GeneratorSpec::path(9)).expect("path");
    let cut = win_sets(&g, (3, 4)).expect("edge");
    let n = p.total();
    let mut tally = vec![[0u64; 3]; n as usize + 1];
    let mut rng = child_rng(seed, 0);
    let mut collected = 0;
    while collected < samples {
        let mut s = init_tokens(&p, 1).expect("k = 1");
        let count =
            |s: &crate::dynamics::TokenState| s.owners().iter().filter(|&&v| cut.side_u.contains(v)).count() as u64;
        while !s.is_terminal() && collected < samples {
            let before = count(&s);
            step(&g, &mut s, SelectionRule::TriadUniform, DecisionRule::GeneralizedMedianOfGroup, &mut rng)
                .expect("median graph");
            let after = count(&s);
            let slot = if after > before {
                0
            } else if after < before {
                1
            } else {
                2
            };
            tally[before as usize][slot] += 1;
            collected += 1;
        }
    }
    let mut worst = 0f64;
    for (x, t) in tally.iter().enumerate() {
        let total: u64 = t.iter().sum();
        if total == 0 {
            continue;
        }
        let (up, down, _) = urn_transition(n, x as u64).expect("in range");
        for (obs, prob) in [(t[0], up), (t[1], down)] {
            let sd = (total as f64 * prob * (1.0 - prob)).sqrt();
            if sd > 0.0 {
                worst = worst.max((obs as f64 - total as f64 * prob).abs() / sd);
            } else if obs > 0 {
                worst = f64::INFINITY;
            }
        }
    }
    Property::new("projection-chain", worst <= 5.0, format!("{samples} steps on path-9, max |z| = {worst:.2}"))
}

/// Once every token lies on one side of a cut, it stays there.
fn monotone_support(runs: u64, seed: u64) -> Property {
    let (g, p) = generate(&GeneratorSpec::grid(4, 4)).expect("grid");
    let cuts = theta_decomposition(&g).expect("median");
    let mut violations = 0u64;
    for r in 0..runs {
        let mut rng = child_rng(seed, r);
        let mut s = init_tokens(&p, 1).expect("k = 1");
        let mut settled: Vec<Option<bool>> = vec![None; cuts.len()];
        while !s.is_terminal() {
            step(&g, &mut s, SelectionRule::TriadUniform, DecisionRule::GeneralizedMedianOfGroup, &mut rng)
                .expect("median graph");
            for (c, cut) in cuts.cuts.iter().enumerate() {
                let on_u = s.owners().iter().filter(|&&v| cut.side_u.contains(v)).count();
                let side = if on_u == s.total_tokens() {
                    Some(true)
                } else if on_u == 0 {
                    Some(false)
                } else {
                    None
                };
                match (settled[c], side) {
                    (Some(prev), now) if now != Some(prev) => violations += 1,
                    (None, Some(now)) => settled[c] = Some(now),
                    _ => {}
                }
            }
        }
    }
    Property::new("monotone-support", violations == 0, format!("{runs} runs on grid-4x4, {violations} violations"))
}

fn local_consistency(seed: u64) -> Property {
    let mut rng = child_rng(seed, 0);
    let mid = check_local_consistency(DecisionRule::DyadicSymmetricMidpoint, 9, 400, &mut rng).unwrap_or(false);
    let end = check_local_consistency(DecisionRule::DyadicRandomEndpoint, 9, 400, &mut rng).unwrap_or(false);
    Property::new("local-consistency", mid && end, format!("midpoint {mid}, endpoint {end}"))
}

/// Runs the property suites at `level`; output is a function of the seed.
pub fn run_suite(level: Level, seed: u64) -> Vec<Property> {
    let corpus = corpus();
    let full = level == Level::Full;
    let mut props = vec![characterization(if full { 8 } else { 7 }), corpus_labels(&corpus)];
    props.extend(graph_lemmas(&corpus));
    props.extend(bargaining_lemmas(&corpus, if full { 32 } else { 16 }));
    props.push(urn_agreement(if full { 200 } else { 50 }));
    props.push(local_consistency(derive_seed(seed, 1)));
    if full {
        props.push(truthful_rounds(&corpus, derive_seed(seed, 2)));
        props.push(deviation_safety(&corpus, 1000, derive_seed(seed, 3)));
        props.push(urn_simulation(100_000, derive_seed(seed, 4)));
        props.push(projection_chain(100_000, derive_seed(seed, 5)));
        props.push(monotone_support(200, derive_seed(seed, 6)));
    } else {
        props.push(deviation_safety(&corpus, 200, derive_seed(seed, 3)));
        props.push(urn_simulation(10_000, derive_seed(seed, 4)));
        props.push(projection_chain(20_000, derive_seed(seed, 5)));
        props.push(monotone_support(30, derive_seed(seed, 6)));
    }
    props
}
