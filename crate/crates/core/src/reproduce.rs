//! Named reproduction experiments. Each takes its registered parameters
//! (sizes, trial counts, seed, tolerances) and reports observed values next
//! to the expectation they are judged against.

use serde::{Deserialize, Serialize};

use crate::analytics::{run_experiment, stats, AnalyticsError, Dynamic, ExperimentConfig, TrialReport};
use crate::dynamics::{init_tokens, step, token_mean, DecisionRule};
use crate::generate::{generate, grid_node, star_root_profile_near_even, Family, GeneratorSpec, ProfileSpec};
use crate::graph::NodeId;
use crate::rng::child_rng;

pub const NAMES: [&str; 8] = [
    "fig5-tree",
    "fig5-grid",
    "grid-theorem",
    "tree-theorem",
    "star-theorem",
    "dyadic-lowerbound",
    "time-scaling",
    "approx-scaling",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
}

impl Check {
    fn new(label: impl Into<String>, observed: impl Into<String>, expected: impl Into<String>, pass: bool) -> Self {
        Check { label: label.into(), observed: observed.into(), expected: expected.into(), pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}: {} observed {} (expected {})\n",
                if c.pass { "PASS" } else { "FAIL" },
                self.name,
                c.label,
                c.observed,
                c.expected
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig5Tree {
    pub height: usize,
    pub tokens: u64,
    pub trials: u64,
    pub seed: u64,
    pub root_target: f64,
    pub root_tolerance: f64,
    pub top3_min: f64,
}

impl Default for Fig5Tree {
    fn default() -> Self {
        Fig5Tree {
            height: 10,
            tokens: 5,
            trials: 1000,
            seed: 5101,
            root_target: 0.639,
            root_tolerance: 0.05,
            top3_min: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig5Grid {
    pub side: usize,
    pub tokens: u64,
    pub trials: u64,
    pub seed: u64,
    pub center_target: f64,
    pub center_tolerance: f64,
    pub middle9_min: f64,
}

impl Default for Fig5Grid {
    fn default() -> Self {
        Fig5Grid {
            side: 21,
            tokens: 5,
            trials: 1000,
            seed: 5102,
            center_target: 0.447,
            center_tolerance: 0.05,
            middle9_min: 0.985,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridTheorem {
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub center_min: f64,
}

impl Default for GridTheorem {
    fn default() -> Self {
        GridTheorem { k: 5, trials: 2000, seed: 5103, center_min: 0.985 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeTheorem {
    pub height: usize,
    pub trials: u64,
    pub seed: u64,
    pub top3_min: f64,
}

impl Default for TreeTheorem {
    fn default() -> Self {
        TreeTheorem { height: 7, trials: 2000, seed: 5104, top3_min: 0.98 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarTheorem {
    pub leaves: usize,
    pub participants: u64,
    pub trials: u64,
    pub seed: u64,
    /// Root masses tried, as multiples of `⌈√(n ln n)⌉`; the last is the headline.
    pub multipliers: Vec<u64>,
    pub root_min: f64,
    pub monotone_sigmas: f64,
}

impl Default for StarTheorem {
    fn default() -> Self {
        StarTheorem {
            leaves: 20,
            participants: 400,
            trials: 1000,
            seed: 5105,
            multipliers: vec![1, 2, 3],
            root_min: 0.90,
            monotone_sigmas: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadicLowerBound {
    pub k: usize,
    pub runs: u64,
    pub seed: u64,
    pub min_mean_ratio: f64,
    pub drift_steps: u64,
    pub drift_sigmas: f64,
}

impl Default for DyadicLowerBound {
    fn default() -> Self {
        DyadicLowerBound { k: 50, runs: 500, seed: 5106, min_mean_ratio: 1.10, drift_steps: 100_000, drift_sigmas: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeScaling {
    pub sizes: Vec<usize>,
    pub runs: u64,
    pub seed: u64,
    /// Each normalized median may exceed its predecessor by this fraction.
    pub allowance: f64,
}

impl Default for TimeScaling {
    fn default() -> Self {
        TimeScaling { sizes: vec![101, 401, 1601], runs: 100, seed: 5107, allowance: 0.10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxScaling {
    pub headline_size: usize,
    pub headline_runs: u64,
    pub p95_max: f64,
    pub mean_max: f64,
    pub sizes: Vec<usize>,
    pub runs: u64,
    pub min_shrink: f64,
    pub seed: u64,
}

impl Default for ApproxScaling {
    fn default() -> Self {
        ApproxScaling {
            headline_size: 1001,
            headline_runs: 200,
            p95_max: 1.10,
            mean_max: 1.03,
            sizes: vec![101, 401, 1601],
            runs: 200,
            min_shrink: 1.5,
            seed: 5108,
        }
    }
}

/// Registered parameters for every reproduction.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Registry {
    #[serde(rename = "fig5-tree")]
    pub fig5_tree: Fig5Tree,
    #[serde(rename = "fig5-grid")]
    pub fig5_grid: Fig5Grid,
    #[serde(rename = "grid-theorem")]
    pub grid_theorem: GridTheorem,
    #[serde(rename = "tree-theorem")]
    pub tree_theorem: TreeTheorem,
    #[serde(rename = "star-theorem")]
    pub star_theorem: StarTheorem,
    #[serde(rename = "dyadic-lowerbound")]
    pub dyadic_lowerbound: DyadicLowerBound,
    #[serde(rename = "time-scaling")]
    pub time_scaling: TimeScaling,
    #[serde(rename = "approx-scaling")]
    pub approx_scaling: ApproxScaling,
}

impl Registry {
    /// Runs the named reproduction; `None` for an unknown name.
    pub fn run(&self, name: &str) -> Option<Result<Outcome, AnalyticsError>> {
        Some(match name {
            "fig5-tree" => fig5_tree(&self.fig5_tree),
            "fig5-grid" => fig5_grid(&self.fig5_grid),
            "grid-theorem" => grid_theorem(&self.grid_theorem),
            "tree-theorem" => tree_theorem(&self.tree_theorem),
            "star-theorem" => star_theorem(&self.star_theorem),
            "dyadic-lowerbound" => dyadic_lowerbound(&self.dyadic_lowerbound),
            "time-scaling" => time_scaling(&self.time_scaling),
            "approx-scaling" => approx_scaling(&self.approx_scaling),
            _ => return None,
        })
    }
}

fn rate_with_ci(report: &TrialReport, nodes: &[NodeId]) -> (f64, String) {
    let n = report.trials.len() as u64;
    let rate = report.win_rate(nodes);
    let wins = (rate * n as f64).round() as u64;
    let ci = crate::analytics::wilson_interval(wins, n.max(1), 0.95).unwrap_or((0.0, 1.0));
    (rate, format!("{rate:.4} [95% CI {:.4}, {:.4}]", ci.0, ci.1))
}

fn experiment(
    spec: GeneratorSpec,
    dynamic: Dynamic,
    tokens: u64,
    trials: u64,
    seed: u64,
) -> Result<TrialReport, AnalyticsError> {
    run_experiment(&ExperimentConfig { spec, dynamic, tokens, trials, step_cap: None }, seed)
}

pub fn fig5_tree(p: &Fig5Tree) -> Result<Outcome, AnalyticsError> {
    let r = experiment(GeneratorSpec::binary_tree(p.height), Dynamic::Restricted, p.tokens, p.trials, p.seed)?;
    let (root, root_s) = rate_with_ci(&r, &[0]);
    let (top, top_s) = rate_with_ci(&r, &[0, 1, 2]);
    Ok(Outcome {
        name: "fig5-tree".into(),
        checks: vec![
            Check::new(
                "root win rate",
                root_s,
                format!("{} ± {}", p.root_target, p.root_tolerance),
                (root - p.root_target).abs() <= p.root_tolerance,
            ),
            Check::new("top-3 win rate", top_s, format!("≥ {}", p.top3_min), top >= p.top3_min),
        ],
    })
}

pub fn fig5_grid(p: &Fig5Grid) -> Result<Outcome, AnalyticsError> {
    let r = experiment(GeneratorSpec::grid(p.side, p.side), Dynamic::Restricted, p.tokens, p.trials, p.seed)?;
    let sides = [p.side, p.side];
    let c = p.side / 2;
    let middle: Vec<NodeId> =
        (c - 1..=c + 1).flat_map(|row| (c - 1..=c + 1).map(move |col| grid_node(&sides, &[row, col]))).collect();
    let (center, center_s) = rate_with_ci(&r, &[grid_node(&sides, &[c, c])]);
    let (mid, mid_s) = rate_with_ci(&r, &middle);
    Ok(Outcome {
        name: "fig5-grid".into(),
        checks: vec![
            Check::new(
                "center win rate",
                center_s,
                format!("{} ± {}", p.center_target, p.center_tolerance),
                (center - p.center_target).abs() <= p.center_tolerance,
            ),
            Check::new("middle-9 win rate", mid_s, format!("≥ {}", p.middle9_min), mid >= p.middle9_min),
        ],
    })
}

pub fn grid_theorem(p: &GridTheorem) -> Result<Outcome, AnalyticsError> {
    let r = experiment(GeneratorSpec::grid_nine(p.k), Dynamic::TriadMedian, 1, p.trials, p.seed)?;
    let c = p.k / 2;
    let (rate, s) = rate_with_ci(&r, &[grid_node(&[p.k, p.k], &[c, c])]);
    Ok(Outcome {
        name: "grid-theorem".into(),
        checks: vec![Check::new("center win rate", s, format!("≥ {}", p.center_min), rate >= p.center_min)],
    })
}

pub fn tree_theorem(p: &TreeTheorem) -> Result<Outcome, AnalyticsError> {
    let r = experiment(GeneratorSpec::binary_tree(p.height), Dynamic::TriadMedian, 1, p.trials, p.seed)?;
    let (rate, s) = rate_with_ci(&r, &[0, 1, 2]);
    Ok(Outcome {
        name: "tree-theorem".into(),
        checks: vec![Check::new("root-or-child win rate", s, format!("≥ {}", p.top3_min), rate >= p.top3_min)],
    })
}

/// `⌈√(n ln n)⌉`.
pub fn star_unit(n: u64) -> u64 {
    let nf = n as f64;
    (nf * nf.ln()).sqrt().ceil() as u64
}

pub fn star_theorem(p: &StarTheorem) -> Result<Outcome, AnalyticsError> {
    let unit = star_unit(p.participants);
    let g = Family::Star { leaves: p.leaves }.build()?;
    let mut rates = Vec::new();
    let mut checks = Vec::new();
    for (i, &m) in p.multipliers.iter().enumerate() {
        let j = m * unit;
        let profile = star_root_profile_near_even(&g, p.leaves, j, p.participants)?;
        let spec =
            GeneratorSpec::new(Family::Star { leaves: p.leaves }, ProfileSpec::Counts(profile.support().collect()));
        let r = experiment(spec, Dynamic::Restricted, 1, p.trials, p.seed.wrapping_add(i as u64))?;
        let (rate, s) = rate_with_ci(&r, &[0]);
        checks.push(Check::new(format!("root win rate at j = {j}"), s, "reported", true));
        rates.push(rate);
    }
    let n = p.trials as f64;
    for w in rates.windows(2).zip(p.multipliers.windows(2)) {
        let ([a, b], [ma, mb]) = (w.0, w.1) else { unreachable!() };
        let se = (a * (1.0 - a) / n + b * (1.0 - b) / n).sqrt();
        checks.push(Check::new(
            format!("monotone from {ma}x to {mb}x"),
            format!("{a:.4} -> {b:.4}"),
            format!("later ≥ earlier − {}·{se:.4}", p.monotone_sigmas),
            *b >= a - p.monotone_sigmas * se,
        ));
    }
    if let Some(&last) = rates.last() {
        checks.push(Check::new(
            format!("root win rate at j = {}", p.multipliers.last().unwrap() * unit),
            format!("{last:.4}"),
            format!("≥ {}", p.root_min),
            last >= p.root_min,
        ));
    }
    Ok(Outcome { name: "star-theorem".into(), checks })
}

/// Mean and standard error of the per-round change in token mean, over
/// `steps` rounds of `rule` started from `spec` and restarted on consensus.
pub fn token_mean_drift(
    spec: &GeneratorSpec,
    rule: DecisionRule,
    steps: u64,
    seed: u64,
) -> Result<(f64, f64), AnalyticsError> {
    let (g, p) = generate(spec)?;
    let mut increments = Vec::with_capacity(steps as usize);
    let mut restart = 0;
    while (increments.len() as u64) < steps {
        let mut rng = child_rng(seed, restart);
        restart += 1;
        let mut s = init_tokens(&p, 1)?;
        let mut mean = token_mean(&s, |v| v as f64);
        while !s.is_terminal() && (increments.len() as u64) < steps {
            step(&g, &mut s, rule.selection(), rule, &mut rng)?;
            let next = token_mean(&s, |v| v as f64);
            increments.push(next - mean);
            mean = next;
        }
    }
    let m = stats::mean(&increments).unwrap_or(0.0);
    let se = stats::variance(&increments).unwrap_or(0.0).sqrt() / (increments.len() as f64).sqrt();
    Ok((m, se))
}

pub fn dyadic_lowerbound(p: &DyadicLowerBound) -> Result<Outcome, AnalyticsError> {
    let spec = GeneratorSpec::dyadic_counterexample(p.k);
    let mut checks = Vec::new();
    for (i, dynamic) in [Dynamic::DyadMidpoint, Dynamic::DyadEndpoint].into_iter().enumerate() {
        let seed = p.seed.wrapping_add(i as u64);
        let r = experiment(spec.clone(), dynamic, 1, p.runs, seed)?;
        let ratios = r.ratios();
        let mean = stats::mean(&ratios).unwrap_or(f64::NAN);
        checks.push(Check::new(
            format!("{dynamic} mean ratio"),
            format!("{mean:.4} over {} of {} runs", ratios.len(), p.runs),
            format!("≥ {}", p.min_mean_ratio),
            mean >= p.min_mean_ratio && ratios.len() as u64 == p.runs,
        ));
        let (drift, se) = token_mean_drift(&spec, dynamic.decision(), p.drift_steps, seed ^ 0xD1F7)?;
        checks.push(Check::new(
            format!("{dynamic} token-mean drift"),
            format!("{drift:.3e} (se {se:.3e})"),
            format!("|drift| ≤ {}·se", p.drift_sigmas),
            drift.abs() <= p.drift_sigmas * se,
        ));
    }
    Ok(Outcome { name: "dyadic-lowerbound".into(), checks })
}

pub fn time_scaling(p: &TimeScaling) -> Result<Outcome, AnalyticsError> {
    let mut normalized = Vec::new();
    let mut checks = Vec::new();
    for (i, &n) in p.sizes.iter().enumerate() {
        let r = experiment(GeneratorSpec::path(n), Dynamic::TriadMedian, 1, p.runs, p.seed.wrapping_add(i as u64))?;
        let all_done = r.converged() == p.runs;
        let med = stats::median(&r.rounds()).unwrap_or(f64::NAN);
        let nf = n as f64;
        let v = med / (nf * nf.ln().powi(2));
        checks.push(Check::new(
            format!("n = {n} median T/(n ln²n)"),
            format!("{v:.4} (median T {med})"),
            "all runs converge",
            all_done,
        ));
        normalized.push((n, v));
    }
    for w in normalized.windows(2) {
        let ((na, a), (nb, b)) = (w[0], w[1]);
        checks.push(Check::new(
            format!("non-increasing {na} -> {nb}"),
            format!("{a:.4} -> {b:.4}"),
            format!("≤ {:.4}", a * (1.0 + p.allowance)),
            b <= a * (1.0 + p.allowance),
        ));
    }
    Ok(Outcome { name: "time-scaling".into(), checks })
}

pub fn approx_scaling(p: &ApproxScaling) -> Result<Outcome, AnalyticsError> {
    let mut checks = Vec::new();
    let head = experiment(GeneratorSpec::path(p.headline_size), Dynamic::TriadMedian, 1, p.headline_runs, p.seed)?;
    let ratios = head.ratios();
    let p95 = stats::quantile(&ratios, 0.95).unwrap_or(f64::NAN);
    let mean = stats::mean(&ratios).unwrap_or(f64::NAN);
    checks.push(Check::new(
        format!("n = {} p95 ratio", p.headline_size),
        format!("{p95:.4}"),
        format!("≤ {}", p.p95_max),
        p95 <= p.p95_max,
    ));
    checks.push(Check::new(
        format!("n = {} mean ratio", p.headline_size),
        format!("{mean:.4}"),
        format!("≤ {}", p.mean_max),
        mean <= p.mean_max,
    ));
    let mut excess = Vec::new();
    for (i, &n) in p.sizes.iter().enumerate() {
        let r = experiment(GeneratorSpec::path(n), Dynamic::TriadMedian, 1, p.runs, p.seed.wrapping_add(1 + i as u64))?;
        let ratios = r.ratios();
        let q = stats::quantile(&ratios, 0.95).unwrap_or(f64::NAN);
        let m = stats::mean(&ratios).unwrap_or(f64::NAN);
        checks.push(Check::new(format!("n = {n} ratio"), format!("p95 {q:.5}, mean {m:.5}"), "reported", true));
        excess.push((n, q - 1.0));
    }
    for w in excess.windows(2) {
        let ((na, a), (nb, b)) = (w[0], w[1]);
        checks.push(Check::new(
            format!("p95 excess shrink {na} -> {nb}"),
            format!("{a:.5} -> {b:.5} (x{:.2})", a / b),
            format!("x ≥ {}", p.min_shrink),
            b <= a / p.min_shrink,
        ));
    }
    Ok(Outcome { name: "approx-scaling".into(), checks })
}
