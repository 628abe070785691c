//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned here.
//! Pass criterion numbers as arguments to run a subset.

use std::time::Instant;

use rand::Rng;
use tcl_core::analytics::{
    absorption_solver, run_experiment, run_trials, urn_closed_form, Dynamic, ExperimentConfig, TrialReport,
};
use tcl_core::dynamics::{init_tokens, run_star, step, StarNode, StarState};
use tcl_core::generate::{
    connected_graph_masks, generate, graph_from_mask, grid_node, star_root_profile_near_even, Family, GeneratorSpec,
    ProfileSpec,
};
use tcl_core::graph::{is_median_graph, median_unique, NodeId, OpinionGraph};
use tcl_core::rng::{child_rng, seeded};
use tcl_core::tmr::{
    run_strategic_ldsg, run_tmr_round, InitialAssignment, NeverEnd, SelfProposer, StrategicCaps, Strategy,
    StrategyAssignment, TruthfulBargaining, UniformRandomProposer,
};
use tcl_core::verify::corpus;

struct Verdict {
    pass: bool,
    detail: String,
    /// A failure whose cause is documented as unattainable by construction.
    known: Option<&'static str>,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail, known: None }
}

// ---------- independent oracles (test-side only) ----------

/// Brute-force Condorcet winner of three voters from raw distances.
fn condorcet_oracle(g: &OpinionGraph, voters: [NodeId; 3]) -> Option<NodeId> {
    let n = g.node_count();
    (0..n).find(|&c| {
        (0..n).all(|a| {
            if a == c {
                return true;
            }
            let (mut pro, mut con) = (0, 0);
            for &v in &voters {
                let (dc, da) = (g.distance(v, c), g.distance(v, a));
                if dc < da {
                    pro += 1;
                } else if da < dc {
                    con += 1;
                }
            }
            pro > con
        })
    })
}

/// All minimizers of the summed distance to three voters.
fn median_oracle(g: &OpinionGraph, voters: [NodeId; 3]) -> Vec<NodeId> {
    let cost = |c: NodeId| voters.iter().map(|&v| g.distance(v, c)).sum::<u32>();
    let best = g.nodes().map(cost).min().unwrap();
    g.nodes().filter(|&c| cost(c) == best).collect()
}

/// Nearest-rank quantile.
fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v[((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1]
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn rate(r: &TrialReport, nodes: &[NodeId]) -> f64 {
    r.trials.iter().filter(|t| t.winner.is_some_and(|w| nodes.contains(&w))).count() as f64 / r.trials.len() as f64
}

fn experiment(spec: GeneratorSpec, dynamic: Dynamic, tokens: u64, trials: u64, seed: u64) -> TrialReport {
    run_experiment(&ExperimentConfig { spec, dynamic, tokens, trials, step_cap: None }, seed).expect("experiment runs")
}

// ---------- criteria ----------

fn c1_characterization() -> Verdict {
    let mut graphs: Vec<(String, OpinionGraph)> = Vec::new();
    for n in 1..=7 {
        for mask in connected_graph_masks(n) {
            graphs.push((format!("n{n}:{mask:#x}"), graph_from_mask(n, mask)));
        }
    }
    let enumerated = graphs.len();
    let mut families = vec![];
    for l in 1..=12 {
        families.push(Family::Path { length: l });
    }
    for (r, c) in [(2, 2), (2, 5), (3, 3), (3, 4), (4, 5)] {
        families.push(Family::Grid { sides: vec![r, c] });
    }
    families.push(Family::Grid { sides: vec![3, 3, 3] });
    for (b, h) in [(2, 1), (2, 3), (2, 4), (3, 2), (4, 2)] {
        families.push(Family::Tree { branching: b, height: h });
    }
    for l in [1, 3, 8, 15] {
        families.push(Family::Star { leaves: l });
    }
    for d in 1..=4 {
        families.push(Family::Hypercube { dim: d });
    }
    for l in 3..=10 {
        families.push(Family::Cycle { length: l });
    }
    for k in 1..=6 {
        families.push(Family::Complete { nodes: k });
    }
    for f in families {
        graphs.push((format!("{f:?}"), f.build().unwrap()));
    }
    for inst in corpus() {
        graphs.push((inst.name, inst.graph));
    }
    let results: Vec<(bool, bool, bool)> = {
        use rayon::prelude::*;
        graphs
            .par_iter()
            .map(|(_, g)| {
                let n = g.node_count();
                let label = is_median_graph(g);
                let mut all_condorcet = true;
                let mut winners_match = true;
                for x in 0..n {
                    for y in x..n {
                        for z in y..n {
                            let w = condorcet_oracle(g, [x, y, z]);
                            all_condorcet &= w.is_some();
                            if label {
                                let m = median_oracle(g, [x, y, z]);
                                winners_match &=
                                    w.is_some() && m == vec![w.unwrap()] && median_unique(g, x, y, z) == m[0];
                            }
                        }
                    }
                }
                (label == all_condorcet && label == g.is_median(), label, winners_match)
            })
            .collect()
    };
    let disagreements = results.iter().filter(|r| !r.0).count();
    let median = results.iter().filter(|r| r.1).count();
    let winner_mismatch = results.iter().filter(|r| r.1 && !r.2).count();
    verdict(
        disagreements == 0 && winner_mismatch == 0,
        format!(
            "{} graphs ({enumerated} connected graphs on ≤ 7 nodes + families + corpus), {median} median; \
             {disagreements} label disagreements, {winner_mismatch} median instances where a Condorcet winner ≠ generalized median",
            graphs.len()
        ),
    )
}

fn c2_urn() -> Verdict {
    // closed form from the binomial pmf, accumulated in log space
    let closed = |n: u64, x0: u64| -> f64 {
        let m = n - 1;
        let mut log_c = 0.0f64; // ln C(m, 0)
        let mut s = 0.0;
        for j in 0..x0 {
            s += (log_c - m as f64 * std::f64::consts::LN_2).exp();
            if j < m {
                log_c += ((m - j) as f64).ln() - ((j + 1) as f64).ln();
            }
        }
        s
    };
    let mut worst_lib = 0f64;
    let mut worst_oracle = 0f64;
    for n in 1..=200u64 {
        let r = absorption_solver(n).unwrap();
        for x0 in 0..=n {
            let h = r.hit_n[x0 as usize];
            worst_lib = worst_lib.max((urn_closed_form(n, x0).unwrap() - h).abs());
            worst_oracle = worst_oracle.max((closed(n, x0) - h).abs());
        }
    }
    // simulation, stepping the chain directly
    let simulate = |n: u64, x0: u64, seed: u64| -> f64 {
        let runs = 100_000u64;
        let hits: u64 = run_trials(runs, seed, |_, rng| {
            let mut x = x0;
            let nf = n as f64;
            while x != 0 && x != n {
                let xf = x as f64;
                let up = 3.0 * xf * xf * (nf - xf) / nf.powi(3);
                let down = 3.0 * xf * (nf - xf) * (nf - xf) / nf.powi(3);
                let u: f64 = rng.random();
                if u < up {
                    x += 1;
                } else if u < up + down {
                    x -= 1;
                }
            }
            u64::from(x == n)
        })
        .into_iter()
        .sum();
        hits as f64 / runs as f64
    };
    let mut zs = Vec::new();
    for (n, x0, seed) in [(10u64, 3u64, 21u64), (50, 20, 22)] {
        let p = absorption_solver(n).unwrap().hit_n[x0 as usize];
        let f = simulate(n, x0, seed);
        zs.push((n, x0, f, p, (f - p) / (p * (1.0 - p) / 100_000.0).sqrt()));
    }
    let mut worst_slack = f64::INFINITY;
    let mut constant = f64::NEG_INFINITY;
    for n in 2..=500u64 {
        let t = absorption_solver(n).unwrap().max_expected_time();
        let nf = n as f64;
        worst_slack = worst_slack.min(nf * nf.ln() + 5.0 * nf - t);
        constant = constant.max((t - nf * nf.ln()) / nf);
    }
    let sim_ok = zs.iter().all(|z| z.4.abs() <= 4.0);
    let sims: Vec<String> =
        zs.iter().map(|(n, x0, f, p, z)| format!("n={n} x0={x0}: {f:.4} vs {p:.4} (z {z:+.2})")).collect();
    verdict(
        worst_lib <= 1e-10 && worst_oracle <= 1e-10 && sim_ok && worst_slack >= 0.0,
        format!(
            "closed form vs solver n ≤ 200: max |Δ| {worst_lib:.1e} (library), {worst_oracle:.1e} (log-space oracle); {}; \
             max E[T] ≤ n ln n + 5n for n ≤ 500 with min slack {worst_slack:.1} (measured constant (E[T] − n ln n)/n ≤ {constant:.3})",
            sims.join(", ")
        ),
    )
}

fn c3_fig5() -> Verdict {
    let tree = experiment(GeneratorSpec::binary_tree(10), Dynamic::Restricted, 5, 1000, 0xF15_7EE);
    let grid = experiment(GeneratorSpec::grid(21, 21), Dynamic::Restricted, 5, 1000, 0xF15_6D1);
    let sides = [21, 21];
    let middle: Vec<NodeId> = (9..=11).flat_map(|r| (9..=11).map(move |c| grid_node(&sides, &[r, c]))).collect();
    let (root, top3) = (rate(&tree, &[0]), rate(&tree, &[0, 1, 2]));
    let (center, mid9) = (rate(&grid, &[grid_node(&sides, &[10, 10])]), rate(&grid, &middle));
    verdict(
        (root - 0.639).abs() <= 0.05 && top3 >= 0.99 && (center - 0.447).abs() <= 0.05 && mid9 >= 0.985,
        format!(
            "tree h=10 (2047 nodes, 10235 tokens): root {root:.3} (0.639 ± 0.05), top-3 {top3:.3} (≥ 0.99); \
             grid 21×21 (2205 tokens): center {center:.3} (0.447 ± 0.05), middle-9 {mid9:.3} (≥ 0.985)"
        ),
    )
}

fn c4_grid_theorem() -> Verdict {
    let r = experiment(GeneratorSpec::grid_nine(5), Dynamic::TriadMedian, 1, 2000, 0x6D1D);
    let tokens = r.trials.len();
    let c = rate(&r, &[grid_node(&[5, 5], &[2, 2])]);
    verdict(c >= 0.985, format!("grid_nine(5), n = 225, {tokens} trials: exact-center win rate {c:.4} (≥ 0.985)"))
}

fn c5_tree_theorem() -> Verdict {
    let r = experiment(GeneratorSpec::binary_tree(7), Dynamic::TriadMedian, 1, 2000, 0x7EE7);
    let top = rate(&r, &[0, 1, 2]);
    verdict(top >= 0.98, format!("binary tree h=7, n = 255, 2000 trials: root-or-child rate {top:.4} (≥ 0.98)"))
}

fn c6_star_theorem() -> Verdict {
    let n = 400u64;
    let unit = ((n as f64) * (n as f64).ln()).sqrt().ceil() as u64;
    let g = Family::Star { leaves: 20 }.build().unwrap();
    let mut rates = Vec::new();
    for (i, m) in [1u64, 2, 3].into_iter().enumerate() {
        let p = star_root_profile_near_even(&g, 20, m * unit, n).unwrap();
        let spec = GeneratorSpec::new(Family::Star { leaves: 20 }, ProfileSpec::Counts(p.support().collect()));
        let r = experiment(spec, Dynamic::Restricted, 1, 1000, 0x57A2 + i as u64);
        rates.push((m * unit, rate(&r, &[0])));
    }
    let monotone = rates.windows(2).all(|w| {
        let (a, b) = (w[0].1, w[1].1);
        let se = (a * (1.0 - a) / 1000.0 + b * (1.0 - b) / 1000.0).sqrt();
        b >= a - 2.0 * se
    });
    let headline = rates[2].1;
    verdict(
        headline >= 0.90 && monotone,
        format!(
            "20 leaves, n = 400, unit ⌈√(n ln n)⌉ = {unit}: root win rates {} (headline ≥ 0.90, monotone within 2σ)",
            rates.iter().map(|(j, r)| format!("j={j}: {r:.3}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c7_dyadic() -> Verdict {
    let spec = GeneratorSpec::dyadic_counterexample(50);
    let (g, p) = generate(&spec).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, dynamic) in [Dynamic::DyadMidpoint, Dynamic::DyadEndpoint].into_iter().enumerate() {
        let r = experiment(spec.clone(), dynamic, 1, 500, 0xD1AD + i as u64);
        let ratios: Vec<f64> = r.trials.iter().filter_map(|t| t.ratio).collect();
        let m = mean(&ratios);
        // token-mean increments, computed from the owner list
        let mut inc = Vec::with_capacity(100_000);
        let mut restart = 0;
        while inc.len() < 100_000 {
            let mut rng = child_rng(0xD21F7 + i as u64, restart);
            restart += 1;
            let mut s = init_tokens(&p, 1).unwrap();
            let avg =
                |s: &tcl_core::dynamics::TokenState| s.owners().iter().sum::<usize>() as f64 / s.total_tokens() as f64;
            let mut prev = avg(&s);
            while !s.is_terminal() && inc.len() < 100_000 {
                step(&g, &mut s, dynamic.selection(), dynamic.decision(), &mut rng).unwrap();
                let now = avg(&s);
                inc.push(now - prev);
                prev = now;
            }
        }
        let drift = mean(&inc);
        let se = sd(&inc) / (inc.len() as f64).sqrt();
        let ok = ratios.len() == 500 && m >= 1.10 && drift.abs() <= 4.0 * se;
        pass &= ok;
        parts.push(format!(
            "{dynamic}: mean ratio {m:.4} over {} runs (≥ 1.10), drift {drift:+.2e} vs 4σ = {:.2e}",
            ratios.len(),
            4.0 * se
        ));
    }
    verdict(pass, format!("k = 50 (n = 101; 9/8 = 1.125): {}", parts.join("; ")))
}

fn ratio_stats(n: usize, runs: u64, seed: u64) -> (f64, f64) {
    let r = experiment(GeneratorSpec::path(n), Dynamic::TriadMedian, 1, runs, seed);
    // D(x*) on the uniform path 0..n−1 computed directly
    let cost = |x: usize| (0..n).map(|v| v.abs_diff(x) as u64).sum::<u64>() as f64;
    let best = cost(n / 2);
    let ratios: Vec<f64> = r.trials.iter().map(|t| cost(t.winner.expect("converged")) / best).collect();
    (quantile(&ratios, 0.95), mean(&ratios))
}

fn c8_triadic_tightness() -> Verdict {
    let (p95, m) = ratio_stats(1001, 200, 0x7167);
    let series: Vec<(usize, f64, f64)> = [101usize, 401, 1601]
        .into_iter()
        .enumerate()
        .map(|(i, n)| {
            let (q, m) = ratio_stats(n, 200, 0x5CA1 + i as u64);
            (n, q, m)
        })
        .collect();
    let shrinks: Vec<f64> = series.windows(2).map(|w| (w[0].1 - 1.0) / (w[1].1 - 1.0)).collect();
    let pass = p95 <= 1.10 && m <= 1.03 && shrinks.iter().all(|&s| s >= 1.5);
    verdict(
        pass,
        format!(
            "path n=1001, 200 runs: p95 {p95:.4} (≤ 1.10), mean {m:.4} (≤ 1.03); p95 by n {}; excess shrink per 4× n {} (≥ 1.5)",
            series.iter().map(|(n, q, _)| format!("{n}: {q:.4}")).collect::<Vec<_>>().join(", "),
            shrinks.iter().map(|s| format!("{s:.2}×")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c9_time_scaling() -> Verdict {
    let norm: Vec<(usize, f64)> = [101usize, 401, 1601]
        .into_iter()
        .enumerate()
        .map(|(i, n)| {
            let r = experiment(GeneratorSpec::path(n), Dynamic::TriadMedian, 1, 100, 0x71AE + i as u64);
            assert!(r.trials.iter().all(|t| t.winner.is_some()), "a run hit its cap at n = {n}");
            let t: Vec<f64> = r.trials.iter().map(|t| t.rounds as f64).collect();
            let nf = n as f64;
            (n, median(&t) / (nf * nf.ln().powi(2)))
        })
        .collect();
    let pass = norm.windows(2).all(|w| w[1].1 <= w[0].1 * 1.10);
    verdict(
        pass,
        format!(
            "median T/(n ln²n): {} (non-increasing within 10%)",
            norm.iter().map(|(n, v)| format!("n={n}: {v:.4}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c10_truthful_rounds() -> Verdict {
    let t = TruthfulBargaining;
    let graphs = [
        ("path-20", GeneratorSpec::path(20)),
        ("grid-5x5", GeneratorSpec::grid(5, 5)),
        ("tree-h4", GeneratorSpec::binary_tree(4)),
    ];
    let mut rounds = 0u64;
    let (mut wrong_winner, mut two, mut one_at_median, mut other_steps) = (0u64, 0u64, 0u64, 0u64);
    let mut rng = seeded(10);
    for (_, spec) in &graphs {
        let (g, _) = generate(spec).unwrap();
        let n = g.node_count();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let group = [x, y, z];
                    let m = median_oracle(&g, group)[0];
                    for init in InitialAssignment::all() {
                        let InitialAssignment::Fixed { winner, .. } = init else { unreachable!() };
                        let r = run_tmr_round(&g, group, [&t, &t, &t], init, &mut rng, 10).unwrap();
                        rounds += 1;
                        wrong_winner += u64::from(r.winner() != Some(m));
                        match (r.steps, group[winner] == m) {
                            (2, false) => two += 1,
                            (1, true) => one_at_median += 1,
                            _ => other_steps += 1,
                        }
                    }
                }
            }
        }
    }
    let literal = wrong_winner == 0 && one_at_median == 0 && other_steps == 0;
    let detail = format!(
        "{rounds} rounds on path-20, grid-5x5, tree-h4: ŵ ≠ m(group) in {wrong_winner}; exactly 2 steps in {two}; \
         1 step in {one_at_median} (initial winner already m(group)); other step counts {other_steps}"
    );
    if literal {
        verdict(true, detail)
    } else if wrong_winner == 0 && other_steps == 0 {
        Verdict {
            pass: false,
            detail,
            known: Some(
                "when the initial winner already sits at m(group) no member has a bargaining point, so the first \
                 motion is END and it carries (T = 1); this includes every (x,x,x) group. ŵ = m(group) holds in all rounds",
            ),
        }
    } else {
        verdict(false, detail)
    }
}

fn c11_deviation() -> Verdict {
    let t = TruthfulBargaining;
    let deviators: [&dyn Strategy; 3] = [&UniformRandomProposer, &SelfProposer, &NeverEnd];
    let mut per_graph = Vec::new();
    let mut bad = 0u64;
    for (gi, inst) in corpus().into_iter().filter(|i| i.tmr).enumerate() {
        let g = &inst.graph;
        let n = g.node_count();
        let mut rng = child_rng(0xDE7, gi as u64);
        let (mut ended, mut capped) = (0u64, 0u64);
        for e in 0..2400u64 {
            let group = [rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)];
            let who = rng.random_range(0..3);
            let mut s: [&dyn Strategy; 3] = [&t, &t, &t];
            s[who] = deviators[(e % 3) as usize];
            let r = run_tmr_round(g, group, s, InitialAssignment::Random, &mut rng, 200).unwrap();
            match r.winner() {
                Some(w) => {
                    ended += 1;
                    let m = median_oracle(g, group)[0];
                    if g.distance(group[who], m) + g.distance(m, w) != g.distance(group[who], w) {
                        bad += 1;
                    }
                }
                None => capped += 1,
            }
        }
        per_graph.push(format!("{}: {ended} ended/{capped} capped", inst.name));
    }
    // paired strategic runs on a line of 9, coupled through the selection stream
    let (g, p) = generate(&GeneratorSpec::path(9)).unwrap();
    let caps = StrategicCaps { rounds: 100_000, steps_per_round: 200 };
    let episodes = 10_000u64;
    let pairs: Vec<(f64, f64, bool)> = run_trials(episodes, 0x1D9, |e, rng| {
        let x = (e % 9) as NodeId;
        let seed: u64 = rng.random();
        let dev_assign =
            StrategyAssignment::all_truthful().with_deviator(x, std::sync::Arc::new(UniformRandomProposer));
        let tru_assign = StrategyAssignment::all_truthful();
        let play = |a: &StrategyAssignment| {
            run_strategic_ldsg(
                &g,
                &p,
                1,
                a,
                InitialAssignment::Random,
                &mut seeded(seed),
                &mut seeded(!seed),
                caps,
                None,
            )
            .unwrap()
        };
        let (dev, tru) = (play(&dev_assign), play(&tru_assign));
        let utility = |w: Option<NodeId>| w.map_or(f64::NEG_INFINITY, |w| -(g.distance(x, w) as f64));
        let pathwise = match (dev.trace.winner, tru.trace.winner) {
            (Some(d), Some(t)) => g.distance(x, t) <= g.distance(x, d),
            _ => true,
        };
        (utility(dev.trace.winner), utility(tru.trace.winner), pathwise)
    });
    let diverged = pairs.iter().filter(|p| p.0.is_infinite()).count();
    let finite: Vec<(f64, f64)> =
        pairs.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).map(|p| (p.0, p.1)).collect();
    let diffs: Vec<f64> = finite.iter().map(|(d, t)| d - t).collect();
    let (dm, dse) = (mean(&diffs), sd(&diffs) / (diffs.len() as f64).sqrt());
    let dev_u: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let tru_u: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let quantiles_ok = (1..10).all(|i| quantile(&dev_u, i as f64 / 10.0) <= quantile(&tru_u, i as f64 / 10.0));
    let mean_dev = mean(&finite.iter().map(|p| p.0).collect::<Vec<_>>());
    let mean_tru = mean(&finite.iter().map(|p| p.1).collect::<Vec<_>>());
    let pathwise_violations = pairs.iter().filter(|p| !p.2).count();
    verdict(
        bad == 0 && dm <= 2.0 * dse && quantiles_ok && pathwise_violations == 0,
        format!(
            "rounds: {} with {bad} counterexamples to m ∈ I(deviator, ŵ); paired line-9 episodes: {episodes}, {diverged} deviating \
             runs never ended (utility −∞); over {} jointly terminating pairs mean utility {mean_dev:.4} deviating vs {mean_tru:.4} \
             truthful (Δ {dm:+.4}, 2σ {:.4}); deciles dominated: {quantiles_ok}; pathwise violations {pathwise_violations}",
            per_graph.join(", "),
            finite.len(),
            2.0 * dse
        ),
    )
}

fn c12_crtd() -> Verdict {
    let runs = 5000u64;
    let a = 5u64;
    let root_rate = |s: &StarState, concentrated: bool, seed: u64| -> f64 {
        let wins = run_trials(runs, seed, |_, rng| {
            run_star(s.clone(), concentrated, rng, 50_000_000).0 == Some(StarNode::Root)
        })
        .into_iter()
        .filter(|&w| w)
        .count();
        wins as f64 / runs as f64
    };
    let rest = 100 - a;
    let uneven = vec![9, 9, 8, 7, 6, 6, 5, 5, 5, 5, 5, 4, 4, 4, 3, 3, 2, 3, 1, 1];
    assert_eq!(uneven.iter().sum::<u64>(), rest);
    let mut concentrated_uneven = StarState::new(a, uneven.clone());
    tcl_core::dynamics::concentrate_leaves(&mut concentrated_uneven);
    let mut spread = vec![rest / 20; 20];
    for leaf in spread.iter_mut().take((rest % 20) as usize) {
        *leaf += 1;
    }
    let mut two_heavy = vec![0; 20];
    two_heavy[0] = rest - rest / 2;
    two_heavy[1] = rest / 2;
    let cases = [
        (
            "two leaves, matched",
            StarState::new(a, vec![rest - rest / 2, rest / 2]),
            StarState::new(a, vec![rest - rest / 2, rest / 2]),
        ),
        ("twenty leaves, matched truncation", StarState::new(a, uneven), concentrated_uneven),
        ("twenty leaves, RTD spread vs CRTD on two leaves", StarState::new(a, spread), StarState::new(a, two_heavy)),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (label, rtd, crtd)) in cases.iter().enumerate() {
        assert!(crtd.truncation().0 <= rtd.truncation().0 && crtd.truncation().1 >= rtd.truncation().1);
        let pr = root_rate(rtd, false, 0xC2D0 + 2 * i as u64);
        let pc = root_rate(crtd, true, 0xC2D1 + 2 * i as u64);
        let se = (pr * (1.0 - pr) / runs as f64 + pc * (1.0 - pc) / runs as f64).sqrt();
        let ok = pr >= pc - 2.0 * se;
        pass &= ok;
        parts.push(format!("{label}: RTD {pr:.4} vs CRTD {pc:.4} (2 SE {:.4})", 2.0 * se));
    }
    verdict(pass, format!("n = 100, root mass {a}, {runs} runs each: {}", parts.join("; ")))
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Verdict);
    let criteria: [Criterion; 12] = [
        (1, "characterization", c1_characterization),
        (2, "urn oracle", c2_urn),
        (3, "tree and grid win rates", c3_fig5),
        (4, "grid theorem", c4_grid_theorem),
        (5, "tree theorem", c5_tree_theorem),
        (6, "star theorem", c6_star_theorem),
        (7, "dyadic lower bound", c7_dyadic),
        (8, "triadic tightness", c8_triadic_tightness),
        (9, "time scaling", c9_time_scaling),
        (10, "TMR truthful play", c10_truthful_rounds),
        (11, "deviation property", c11_deviation),
        (12, "CRTD dominance", c12_crtd),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        let tag = match (v.pass, v.known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => "FAIL",
        };
        println!("{tag} [{id:>2}] {name}: {} [{secs:.1}s]", v.detail);
        if let Some(why) = v.known {
            println!("      known: {why}");
        }
        if !v.pass && v.known.is_none() {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
