use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tcl_core::analytics::{absorption_solver, run_experiment, AnalyticsError, Dynamic, ExperimentConfig};
use tcl_core::dynamics::DynamicsError;
use tcl_core::generate::parse_spec;
use tcl_core::graph::{generalized_median, theta_decomposition};
use tcl_core::reproduce::{Registry, NAMES};
use tcl_core::rng::seeded;
use tcl_core::tmr::{run_tmr_round, InitialAssignment, RoundOutcome, TmrError, TruthfulBargaining};
use tcl_core::verify::{self, Level};
use tcl_core::{generate, GenError};

const MANIFEST: &str = include_str!("../reproductions.toml");

#[derive(Parser)]
#[command(name = "tcl", version, about = "Token consensus dynamics and majority-rule bargaining on median graphs")]
struct Cli {
    /// Worker threads for parallel trials (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print structural facts about a spec's graph and profile.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run independent trials of a token dynamic and write the trial report.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        dynamic: String,
        /// Tokens per participant.
        #[arg(long, default_value_t = 1)]
        tokens: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Interaction cap per trial (default grows as n ln²n).
        #[arg(long)]
        cap: Option<u64>,
        /// Output directory; receives trials.csv and aggregate.json.
        #[arg(long)]
        out: PathBuf,
        /// Write only one of the two files.
        #[arg(long)]
        format: Option<Format>,
    },
    /// Play one truthful bargaining round among the three opinions of a spec.
    Tmr {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Proposal-step cap.
        #[arg(long, default_value_t = 100)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact absorption probabilities and expected times of the n-token urn chain.
    Oracle {
        /// Number of tokens n.
        #[arg(long)]
        tokens: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a registered reproduction and compare against its tolerances.
    Reproduce {
        /// One of: fig5-tree, fig5-grid, grid-theorem, tree-theorem, star-theorem,
        /// dyadic-lowerbound, time-scaling, approx-scaling.
        name: String,
    },
    /// Run the cross-module property suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// Failure classes, each with its own exit code.
enum Failure {
    /// Bad flags or spec.
    Usage(String),
    /// The computation itself failed.
    Runtime(String),
    /// Ran fine, but a tolerance or property check did not hold.
    Check,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<AnalyticsError> for Failure {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::Generate(e) => e.into(),
            AnalyticsError::UnknownDynamic(_)
            | AnalyticsError::OutOfRange(_)
            | AnalyticsError::Graph(_)
            | AnalyticsError::Dynamics(
                DynamicsError::ZeroTokens
                | DynamicsError::ZeroStepCap
                | DynamicsError::NotMedianGraph
                | DynamicsError::IncompatibleRules { .. },
            ) => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Runtime(format!("{}: {e}", path.display()))
}

/// `TCL_SEED` wins over `--seed` when set.
fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    match std::env::var("TCL_SEED") {
        Ok(v) => {
            v.trim().parse().map_err(|_| Failure::Usage(format!("TCL_SEED={v:?} is not an unsigned 64-bit integer")))
        }
        Err(_) => flag.ok_or_else(|| Failure::Usage("--seed (or TCL_SEED) is required for this command".into())),
    }
}

fn read_spec(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read spec {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analyze(spec: &Path) -> Result<(), Failure> {
    let (g, p) = generate::load_spec(&read_spec(spec)?)?;
    let median = g.is_median();
    let (set, cost) = generalized_median(&g, &p);
    let mut out = String::new();
    let _ = writeln!(out, "median_graph: {median}");
    let _ = writeln!(out, "nodes: {}", g.node_count());
    let _ = writeln!(out, "edges: {}", g.edge_count());
    match theta_decomposition(&g) {
        Ok(t) => {
            let _ = writeln!(out, "theta_classes: {}", t.len());
        }
        Err(_) => out.push_str("theta_classes: n/a\n"),
    }
    let _ = writeln!(out, "participants: {}", p.total());
    let nodes: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "median_set: {{{}}}", nodes.join(", "));
    let _ = writeln!(out, "median_cost: {cost}");
    match p.condorcet_winner(&g) {
        Some(w) => {
            let _ = writeln!(out, "condorcet_winner: {w}");
        }
        None => out.push_str("condorcet_winner: none\n"),
    }
    print!("{out}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    spec: &Path,
    dynamic: &str,
    tokens: u64,
    trials: u64,
    seed: Option<u64>,
    cap: Option<u64>,
    out: &Path,
    format: Option<Format>,
) -> Result<(), Failure> {
    let dynamic: Dynamic = dynamic.parse()?;
    let spec = parse_spec(&read_spec(spec)?)?;
    let seed = resolve_seed(seed)?;
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let config = ExperimentConfig { spec, dynamic, tokens, trials, step_cap: cap };
    let report = run_experiment(&config, seed)?;
    fs::create_dir_all(out).map_err(|e| io_error(out, e))?;
    let aggregate = report.aggregate_json();
    if format != Some(Format::Json) {
        let path = out.join("trials.csv");
        let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
        report.write_csv(std::io::BufWriter::new(file))?;
    }
    if format != Some(Format::Csv) {
        let path = out.join("aggregate.json");
        let text = serde_json::to_string_pretty(&aggregate).expect("aggregate serializes") + "\n";
        fs::write(&path, text).map_err(|e| io_error(&path, e))?;
    }
    println!(
        "{} trials of {dynamic}: {} converged, mean ratio {}, wrote {}",
        trials,
        aggregate["converged"],
        aggregate["mean_ratio"].as_f64().map_or_else(|| "n/a".to_string(), |m| format!("{m:.4}")),
        out.display()
    );
    Ok(())
}

fn tmr(spec: &Path, seed: Option<u64>, cap: u64, out: Option<&Path>) -> Result<(), Failure> {
    let (g, p) = generate::load_spec(&read_spec(spec)?)?;
    let seed = resolve_seed(seed)?;
    let opinions = p.opinions();
    let group: [usize; 3] = opinions.as_slice().try_into().map_err(|_| {
        Failure::Usage(format!("tmr needs a profile of exactly 3 participants, got {}", opinions.len()))
    })?;
    let t = TruthfulBargaining;
    let result = run_tmr_round(&g, group, [&t, &t, &t], InitialAssignment::Random, &mut seeded(seed), cap).map_err(
        |e| match e {
            TmrError::ZeroStepCap | TmrError::Graph(_) | TmrError::InvalidAssignment { .. } => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Runtime(e.to_string()),
        },
    )?;
    let doc = serde_json::json!({
        "group": group,
        "seed": seed,
        "winner": result.winner(),
        "diverged": matches!(result.outcome, RoundOutcome::Diverged),
        "steps": result.steps,
        "transcript": result.transcript_json(),
    });
    emit(out, &(serde_json::to_string_pretty(&doc).expect("transcript serializes") + "\n"))
}

fn oracle(n: u64, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let r = absorption_solver(n)?;
    let text = match format {
        Format::Csv => {
            let mut s = String::from("x0,hit_n,expected_time\n");
            for (x0, (h, t)) in r.hit_n.iter().zip(&r.expected_time).enumerate() {
                let _ = writeln!(s, "{x0},{h},{t}");
            }
            s
        }
        Format::Json => {
            let doc = serde_json::json!({
                "n": n,
                "exact": r.exact.is_some(),
                "hit_n": r.hit_n,
                "expected_time": r.expected_time,
                "max_expected_time": r.max_expected_time(),
            });
            serde_json::to_string_pretty(&doc).expect("oracle serializes") + "\n"
        }
    };
    emit(out, &text)
}

fn reproduce(name: &str) -> Result<(), Failure> {
    let registry: Registry =
        toml::from_str(MANIFEST).map_err(|e| Failure::Runtime(format!("reproduction manifest is invalid: {e}")))?;
    let outcome = registry.run(name).ok_or_else(|| {
        Failure::Usage(format!("unknown reproduction {name:?}; expected one of {}", NAMES.join(", ")))
    })??;
    print!("{}", outcome.render());
    if outcome.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn verify(level: LevelArg, seed: Option<u64>) -> Result<(), Failure> {
    let seed = resolve_seed(seed)?;
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let props = verify::run_suite(level, seed);
    print!("{}", verify::render(&props));
    let failed = props.iter().filter(|p| !p.pass).count();
    println!("{} of {} properties hold", props.len() - failed, props.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Analyze { spec } => analyze(&spec),
        Command::Simulate { spec, dynamic, tokens, trials, seed, cap, out, format } => {
            simulate(&spec, &dynamic, tokens, trials, seed, cap, &out, format)
        }
        Command::Tmr { spec, seed, cap, out } => tmr(&spec, seed, cap, out.as_deref()),
        Command::Oracle { tokens, format, out } => oracle(tokens, format, out.as_deref()),
        Command::Reproduce { name } => reproduce(&name),
        Command::Verify { level, seed } => verify(level, seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) | Failure::Runtime(msg) => eprintln!("error: {msg}"),
                Failure::Check => eprintln!("check failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
