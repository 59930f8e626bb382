use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use f5lab::experiment::{run, ExperimentConfig, ExperimentKind, Fixture};
use f5lab::motif::{count_f5, count_k4minus, find_f5};
use f5lab::random::ScheduleKind;
use f5lab::solver::{is_tripartite, max_f5_free, t_of_g, PartitionMode, SolveMode, SolveOptions};
use f5lab::{Error, Hypergraph3};

const EXIT_CONFIG: u8 = 2;
const EXIT_CENSORED: u8 = 3;

#[derive(Parser)]
#[command(name = "f5lab", version, about = "Maximum F5-free subhypergraphs of random 3-graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Threshold sweep: is every maximum F5-free subhypergraph tripartite?
    Sweep(RunArgs),
    /// Degree and codegree concentration census.
    Census(RunArgs),
    /// Audit of the stability inequalities on solved instances.
    Audit(RunArgs),
    /// Constant constraints and union-bound claims.
    Bounds(RunArgs),
    /// Solve one hypergraph read from a file.
    Solve(SolveArgs),
    /// Report F5-freeness and tripartiteness of a hypergraph file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Greedy,
}

impl From<Mode> for SolveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => SolveMode::Exact,
            Mode::Greedy => SolveMode::Greedy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Schedule {
    SqrtLog,
    Log,
    Constant,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureArg {
    BalancedTripartite,
    Empty,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    c: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    schedule: Option<Schedule>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Node budget per search.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    fixture: Option<FixtureArg>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long)]
    budget: Option<u64>,
    /// Enumerate every optimum.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
}

fn config_for(kind: ExperimentKind, a: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &a.config {
        Some(path) => {
            let cfg = ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?;
            if cfg.kind != kind {
                return Err(Error::Invalid(format!("config kind {:?} does not match the subcommand", cfg.kind)));
            }
            cfg
        }
        None => ExperimentConfig::new(kind),
    };
    if let Some(n) = &a.n {
        cfg.n = n.clone();
    }
    if let Some(c) = &a.c {
        cfg.c = c.clone();
    }
    if let Some(s) = a.schedule {
        cfg.schedule = match s {
            Schedule::SqrtLog => ScheduleKind::SqrtLog,
            Schedule::Log => ScheduleKind::Log,
            Schedule::Constant => ScheduleKind::Constant,
        };
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(m) = a.mode {
        cfg.mode = m.into();
    }
    if let Some(b) = a.budget {
        cfg.node_budget = b;
    }
    if let Some(w) = a.workers {
        cfg.workers = w;
    }
    if let Some(f) = a.fixture {
        cfg.fixture = Some(match f {
            FixtureArg::BalancedTripartite => Fixture::BalancedTripartite,
            FixtureArg::Empty => Fixture::Empty,
        });
    }
    if a.out.is_some() {
        cfg.output = a.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::Invalid(_) | Error::Domain(_) | Error::Json(_) | Error::Parse { .. })
}

fn fail(e: &Error, config: bool) -> ExitCode {
    eprintln!("error: {e}");
    if config || is_config_error(e) {
        ExitCode::from(EXIT_CONFIG)
    } else {
        ExitCode::FAILURE
    }
}

fn read_hypergraph(path: &PathBuf) -> Result<Hypergraph3, Error> {
    Hypergraph3::parse_text(&std::fs::read_to_string(path)?)
}

fn run_experiment(kind: ExperimentKind, a: &RunArgs) -> ExitCode {
    let cfg = match config_for(kind, a) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e, true),
    };
    let start = Instant::now();
    match run(&cfg, a.force) {
        Ok(s) => {
            for f in &s.files {
                println!("{}", f.display());
            }
            eprintln!(
                "{} records, {} censored, {:.2}s",
                s.records,
                s.censored,
                start.elapsed().as_secs_f64()
            );
            if s.censored > 0 {
                ExitCode::from(EXIT_CENSORED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&e, false),
    }
}

fn solve(a: &SolveArgs) -> ExitCode {
    let g = match read_hypergraph(&a.file) {
        Ok(g) => g,
        Err(e) => return fail(&e, true),
    };
    let mut opts = SolveOptions {
        mode: a.mode.into(),
        enumerate_all: a.all,
        ..SolveOptions::default()
    };
    if let Some(b) = a.budget {
        opts.node_budget = b;
    }
    match max_f5_free(&g, &opts) {
        Ok(r) => {
            let out = json!({
                "n": g.n(),
                "edges": g.len(),
                "optimum": r.optimum,
                "optima": r.all_optima.as_ref().map(|v| v.len()),
                "truncated": r.truncated,
                "nodes": r.stats.nodes,
                "witness": r.witness.edges(),
            });
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e @ Error::BudgetExhausted { .. }) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_CENSORED)
        }
        Err(e) => fail(&e, false),
    }
}

fn verify(a: &VerifyArgs) -> ExitCode {
    let h = match read_hypergraph(&a.file) {
        Ok(h) => h,
        Err(e) => return fail(&e, true),
    };
    let cert = is_tripartite(&h);
    let t = t_of_g(&h, PartitionMode::Exact, f5lab::solver::DEFAULT_NODE_BUDGET).ok().map(|(t, _)| t);
    let out = json!({
        "n": h.n(),
        "edges": h.len(),
        "f5_free": find_f5(&h).is_none(),
        "f5_copies": count_f5(&h),
        "k4minus_copies": count_k4minus(&h),
        "tripartite": cert.is_tripartite(),
        "partition": cert.partition.as_ref().map(|p| p.assignment().to_vec()),
        "max_crossing": t,
    });
    println!("{out}");
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Sweep(a) => run_experiment(ExperimentKind::ThresholdSweep, a),
        Command::Census(a) => run_experiment(ExperimentKind::Census, a),
        Command::Audit(a) => run_experiment(ExperimentKind::Audit, a),
        Command::Bounds(a) => run_experiment(ExperimentKind::Bounds, a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
    }
}
