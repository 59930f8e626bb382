//! Seeded campaigns: threshold sweeps, concentration censuses, audits and
//! bound checks, with JSONL records and CSV summaries.
//!
//! Trials run on a rayon pool. Records are sorted by `(n, c_index, trial)`
//! before anything is written, and carry no timing, so output bytes depend
//! only on the configuration.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{audit_propositions, concentration_census, AnalysisReport, AuditOptions, CensusReport, Constants};
use crate::bounds::{
    check_constants, check_grid, smallest_passing_c, write_csv, BoundReport, ClaimId, ConstraintCheck, C_LADDER,
    DEFAULT_BIG_C, DEFAULT_NS, DEFAULT_S_POINTS,
};
use crate::error::{Error, Result};
use crate::hypergraph::{balanced_tripartite, Edge, Hypergraph3, Vertex};
use crate::random::{sample_g3, PSchedule, ScheduleKind, Seed};
use crate::solver::{
    best_partition_for, max_f5_free, verify_max_and_tripartite, PartitionMode, SolveMode, SolveOptions, DEFAULT_CAP,
    DEFAULT_NODE_BUDGET,
};

/// Largest `n` accepted where a run solves hosts exactly.
pub const MAX_EXACT_N: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ThresholdSweep,
    Census,
    Audit,
    Bounds,
}

/// Replaces sampling with a fixed host in audit runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fixture {
    /// `G = H = S(n)` with its natural partition.
    BalancedTripartite,
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default = "default_ns")]
    pub ns: Vec<f64>,
    #[serde(default = "default_big_c")]
    pub big_c: f64,
    #[serde(default = "default_s_points")]
    pub s_points: usize,
}

fn default_ns() -> Vec<f64> {
    DEFAULT_NS.to_vec()
}

fn default_big_c() -> f64 {
    DEFAULT_BIG_C
}

fn default_s_points() -> usize {
    DEFAULT_S_POINTS
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            ns: default_ns(),
            big_c: DEFAULT_BIG_C,
            s_points: DEFAULT_S_POINTS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default = "default_schedule")]
    pub schedule: ScheduleKind,
    #[serde(default)]
    pub c: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub mode: SolveMode,
    #[serde(default = "default_budget")]
    pub node_budget: u64,
    #[serde(default = "default_cap")]
    pub cap: usize,
    /// Worker threads; 0 lets rayon decide.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub fixture: Option<Fixture>,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default)]
    pub bounds: BoundsConfig,
    /// Output directory.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_schedule() -> ScheduleKind {
    ScheduleKind::Constant
}

fn default_trials() -> usize {
    1
}

fn default_mode() -> SolveMode {
    SolveMode::Exact
}

fn default_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentConfig {
            kind,
            n: Vec::new(),
            schedule: default_schedule(),
            c: Vec::new(),
            trials: 1,
            seed: 0,
            mode: SolveMode::Exact,
            node_budget: DEFAULT_NODE_BUDGET,
            cap: DEFAULT_CAP,
            workers: 0,
            fixture: None,
            constants: Constants::default(),
            bounds: BoundsConfig::default(),
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == ExperimentKind::Bounds {
            if self.bounds.ns.iter().any(|&n| !(n >= 3.0)) || !(self.bounds.big_c > 0.0) {
                return Err(Error::Invalid("bounds grid needs n >= 3 and C > 0".into()));
            }
            return Ok(());
        }
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if self.n.is_empty() {
            return Err(Error::Invalid("no n values given".into()));
        }
        if self.fixture.is_none() && self.c.is_empty() {
            return Err(Error::Invalid("no c values given".into()));
        }
        for &c in &self.c {
            PSchedule::new(self.schedule, c)?;
        }
        let exact = match self.kind {
            ExperimentKind::ThresholdSweep => self.mode == SolveMode::Exact,
            ExperimentKind::Audit => true,
            _ => false,
        };
        if let Some(&n) = self.n.iter().find(|&&n| exact && n > MAX_EXACT_N) {
            return Err(Error::Invalid(format!("n = {n} exceeds the exact-solving bound {MAX_EXACT_N}")));
        }
        if self.kind == ExperimentKind::Audit && self.n.iter().any(|&n| n < 2) {
            return Err(Error::Invalid("audits need n >= 2".into()));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Invalid(format!("worker pool: {e}")))
    }

    /// `(n, c_index, c, p)` for every point of the grid.
    fn points(&self) -> Result<Vec<(usize, usize, f64, f64)>> {
        let mut out = Vec::new();
        for &n in &self.n {
            if self.fixture.is_some() {
                out.push((n, 0, 0.0, 0.0));
                continue;
            }
            for (ci, &c) in self.c.iter().enumerate() {
                out.push((n, ci, c, PSchedule::new(self.schedule, c)?.eval(n)?));
            }
        }
        Ok(out)
    }

    fn trials(&self) -> Result<Vec<Trial>> {
        let mut out = Vec::new();
        for (n, c_index, c, p) in self.points()? {
            for trial in 0..self.trials {
                out.push(Trial {
                    n,
                    c_index,
                    c,
                    p,
                    trial,
                    seed: Seed(self.seed).derive(n, c_index, trial),
                });
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug)]
struct Trial {
    n: usize,
    c_index: usize,
    c: f64,
    p: f64,
    trial: usize,
    seed: Seed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub edges: usize,
    pub mode: SolveMode,
    pub optimum: usize,
    pub t_g: usize,
    /// Optima enumerated (1 in greedy mode).
    pub optima: usize,
    pub truncated: bool,
    pub optimum_at_least_t: bool,
    pub all_f5_free: bool,
    pub tripartite_optima: usize,
    pub every_optimum_tripartite: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub kind: ExperimentKind,
    pub n: usize,
    pub p: f64,
    pub c: f64,
    pub c_index: usize,
    pub trial: usize,
    pub master_seed: u64,
    pub trial_seed: u64,
    /// The solver budget ran out; outcome fields are absent.
    pub censored: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AnalysisReport>,
}

impl ExperimentRecord {
    fn new(kind: ExperimentKind, master: u64, t: &Trial) -> Self {
        ExperimentRecord {
            kind,
            n: t.n,
            p: t.p,
            c: t.c,
            c_index: t.c_index,
            trial: t.trial,
            master_seed: master,
            trial_seed: t.seed.0,
            censored: false,
            error: None,
            sweep: None,
            census: None,
            audit: None,
        }
    }

    fn censor(&mut self, e: Error) -> Result<()> {
        match e {
            Error::BudgetExhausted { .. } => {
                self.censored = true;
                self.error = Some(e.to_string());
                Ok(())
            }
            other => Err(other),
        }
    }
}

fn canonical(mut records: Vec<ExperimentRecord>) -> Vec<ExperimentRecord> {
    records.sort_by_key(|r| (r.n, r.c_index, r.trial));
    records
}

fn solve_host(g: &Hypergraph3, cfg: &ExperimentConfig) -> Result<SweepOutcome> {
    let exact = cfg.mode == SolveMode::Exact;
    let opts = SolveOptions {
        mode: cfg.mode,
        enumerate_all: exact,
        cap: cfg.cap,
        node_budget: cfg.node_budget,
    };
    let res = max_f5_free(g, &opts)?;
    let nodes = res.stats.nodes;
    if exact {
        let check = verify_max_and_tripartite(g, &res, cfg.node_budget)?;
        return Ok(SweepOutcome {
            edges: g.len(),
            mode: cfg.mode,
            optimum: check.optimum,
            t_g: check.t_value,
            optima: check.optima,
            truncated: check.truncated,
            optimum_at_least_t: check.optimum_at_least_t,
            all_f5_free: check.all_f5_free,
            tripartite_optima: check.tripartite_optima,
            every_optimum_tripartite: check.every_optimum_tripartite,
            nodes,
        });
    }
    let (t_g, _) = crate::solver::t_of_g(g, PartitionMode::Exact, cfg.node_budget)?;
    let tripartite = crate::solver::is_tripartite(&res.witness).is_tripartite();
    Ok(SweepOutcome {
        edges: g.len(),
        mode: cfg.mode,
        optimum: res.optimum,
        t_g,
        optima: 1,
        truncated: false,
        optimum_at_least_t: res.optimum >= t_g,
        all_f5_free: crate::motif::is_f5_free(&res.witness),
        tripartite_optima: usize::from(tripartite),
        every_optimum_tripartite: tripartite,
        nodes,
    })
}

fn sweep_record(cfg: &ExperimentConfig, t: &Trial, outcome: &Result<SweepOutcome>) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new(ExperimentKind::ThresholdSweep, cfg.seed, t);
    match outcome {
        Ok(o) => rec.sweep = Some(o.clone()),
        Err(Error::BudgetExhausted { budget }) => rec.censor(Error::BudgetExhausted { budget: *budget })?,
        Err(e) => return Err(Error::Invalid(format!("trial {} at n = {}: {e}", t.trial, t.n))),
    }
    Ok(rec)
}

/// Samples every trial's host, solves each distinct host once, and records
/// whether all maximum F5-free subhypergraphs are tripartite.
pub fn run_threshold_sweep(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let trials = cfg.trials()?;
    let hosts = trials
        .iter()
        .map(|t| sample_g3(t.n, t.p, t.seed))
        .collect::<Result<Vec<_>>>()?;
    let mut distinct: BTreeMap<(usize, Vec<Edge>), usize> = BTreeMap::new();
    let mut unique: Vec<&Hypergraph3> = Vec::new();
    let host_of: Vec<usize> = hosts
        .iter()
        .map(|g| {
            *distinct.entry((g.n(), g.edges().to_vec())).or_insert_with(|| {
                unique.push(g);
                unique.len() - 1
            })
        })
        .collect();
    let outcomes: Vec<Result<SweepOutcome>> =
        cfg.pool()?.install(|| unique.par_iter().map(|g| solve_host(g, cfg)).collect());
    let records = trials
        .iter()
        .zip(&host_of)
        .map(|(t, &h)| sweep_record(cfg, t, &outcomes[h]))
        .collect::<Result<Vec<_>>>()?;
    Ok(canonical(records))
}

/// Part 1 of the census pair count: the lower half of the labels.
fn census_s(n: usize) -> Vec<Vertex> {
    (0..(n / 2) as Vertex).collect()
}

pub fn run_census(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let trials = cfg.trials()?;
    let records = cfg
        .pool()?
        .install(|| trials.par_iter().map(|t| census_trial(cfg, t)).collect::<Result<Vec<_>>>())?;
    Ok(canonical(records))
}

fn census_trial(cfg: &ExperimentConfig, t: &Trial) -> Result<ExperimentRecord> {
    let g = sample_g3(t.n, t.p, t.seed)?;
    let (_, pi) = balanced_tripartite(t.n);
    let mut rec = ExperimentRecord::new(ExperimentKind::Census, cfg.seed, t);
    rec.census = Some(concentration_census(&g, Some(&pi), t.p, Some(&census_s(t.n))));
    Ok(rec)
}

/// Recomputes the record of one trial without running the rest of the grid.
pub fn replay(cfg: &ExperimentConfig, n: usize, c_index: usize, trial: usize) -> Result<ExperimentRecord> {
    cfg.validate()?;
    let t = cfg
        .trials()?
        .into_iter()
        .find(|t| (t.n, t.c_index, t.trial) == (n, c_index, trial))
        .ok_or_else(|| Error::Invalid(format!("no trial ({n}, {c_index}, {trial}) in this configuration")))?;
    match cfg.kind {
        ExperimentKind::ThresholdSweep => {
            let g = sample_g3(t.n, t.p, t.seed)?;
            sweep_record(cfg, &t, &solve_host(&g, cfg))
        }
        ExperimentKind::Census => census_trial(cfg, &t),
        ExperimentKind::Audit => audit_trial(cfg, &t),
        ExperimentKind::Bounds => Err(Error::Invalid("bounds runs have no trials".into())),
    }
}

fn audit_trial(cfg: &ExperimentConfig, t: &Trial) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new(ExperimentKind::Audit, cfg.seed, t);
    let opts = AuditOptions {
        node_budget: cfg.node_budget,
    };
    let outcome = (|| {
        let (g, h, pi) = match cfg.fixture {
            Some(Fixture::BalancedTripartite) => {
                let (s, pi) = balanced_tripartite(t.n);
                (s.clone(), s, pi)
            }
            Some(Fixture::Empty) => {
                let g = Hypergraph3::empty(t.n);
                let pi = best_partition_for(&g, PartitionMode::Exact, cfg.node_budget)?;
                (g.clone(), g, pi)
            }
            None => {
                let g = sample_g3(t.n, t.p, t.seed)?;
                let solve = SolveOptions {
                    mode: SolveMode::Exact,
                    enumerate_all: false,
                    cap: cfg.cap,
                    node_budget: cfg.node_budget,
                };
                let h = max_f5_free(&g, &solve)?.witness;
                let pi = best_partition_for(&h, PartitionMode::Exact, cfg.node_budget)?;
                (g, h, pi)
            }
        };
        audit_propositions(&g, &h, &pi, &cfg.constants, t.p, &opts)
    })();
    match outcome {
        Ok(report) => rec.audit = Some(report),
        Err(e) => rec.censor(e)?,
    }
    Ok(rec)
}

/// Samples `G`, takes one maximum F5-free `H` and a partition maximizing
/// `|H_π|`, and audits the instance.
pub fn run_audit(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let trials = cfg.trials()?;
    let records = cfg
        .pool()?
        .install(|| trials.par_iter().map(|t| audit_trial(cfg, t)).collect::<Result<Vec<_>>>())?;
    Ok(canonical(records))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRun {
    pub reports: Vec<BoundReport>,
    pub constants: Vec<ConstraintCheck>,
    /// Smallest `C` of the ladder passing each claim over the grid.
    pub smallest_c: Vec<(ClaimId, Option<f64>)>,
}

pub fn run_bounds(cfg: &ExperimentConfig) -> Result<BoundsRun> {
    cfg.validate()?;
    let b = &cfg.bounds;
    let k = &cfg.constants;
    let reports = check_grid(&b.ns, b.big_c, k, b.s_points);
    let smallest_c = ClaimId::ALL
        .iter()
        .map(|&id| (id, smallest_passing_c(id, &b.ns, &C_LADDER, k, b.s_points)))
        .collect();
    Ok(BoundsRun {
        reports,
        constants: check_constants(k),
        smallest_c,
    })
}

/// Per-point summary of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepAggregate {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub trials: usize,
    pub completed: usize,
    pub censored: usize,
    /// Mean of the per-trial "every optimum tripartite" flags.
    pub tripartite_fraction: f64,
    pub mean_optimum: f64,
    pub mean_t: f64,
    pub mean_optima: f64,
    /// Every completed trial passed the consistency checks.
    pub consistent: bool,
}

/// The checks any completed exact trial must pass.
pub fn consistent(o: &SweepOutcome) -> bool {
    o.optimum_at_least_t
        && o.optimum >= o.t_g
        && o.all_f5_free
        && o.every_optimum_tripartite == (o.tripartite_optima == o.optima)
        && !o.truncated
}

pub fn aggregate(records: &[ExperimentRecord]) -> Vec<SweepAggregate> {
    let mut groups: BTreeMap<(usize, usize), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.c_index)).or_default().push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let done: Vec<&SweepOutcome> = rs.iter().filter_map(|r| r.sweep.as_ref()).collect();
            let k = done.len();
            let mean = |f: &dyn Fn(&SweepOutcome) -> f64| {
                if k == 0 {
                    0.0
                } else {
                    done.iter().map(|o| f(o)).sum::<f64>() / k as f64
                }
            };
            SweepAggregate {
                n: rs[0].n,
                c: rs[0].c,
                p: rs[0].p,
                trials: rs.len(),
                completed: k,
                censored: rs.iter().filter(|r| r.censored).count(),
                tripartite_fraction: mean(&|o| f64::from(u8::from(o.every_optimum_tripartite))),
                mean_optimum: mean(&|o| o.optimum as f64),
                mean_t: mean(&|o| o.t_g as f64),
                mean_optima: mean(&|o| o.optima as f64),
                consistent: done.iter().all(|o| consistent(o)),
            }
        })
        .collect()
}

/// One census trial as a flat CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub trial: usize,
    pub trial_seed: u64,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub expected_degree: f64,
    pub max_relative_deviation: f64,
    pub max_codegree: usize,
    pub codegree_bound: f64,
    pub codegree_within_bound: bool,
    pub crossing_min: usize,
    pub crossing_max: usize,
    pub crossing_expected: f64,
    pub heavy_pairs: usize,
    pub pair_bound: f64,
    pub pair_within_bound: bool,
}

pub fn census_rows(records: &[ExperimentRecord]) -> Vec<CensusRow> {
    records
        .iter()
        .filter_map(|r| {
            let c = r.census.as_ref()?;
            let cr = c.crossing.as_ref();
            let pr = c.pairs.as_ref();
            Some(CensusRow {
                n: r.n,
                c: r.c,
                p: r.p,
                trial: r.trial,
                trial_seed: r.trial_seed,
                edges: c.edges,
                min_degree: c.min_degree,
                max_degree: c.max_degree,
                expected_degree: c.expected_degree,
                max_relative_deviation: c.max_relative_deviation,
                max_codegree: c.max_codegree,
                codegree_bound: c.codegree_bound,
                codegree_within_bound: c.codegree_within_bound,
                crossing_min: cr.map_or(0, |x| x.min),
                crossing_max: cr.map_or(0, |x| x.max),
                crossing_expected: cr.map_or(0.0, |x| x.expected),
                heavy_pairs: pr.map_or(0, |x| x.heavy_pairs),
                pair_bound: pr.map_or(0.0, |x| x.bound),
                pair_within_bound: pr.map_or(true, |x| x.within_bound),
            })
        })
        .collect()
}

pub const RECORDS_FILE: &str = "records.jsonl";
pub const AGGREGATES_FILE: &str = "aggregates.csv";
pub const CENSUS_FILE: &str = "census.csv";
pub const BOUNDS_FILE: &str = "bounds.csv";
pub const SMALLEST_C_FILE: &str = "smallest_c.csv";
pub const PLOT_FILE: &str = "tripartite_fraction.gp";

/// Gnuplot script drawing the tripartite fraction against `c`, one curve per `n`.
pub fn gnuplot_script(aggregates: &[SweepAggregate]) -> String {
    let mut ns: Vec<usize> = aggregates.iter().map(|a| a.n).collect();
    ns.dedup();
    let curves: Vec<String> = ns
        .iter()
        .map(|n| {
            format!(
                "'{AGGREGATES_FILE}' using ($1 == {n} ? $2 : 1/0):7 with linespoints title 'n = {n}'"
            )
        })
        .collect();
    format!(
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'c'\nset ylabel 'fraction of trials with every optimum tripartite'\nset yrange [0:1]\nplot {}\n",
        curves.join(", \\\n     ")
    )
}

/// Opens `dir/name` for writing, refusing to replace an existing file
/// unless `force` is set.
fn create(dir: &Path, name: &str, force: bool) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let file = if force {
        File::create(&path)?
    } else {
        File::options().write(true).create_new(true).open(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::AlreadyExists {
                Error::Invalid(format!("{} exists; pass --force to overwrite", path.display()))
            } else {
                e.into()
            }
        })?
    };
    Ok(BufWriter::new(file))
}

pub fn write_records<W: Write>(mut out: W, records: &[ExperimentRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Summary of a finished run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub records: usize,
    pub censored: usize,
    pub files: Vec<PathBuf>,
}

/// Runs the configured experiment and writes its files into `cfg.output`
/// when set.
pub fn run(cfg: &ExperimentConfig, force: bool) -> Result<RunSummary> {
    cfg.validate()?;
    let dir = cfg.output.clone();
    let mut summary = RunSummary::default();
    let mut emit = |name: &str, f: &mut dyn FnMut(BufWriter<File>) -> Result<()>| -> Result<()> {
        if let Some(dir) = &dir {
            f(create(dir, name, force)?)?;
            summary.files.push(dir.join(name));
        }
        Ok(())
    };
    let records = match cfg.kind {
        ExperimentKind::ThresholdSweep => {
            let records = run_threshold_sweep(cfg)?;
            let agg = aggregate(&records);
            emit(AGGREGATES_FILE, &mut |w| write_rows(w, &agg))?;
            emit(PLOT_FILE, &mut |mut w| {
                w.write_all(gnuplot_script(&agg).as_bytes())?;
                w.flush()?;
                Ok(())
            })?;
            records
        }
        ExperimentKind::Census => {
            let records = run_census(cfg)?;
            emit(CENSUS_FILE, &mut |w| write_rows(w, &census_rows(&records)))?;
            records
        }
        ExperimentKind::Audit => run_audit(cfg)?,
        ExperimentKind::Bounds => {
            let b = run_bounds(cfg)?;
            emit(BOUNDS_FILE, &mut |w| write_csv(w, &b.reports, &b.constants))?;
            emit(SMALLEST_C_FILE, &mut |mut w| {
                writeln!(w, "claim_id,smallest_c")?;
                for (id, c) in &b.smallest_c {
                    writeln!(w, "{},{}", id.name(), c.map(|c| format!("{c:e}")).unwrap_or_default())?;
                }
                w.flush()?;
                Ok(())
            })?;
            summary.records = b.reports.len();
            return Ok(summary);
        }
    };
    emit(RECORDS_FILE, &mut |w| write_records(w, &records))?;
    summary.records = records.len();
    summary.censored = records.iter().filter(|r| r.censored).count();
    Ok(summary)
}
