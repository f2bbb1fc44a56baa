//! Batch experiment driver behind the `lazymatch` binary.
//!
//! Every subcommand sweeps the `--n` × `--alpha` grid in a worker pool and
//! writes one row per grid point, in grid order, as CSV or JSON.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::bounds::{
    bal_bounds, competitive_ratio, format_rational, max_sum_exact, ratio_infinity, AdversarySolution,
};
use crate::builders::{builder_by_name, minimax_search, Adversary, Builder, DEFAULT_MINIMAX_CAP};
use crate::error::GameError;
use crate::game::{run_game, GameConfig, GameTranscript};
use crate::matching::has_perfect_matching;
use crate::schedulers::{scheduler_by_name, Balance, Scheduler};

#[derive(Debug, Parser)]
#[command(name = "lazymatch", version, about = "Experiments for the alpha-lazy on-line bipartite matching game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play a scheduler against a builder for every (n, alpha).
    Simulate(Common),
    /// Play a scheduler against the adversary and check the guaranteed bound.
    Adversary(Common),
    /// Exact game value, witness and LP bracket for every (n, alpha).
    Bounds(Common),
    /// Exact competitive ratio per alpha, plus the alpha -> inf limit.
    Ratio(RatioArgs),
    /// Cross-check BALANCE against the exact value and the minimax oracle.
    Verify(VerifyArgs),
    /// Exhaustive worst case of a scheduler at tiny n.
    Minimax(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Capacity: a value, a range `a..b`, a list `a,b,c`, or `inf`.
    #[arg(long, default_value = "2")]
    pub alpha: String,
    /// Game size: a value, a range `a..b` or a list.
    #[arg(long, default_value = "18")]
    pub n: String,
    /// balance, greedy, noop, random or random:seed=S.
    #[arg(long, default_value = "balance")]
    pub scheduler: String,
    /// empty, adversary[:k=K,x=X0,X1,..], random[:seed=S,p=P] or minimax.
    #[arg(long, default_value = "adversary")]
    pub builder: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_rounds: usize,
    /// Worker threads; all cores when absent.
    #[arg(long, env = "LAZYMATCH_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RatioArgs {
    #[arg(long, default_value = "1..10")]
    pub alpha: String,
    /// Factors in the truncated limit product.
    #[arg(long, default_value_t = 10_000)]
    pub terms: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "1..3")]
    pub alpha: String,
    #[arg(long, default_value = "2..20")]
    pub n: String,
    /// Directory for counterexample transcripts.
    #[arg(long, default_value = ".")]
    pub transcripts: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_rounds: usize,
    #[arg(long, env = "LAZYMATCH_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Capacity as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaSpec {
    Finite(usize),
    Infinite,
}

impl AlphaSpec {
    /// Capacity used for a game of size `n`; `inf` means `n`.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Self::Finite(a) => a,
            Self::Infinite => n,
        }
    }

    pub fn config(self, n: usize) -> Result<GameConfig, GameError> {
        match self {
            Self::Finite(a) => GameConfig::new(a, n),
            Self::Infinite => GameConfig::infinite(n),
        }
    }

    fn label(self) -> Value {
        match self {
            Self::Finite(a) => json!(a),
            Self::Infinite => json!("inf"),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or selectors: exit 2.
    Usage(String),
    /// A check failed: exit 1.
    Verification(String),
    /// Anything else at run time: exit 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Verification(_) | Self::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Verification(m) => write!(f, "verification failed: {m}"),
            Self::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::InvalidConfig(_) | GameError::Unsupported(_) => Self::Usage(e.to_string()),
            other => Self::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

/// Parses `7`, `2..20` (inclusive), `2..=20` or `1,2,5`.
pub fn parse_range(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad range '{s}'"));
    let s = s.trim();
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(CliError::Usage(format!("range '{s}' is empty")));
    }
    Ok(out)
}

/// Like [`parse_range`], also accepting `inf` on its own or in a list.
pub fn parse_alpha(s: &str) -> Result<Vec<AlphaSpec>, CliError> {
    if s.contains("..") {
        return Ok(parse_range(s)?.into_iter().map(AlphaSpec::Finite).collect());
    }
    s.split(',')
        .map(|t| match t.trim() {
            "inf" | "infinity" => Ok(AlphaSpec::Infinite),
            v => v
                .parse()
                .map(AlphaSpec::Finite)
                .map_err(|_| CliError::Usage(format!("bad alpha '{v}'"))),
        })
        .collect()
}

/// Rows of a report, rendered as CSV or as a JSON array of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let fail = |e: csv::Error| CliError::Runtime(e.to_string());
                w.write_record(&self.header).map_err(fail)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(cell)).map_err(fail)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> =
                            self.header.iter().map(|h| h.to_string()).zip(row.iter().cloned()).collect();
                        Value::Object(map)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&objects).map_err(|e| CliError::Runtime(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn emit(table: &Table, format: Format, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = table.render(format)?;
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| CliError::Runtime(e.to_string()))
}

fn grid(n: &str, alpha: &str) -> Result<Vec<(usize, AlphaSpec)>, CliError> {
    let ns = parse_range(n)?;
    let alphas = parse_alpha(alpha)?;
    if ns.contains(&0) {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    if alphas.contains(&AlphaSpec::Finite(0)) {
        return Err(CliError::Usage("alpha must be at least 1".into()));
    }
    Ok(ns.iter().flat_map(|&n| alphas.iter().map(move |&a| (n, a))).collect())
}

/// Runs `f` over the grid in the pool, keeping grid order.
fn sweep<T, F>(jobs: Option<usize>, points: &[(usize, AlphaSpec)], f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize, AlphaSpec) -> Result<T, CliError> + Sync,
{
    pool(jobs)?.install(|| points.par_iter().map(|&(n, a)| f(n, a)).collect())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli, &mut io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lazymatch: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing the report to `--out` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(c) => emit(&cmd_simulate(c)?, c.format, &c.out, stdout),
        Command::Adversary(c) => {
            let table = cmd_adversary(c)?;
            emit(&table, c.format, &c.out, stdout)?;
            let broken = table.rows.iter().filter(|r| r.last() == Some(&json!(false))).count();
            if broken > 0 {
                return Err(CliError::Verification(format!("{broken} game(s) beat the guaranteed bound")));
            }
            Ok(())
        }
        Command::Bounds(c) => emit(&cmd_bounds(c)?, c.format, &c.out, stdout),
        Command::Ratio(r) => emit(&cmd_ratio(r)?, r.format, &r.out, stdout),
        Command::Verify(v) => {
            let report = cmd_verify(v)?;
            emit(&report.table, v.format, &v.out, stdout)?;
            if report.failures.is_empty() {
                Ok(())
            } else {
                let paths: Vec<String> = report.failures.iter().map(|p| p.display().to_string()).collect();
                Err(CliError::Verification(format!("counterexample transcripts: {}", paths.join(", "))))
            }
        }
        Command::Minimax(c) => emit(&cmd_minimax(c)?, c.format, &c.out, stdout),
    }
}

/// One row per game: `n, alpha, scheduler, builder, matched, n_offline, ratio, seed`.
pub fn cmd_simulate(c: &Common) -> Result<Table, CliError> {
    let points = grid(&c.n, &c.alpha)?;
    let rows = sweep(c.jobs, &points, |n, a| {
        let mut sched = scheduler_by_name(&c.scheduler, c.seed)?;
        let mut builder = builder_by_name(&c.builder, n, a.resolve(n), c.seed, &sched)?;
        let (res, _) = run_game(&mut sched, &mut builder, a.config(n)?, c.max_rounds)?;
        Ok(vec![
            json!(n),
            a.label(),
            json!(sched.name()),
            json!(builder.name()),
            json!(res.matched_count),
            json!(res.game_size_n),
            json!(format!("{:.6}", res.ratio())),
            json!(c.seed),
        ])
    })?;
    let mut t = Table::new(vec!["n", "alpha", "scheduler", "builder", "matched", "n_offline", "ratio", "seed"]);
    t.rows = rows;
    Ok(t)
}

/// Like [`cmd_simulate`] with the adversary as builder, adding the bound
/// `n − Σx` and whether `matched` stayed within it.
pub fn cmd_adversary(c: &Common) -> Result<Table, CliError> {
    let points = grid(&c.n, &c.alpha)?;
    let builder_spec = if c.builder.starts_with("adversary") { c.builder.as_str() } else { "adversary" };
    let rows = sweep(c.jobs, &points, |n, a| {
        let mut sched = scheduler_by_name(&c.scheduler, c.seed)?;
        let mut builder = builder_by_name(builder_spec, n, a.resolve(n), c.seed, &sched)?;
        let (res, _) = run_game(&mut sched, &mut builder, a.config(n)?, c.max_rounds)?;
        let name = builder.name();
        let bound = match &builder {
            crate::builders::NamedBuilder::Adversary(adv) => adv.guaranteed_bound(),
            _ => unreachable!("selector starts with 'adversary'"),
        };
        Ok(vec![
            json!(n),
            a.label(),
            json!(sched.name()),
            json!(name),
            json!(res.matched_count),
            json!(res.game_size_n),
            json!(bound),
            json!(res.matched_count as i64 <= bound),
        ])
    })?;
    let mut t = Table::new(vec!["n", "alpha", "scheduler", "builder", "matched", "n_offline", "bound", "within_bound"]);
    t.rows = rows;
    Ok(t)
}

/// `n, alpha, x0, best_sum, witness, val, lp_lower, lp_upper, ratio`.
pub fn cmd_bounds(c: &Common) -> Result<Table, CliError> {
    let points = grid(&c.n, &c.alpha)?;
    let rows = sweep(c.jobs, &points, |n, a| {
        let alpha = a.resolve(n) as i64;
        let ni = n as i64;
        let usage = |e: crate::error::BoundsError| CliError::Usage(e.to_string());
        let best = max_sum_exact(ni, alpha).map_err(usage)?;
        let bb = bal_bounds(ni, alpha).map_err(usage)?;
        let val = ni - best.best_sum;
        let ratio = num_rational::BigRational::new(val.into(), ni.into());
        Ok(vec![
            json!(n),
            a.label(),
            json!(best.witness[0]),
            json!(best.best_sum),
            json!(best.witness),
            json!(val),
            json!(bb.lower),
            json!(bb.upper),
            json!(format_rational(&ratio)),
        ])
    })?;
    let mut t = Table::new(vec!["n", "alpha", "x0", "best_sum", "witness", "val", "lp_lower", "lp_upper", "ratio"]);
    t.rows = rows;
    Ok(t)
}

/// `alpha, exact, decimal, truncation_error`; the last row is the limit.
pub fn cmd_ratio(r: &RatioArgs) -> Result<Table, CliError> {
    let mut t = Table::new(vec!["alpha", "exact", "decimal", "truncation_error"]);
    for a in parse_alpha(&r.alpha)? {
        match a {
            AlphaSpec::Finite(alpha) => {
                let res = competitive_ratio(alpha).map_err(|e| CliError::Usage(e.to_string()))?;
                t.rows.push(vec![
                    json!(alpha),
                    json!(format_rational(&res.exact)),
                    json!(format!("{:.6}", res.float())),
                    Value::Null,
                ]);
            }
            AlphaSpec::Infinite => {}
        }
    }
    let lim = ratio_infinity(r.terms).map_err(|e| CliError::Usage(e.to_string()))?;
    t.rows.push(vec![
        json!("inf"),
        json!("1-pi/cosh(sqrt(3)*pi/2)"),
        json!(format!("{:.6}", lim.ratio)),
        json!(format!("{:.3e}", lim.difference)),
    ]);
    Ok(t)
}

#[derive(Debug)]
pub struct VerifyReport {
    pub table: Table,
    /// Transcript files written for failing grid points.
    pub failures: Vec<PathBuf>,
}

/// Per grid point: BALANCE against the maximal adversary must match
/// exactly `n − best_sum` on a perfectly matchable graph, and for
/// `n ≤` [`DEFAULT_MINIMAX_CAP`] the exhaustive worst case must agree.
pub fn cmd_verify(v: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let points = grid(&v.n, &v.alpha)?;
    let outcomes = sweep(v.jobs, &points, |n, a| verify_point(n, a, v.max_rounds))?;
    let mut table = Table::new(vec!["n", "alpha", "best_sum", "val", "matched", "minimax", "status"]);
    let mut failures = Vec::new();
    for ((n, a), o) in points.iter().zip(outcomes) {
        if let Some(t) = &o.counterexample {
            fs::create_dir_all(&v.transcripts)?;
            let alpha = match a {
                AlphaSpec::Finite(x) => x.to_string(),
                AlphaSpec::Infinite => "inf".into(),
            };
            let path = v.transcripts.join(format!("counterexample-n{n}-alpha{alpha}.json"));
            fs::write(&path, t.to_json())?;
            failures.push(path);
        }
        table.rows.push(vec![
            json!(n),
            a.label(),
            json!(o.best_sum),
            json!(o.val),
            json!(o.matched),
            o.minimax.map_or(Value::Null, |m| json!(m)),
            json!(if o.counterexample.is_none() { "PASS" } else { "FAIL" }),
        ]);
    }
    Ok(VerifyReport { table, failures })
}

struct PointOutcome {
    best_sum: i64,
    val: i64,
    matched: usize,
    minimax: Option<usize>,
    counterexample: Option<GameTranscript>,
}

fn verify_point(n: usize, a: AlphaSpec, max_rounds: usize) -> Result<PointOutcome, CliError> {
    let alpha = a.resolve(n);
    let best = max_sum_exact(n as i64, alpha as i64).map_err(|e| CliError::Usage(e.to_string()))?;
    let val = n as i64 - best.best_sum;
    let sol = AdversarySolution::new(n as i64, alpha as i64, best.witness.clone())
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut adv = Adversary::new(sol)?;
    let (res, transcript) = run_game(&mut Balance, &mut adv, a.config(n)?, max_rounds)?;
    let perfect = {
        let state = crate::game::replay_state(&transcript)?;
        has_perfect_matching(state.graph()).unwrap_or(false)
    };
    let mut ok = perfect && res.matched_count as i64 == val;
    let mut counterexample = None;
    let mut minimax = None;
    if n <= DEFAULT_MINIMAX_CAP {
        let o = minimax_search(n, alpha, &Balance, DEFAULT_MINIMAX_CAP)?;
        minimax = Some(o.value);
        if o.value as i64 != val {
            ok = false;
            counterexample = Some(o.worst_case);
        }
    }
    if !ok && counterexample.is_none() {
        counterexample = Some(transcript);
    }
    Ok(PointOutcome { best_sum: best.best_sum, val, matched: res.matched_count, minimax, counterexample })
}

/// `n, alpha, scheduler, value, val, leaves, worst_case`, the last column
/// being the worst-case neighborhoods.
pub fn cmd_minimax(c: &Common) -> Result<Table, CliError> {
    let points = grid(&c.n, &c.alpha)?;
    let sched = scheduler_by_name(&c.scheduler, c.seed)?;
    let rows = sweep(c.jobs, &points, |n, a| {
        let alpha = a.resolve(n);
        let o = minimax_search(n, alpha, &sched, DEFAULT_MINIMAX_CAP)?;
        let best = max_sum_exact(n as i64, alpha as i64).map_err(|e| CliError::Usage(e.to_string()))?;
        let moves: Vec<String> = o
            .worst_case
            .moves
            .iter()
            .map(|m| m.neighbors.iter().map(usize::to_string).collect::<Vec<_>>().join("|"))
            .collect();
        Ok(vec![
            json!(n),
            a.label(),
            json!(sched.name()),
            json!(o.value),
            json!(n as i64 - best.best_sum),
            json!(o.leaves),
            json!(moves),
        ])
    })?;
    let mut t = Table::new(vec!["n", "alpha", "scheduler", "value", "val", "leaves", "worst_case"]);
    t.rows = rows;
    Ok(t)
}
