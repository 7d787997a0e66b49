//! The `mcw` command-line tool: parsing, evaluation, the expression solvers,
//! brute-force oracles, instance generators and audits.
//!
//! Exit codes: 0 success or "yes", 1 "no" (or a failed check), 2 usage or
//! input error, 3 solver refusal.

pub mod fuzz;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcw_core::eds::{solve_eds_with, EdsOutcome};
use mcw_core::expr::{evaluate, gen_random_expr, normalize, parse, serialize, validate, GeneratorProfile, MultiExpr};
use mcw_core::graph::{oracle_eds, oracle_hamiltonian_cycle, oracle_max_cut, OracleError, SimpleGraph};
use mcw_core::hamcycle::{solve_hc_with, HcError, HcOptions};
use mcw_core::lbgen::{
    audit_gadgets, build_expression, build_instance, ExpressionStyle, GadgetKind, LbError, LbOptions, MisInstance,
};
use mcw_core::maxcut::{solve_max_cut, MaxCutError};
use mcw_core::Label;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

/// JSON schema of the `--json` output.
pub const RUN_RESULT_SCHEMA: &str = include_str!("../schema/run_result.schema.json");

#[derive(Debug, Parser)]
#[command(name = "mcw", version, about = "Multi-clique-width expressions and expression-driven solvers")]
pub struct Cli {
    /// Print one JSON object instead of human-readable lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings per phase (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an expression for structural and semantic errors.
    Validate { file: PathBuf },
    /// Rewrite an expression to single-label intros and add/forget relabels.
    Normalize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate an expression to its labeled graph.
    Eval {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an expression-driven solver.
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        file: PathBuf,
        /// EDS: is there one of size at most this? Max Cut: is there a cut of at least this?
        #[arg(long)]
        budget: Option<u64>,
        /// Hamiltonian cycle: keep full families instead of reduced ones.
        #[arg(long)]
        no_reduce: bool,
    },
    /// Run a brute-force oracle on an expression or a `g/v/e` graph file.
    Oracle {
        #[arg(value_enum)]
        problem: Problem,
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Generate expressions and lower-bound instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Audit gadget properties by exhaustive enumeration.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Compare solvers with oracles on random expressions.
    Fuzz(FuzzArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Hc,
    Eds,
    Maxcut,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Compile a Multicolored Independent Set instance into a Max Cut instance and expression.
    Lb {
        /// Instance file: `mis <parts> <size>` then `e <part> <index> <part> <index>` lines.
        #[arg(long)]
        mis: PathBuf,
        /// Gadget weight C (defaults to the smallest value that keeps the gadgets sound).
        #[arg(long = "override-C", value_name = "C")]
        override_c: Option<u128>,
        /// Selection-edge weight D.
        #[arg(long = "override-D", value_name = "D")]
        override_d: Option<u128>,
        #[arg(long, value_enum, default_value = "irredundant")]
        style: StyleArg,
        /// Refuse instances whose graph would exceed this many vertices.
        #[arg(long, default_value_t = mcw_core::lbgen::DEFAULT_MAX_VERTICES)]
        max_vertices: u128,
        /// Writes `<prefix>.expr`, `<prefix>.graph` and `<prefix>.json`.
        #[arg(short = 'o', long = "output", value_name = "PREFIX")]
        prefix: PathBuf,
    },
    /// Generate a random valid expression.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Label,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "default")]
        profile: ProfileArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Irredundant,
    PerElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Default,
    Linear,
    Dense,
    Irredundant,
}

impl ProfileArg {
    fn profile(self) -> GeneratorProfile {
        match self {
            ProfileArg::Default => GeneratorProfile::default(),
            ProfileArg::Linear => GeneratorProfile::linear(),
            ProfileArg::Dense => GeneratorProfile::dense(),
            ProfileArg::Irredundant => GeneratorProfile::irredundant(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Exhaustively audit the Max Cut gadget properties.
    Gadgets {
        #[arg(long = "C", value_name = "C")]
        c: usize,
        #[arg(long = "D", value_name = "D")]
        d: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub k: Label,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// hc, eds, maxcut or all.
    #[arg(long, default_value = "all")]
    pub which: String,
    /// Directory for minimized failing expressions.
    #[arg(long, default_value = "fuzz-failures")]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Stats {
    pub n: usize,
    pub m: usize,
    pub k: Label,
    pub nodes: usize,
    /// Largest DP state: family size (HC) or footprint set size (EDS).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_table: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub phase: &'static str,
    pub ms: f64,
}

/// The single JSON object printed by `--json`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunResult {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub answer: Option<bool>,
    pub optimum: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    pub fallback: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub exit_code: i32,
}

/// What a run prints and returns.
#[derive(Debug)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(anyhow::Error),
    Refused(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Refused(e.to_string())
    }
}

impl From<HcError> for Failure {
    fn from(e: HcError) -> Self {
        match e {
            HcError::Expr(x) => Failure::Usage(x.into()),
            other => Failure::Refused(other.to_string()),
        }
    }
}

impl From<MaxCutError> for Failure {
    fn from(e: MaxCutError) -> Self {
        match e {
            MaxCutError::Expr(x) => Failure::Usage(x.into()),
            other => Failure::Refused(other.to_string()),
        }
    }
}

impl From<LbError> for Failure {
    fn from(e: LbError) -> Self {
        match e {
            LbError::InstanceTooLarge { .. } | LbError::TooLarge { .. } | LbError::TooManyLabels { .. } => {
                Failure::Refused(e.to_string())
            }
            other => Failure::Usage(other.into()),
        }
    }
}

struct Clock {
    on: bool,
    last: Instant,
    phases: Vec<Timing>,
}

impl Clock {
    fn new(on: bool) -> Self {
        Clock { on, last: Instant::now(), phases: Vec::new() }
    }

    fn lap(&mut self, phase: &'static str) {
        let now = Instant::now();
        self.phases.push(Timing { phase, ms: (now - self.last).as_secs_f64() * 1e3 });
        self.last = now;
    }

    fn finish(self) -> Option<Vec<Timing>> {
        self.on.then_some(self.phases)
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_expr(path: &Path) -> anyhow::Result<MultiExpr> {
    parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn stats_of(e: &MultiExpr, g: &SimpleGraph) -> Stats {
    Stats { n: g.n(), m: g.m(), k: e.k(), nodes: e.len(), max_table: None }
}

fn eval_graph(e: &MultiExpr) -> anyhow::Result<SimpleGraph> {
    Ok(evaluate(e).map_err(|x| anyhow!(x))?.graph.graph)
}

/// An expression file, or a graph file when its first significant line is a `g` header.
fn load_graph(path: &Path) -> anyhow::Result<(SimpleGraph, Option<MultiExpr>)> {
    let text = read(path)?;
    let first = text.lines().map(|l| l.split(['#', ';']).next().unwrap_or("").trim()).find(|l| !l.is_empty());
    if first.is_some_and(|l| l.starts_with("g ")) {
        let (g, _, _) = SimpleGraph::from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok((g, None))
    } else {
        let e = parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok((eval_graph(&e)?, Some(e)))
    }
}

fn decision(answer: Option<bool>) -> i32 {
    if answer == Some(false) {
        EXIT_NO
    } else {
        EXIT_YES
    }
}

fn problem_name(p: Problem) -> &'static str {
    match p {
        Problem::Hc => "hc",
        Problem::Eds => "eds",
        Problem::Maxcut => "maxcut",
    }
}

fn run_solve(
    problem: Problem,
    file: &Path,
    budget: Option<u64>,
    no_reduce: bool,
    clock: &mut Clock,
) -> Result<RunResult, Failure> {
    let e = load_expr(file)?;
    let g = eval_graph(&e)?;
    clock.lap("parse");
    let mut r = RunResult { input: Some(file.display().to_string()), budget, ..RunResult::default() };
    let mut stats = stats_of(&e, &g);
    match problem {
        Problem::Hc => {
            let out = solve_hc_with(&e, HcOptions { reduce: !no_reduce, parallel: true })?;
            r.answer = Some(out.answer);
            stats.max_table = Some(out.max_family);
            r.details = json!({ "edges_tried": out.edges_tried, "reduce": !no_reduce });
        }
        Problem::Eds => {
            let t = budget.map_or(0, |b| b.min(u32::MAX as u64) as u32);
            let EdsOutcome { answer, optimum, max_set } = solve_eds_with(&e, t).map_err(|x| anyhow!(x))?;
            r.answer = budget.map(|_| answer);
            r.optimum = Some(optimum as u64);
            stats.max_table = Some(max_set);
        }
        Problem::Maxcut => {
            let out = solve_max_cut(&e, budget)?;
            r.answer = out.answer;
            r.optimum = Some(out.optimum);
            r.fallback = out.fallback;
        }
    }
    clock.lap("solve");
    r.stats = Some(stats);
    Ok(r)
}

fn run_oracle(problem: Problem, file: &Path, budget: Option<u64>, clock: &mut Clock) -> Result<RunResult, Failure> {
    let (g, e) = load_graph(file)?;
    clock.lap("parse");
    let mut r = RunResult { input: Some(file.display().to_string()), budget, ..RunResult::default() };
    match problem {
        Problem::Hc => r.answer = Some(oracle_hamiltonian_cycle(&g)?),
        Problem::Eds => {
            let opt = oracle_eds(&g)? as u64;
            r.optimum = Some(opt);
            r.answer = budget.map(|b| opt <= b);
        }
        Problem::Maxcut => {
            let opt = oracle_max_cut(&g)? as u64;
            r.optimum = Some(opt);
            r.answer = budget.map(|b| opt >= b);
        }
    }
    clock.lap("oracle");
    r.stats = Some(match &e {
        Some(e) => stats_of(e, &g),
        None => Stats { n: g.n(), m: g.m(), ..Stats::default() },
    });
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn run_gen_lb(
    mis: &Path,
    c: Option<u128>,
    d: Option<u128>,
    style: StyleArg,
    max_vertices: u128,
    prefix: &Path,
    clock: &mut Clock,
) -> Result<RunResult, Failure> {
    let instance =
        MisInstance::parse(&read(mis)?).map_err(|x| anyhow!(x).context(format!("parsing {}", mis.display())))?;
    let style = match style {
        StyleArg::Irredundant => ExpressionStyle::Irredundant,
        StyleArg::PerElement => ExpressionStyle::PerElement,
    };
    let opts = LbOptions { c_override: c, d_override: d, max_vertices, style };
    let lb = build_instance(&instance, &opts)?;
    clock.lap("build_instance");
    let e = build_expression(&instance, &opts)?;
    clock.lap("build_expression");
    let p = &lb.params;
    let summary = json!({
        "budget": p.budget.to_string(),
        "parameters": {
            "parts": p.parts,
            "padded_from": instance.parts,
            "k": p.k,
            "n": p.n,
            "m": p.m,
            "C": p.c.to_string(),
            "D": p.d.to_string(),
            "C_overridden": p.c_overridden,
            "D_overridden": p.d_overridden,
            "L1": p.l1.to_string(),
            "L2": p.l2.to_string(),
            "L": p.l.to_string(),
            "N": p.outer_fprime.to_string(),
        },
        "counts": {
            "vertices": lb.graph.n(),
            "edges": lb.graph.m(),
            "selection_edges": lb.selection_edge_count(),
            "outer_fprime_gadgets": lb.outer_count(|k| *k == GadgetKind::FPrime),
            "hif_gadgets": lb.outer_count(|k| matches!(k, GadgetKind::Hif { .. })),
            "expression_nodes": e.len(),
            "expression_k": e.k(),
            "labels_used": e.labels_used().len(),
        },
        "style": style,
    });
    let with_ext = |ext: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(format!(".{ext}"));
        PathBuf::from(s)
    };
    write(&with_ext("expr"), &serialize(&e))?;
    write(&with_ext("graph"), &lb.graph.to_text(None))?;
    write(&with_ext("json"), &(serde_json::to_string_pretty(&summary).expect("plain JSON") + "\n"))?;
    clock.lap("write");
    Ok(RunResult {
        input: Some(mis.display().to_string()),
        stats: Some(Stats { n: lb.graph.n(), m: lb.graph.m(), k: e.k(), nodes: e.len(), max_table: None }),
        details: summary,
        ..RunResult::default()
    })
}

fn dispatch(cli: &Cli, clock: &mut Clock) -> Result<(RunResult, String), Failure> {
    let mut text = String::new();
    let r = match &cli.command {
        Command::Validate { file } => {
            let e = load_expr(file)?;
            let report = validate(&e);
            clock.lap("validate");
            for f in &report.findings {
                text.push_str(&format!("{f}\n"));
            }
            RunResult {
                command: "validate".into(),
                input: Some(file.display().to_string()),
                answer: Some(report.is_ok()),
                details: json!({ "findings": report.findings, "nodes": e.len(), "k": e.k() }),
                ..RunResult::default()
            }
        }
        Command::Normalize { file, output } => {
            let e = load_expr(file)?;
            eval_graph(&e)?;
            let ne = normalize(&e);
            clock.lap("normalize");
            let out = serialize(&ne);
            match output {
                Some(p) => write(p, &out)?,
                None => text.push_str(&out),
            }
            RunResult {
                command: "normalize".into(),
                input: Some(file.display().to_string()),
                details: json!({ "expression": out, "nodes": ne.len() }),
                ..RunResult::default()
            }
        }
        Command::Eval { file, output } => {
            let e = load_expr(file)?;
            let ev = evaluate(&e).map_err(|x| anyhow!(x))?;
            clock.lap("evaluate");
            let out = ev.graph.to_text();
            match output {
                Some(p) => write(p, &out)?,
                None => text.push_str(&out),
            }
            RunResult {
                command: "eval".into(),
                input: Some(file.display().to_string()),
                stats: Some(stats_of(&e, &ev.graph.graph)),
                details: json!({ "graph": out, "irredundant": ev.all_joins_irredundant(), "linear": e.is_linear() }),
                ..RunResult::default()
            }
        }
        Command::Solve { problem, file, budget, no_reduce } => {
            let mut r = run_solve(*problem, file, *budget, *no_reduce, clock)?;
            r.command = format!("solve {}", problem_name(*problem));
            r
        }
        Command::Oracle { problem, file, budget } => {
            let mut r = run_oracle(*problem, file, *budget, clock)?;
            r.command = format!("oracle {}", problem_name(*problem));
            r
        }
        Command::Gen(GenCommand::Lb { mis, override_c, override_d, style, max_vertices, prefix }) => {
            let mut r = run_gen_lb(mis, *override_c, *override_d, *style, *max_vertices, prefix, clock)?;
            r.command = "gen lb".into();
            r
        }
        Command::Gen(GenCommand::Random { n, k, seed, profile, output }) => {
            let e = gen_random_expr(*n, *k, *seed, &profile.profile()).map_err(|x| anyhow!(x))?;
            let g = eval_graph(&e)?;
            clock.lap("generate");
            let out = serialize(&e);
            match output {
                Some(p) => write(p, &out)?,
                None => text.push_str(&out),
            }
            RunResult {
                command: "gen random".into(),
                stats: Some(stats_of(&e, &g)),
                details: json!({ "expression": out, "seed": seed }),
                ..RunResult::default()
            }
        }
        Command::Check(CheckCommand::Gadgets { c, d, n }) => {
            if *c == 0 || *d == 0 || *n == 0 {
                return Err(Failure::Usage(anyhow!("C, D and n must be positive")));
            }
            let report = audit_gadgets(*c, *d, *n)?;
            clock.lap("audit");
            for it in &report.items {
                let status = if it.pass { "pass" } else { "FAIL" };
                let premise = if it.hypothesis_met { "" } else { " (premise not met)" };
                text.push_str(&format!(
                    "{status} {}: {} [expected {}, observed {}]{premise}\n",
                    it.gadget, it.item, it.expected, it.observed
                ));
            }
            RunResult {
                command: "check gadgets".into(),
                answer: Some(report.all_pass()),
                details: serde_json::to_value(&report).expect("plain data"),
                ..RunResult::default()
            }
        }
        Command::Fuzz(a) => {
            let checks = fuzz::checkers(&a.which)
                .ok_or_else(|| anyhow!("unknown solver `{}`; use hc, eds, maxcut or all", a.which))?;
            let cfg = fuzz::FuzzConfig { n: a.n, k: a.k, count: a.count, seed: a.seed };
            let report = fuzz::fuzz(&cfg, &checks, Some(&a.out)).context("saving failures")?;
            clock.lap("fuzz");
            for s in &report.checks {
                text.push_str(&format!(
                    "{}: {}/{} agreements, {} mismatches, {} refused\n",
                    s.check, s.agreements, s.cases, s.mismatches, s.refused
                ));
            }
            for f in &report.failures {
                text.push_str(&format!("mismatch {} case {} (seed {}): {}\n", f.check, f.case, f.seed, f.detail));
            }
            RunResult {
                command: "fuzz".into(),
                answer: Some(report.clean()),
                details: serde_json::to_value(&report).expect("plain data"),
                ..RunResult::default()
            }
        }
    };
    Ok((r, text))
}

fn human(r: &RunResult, body: &str) -> String {
    let mut s = String::new();
    s.push_str(body);
    let yn = |b: bool| if b { "yes" } else { "no" };
    if !r.command.starts_with("validate") || r.answer == Some(true) {
        if let Some(a) = r.answer {
            s.push_str(&format!("answer: {}\n", yn(a)));
        }
    } else {
        s.push_str("answer: invalid\n");
    }
    if let Some(o) = r.optimum {
        s.push_str(&format!("optimum: {o}\n"));
    }
    if r.fallback {
        s.push_str("fallback: brute force (expression has redundant joins)\n");
    }
    if let Some(st) = &r.stats {
        s.push_str(&format!("vertices: {}, edges: {}, k: {}, nodes: {}\n", st.n, st.m, st.k, st.nodes));
        if let Some(t) = st.max_table {
            s.push_str(&format!("largest DP state: {t}\n"));
        }
    }
    if r.command == "gen lb" {
        s.push_str(&format!("budget: {}\n", r.details["budget"].as_str().unwrap_or("?")));
    }
    if let Some(ts) = &r.timings {
        for t in ts {
            s.push_str(&format!("time {}: {:.3} ms\n", t.phase, t.ms));
        }
    }
    s
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Output {
    let mut clock = Clock::new(cli.timings);
    match dispatch(cli, &mut clock) {
        Ok((mut r, body)) => {
            r.exit_code = decision(r.answer);
            r.timings = clock.finish();
            let stdout =
                if cli.json { serde_json::to_string_pretty(&r).expect("plain JSON") + "\n" } else { human(&r, &body) };
            Output { code: r.exit_code, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(e)) => Output { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e:#}\n") },
        Err(Failure::Refused(msg)) => {
            Output { code: EXIT_REFUSED, stdout: String::new(), stderr: format!("refused: {msg}\n") }
        }
    }
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: rendered }
            } else {
                Output { code, stdout: rendered, stderr: String::new() }
            }
        }
    }
}
