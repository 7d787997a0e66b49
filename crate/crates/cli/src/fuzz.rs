//! Differential fuzzing of the expression solvers against brute-force oracles.

use std::path::Path;

use mcw_core::eds::solve_eds_with;
use mcw_core::expr::{
    evaluate, gen_random_expr, serialize, validate, ExprBuilder, GeneratorProfile, MultiExpr, Node, NodeId,
};
use mcw_core::graph::{oracle_eds, oracle_hamiltonian_cycle, oracle_max_cut, SimpleGraph};
use mcw_core::hamcycle::solve_hc;
use mcw_core::maxcut::solve_max_cut;
use mcw_core::Label;
use rayon::prelude::*;
use serde::Serialize;

/// A solver compared against its oracle on one expression.
pub trait Checker: Sync {
    fn name(&self) -> &'static str;

    /// Profile used to generate this checker's expressions.
    fn profile(&self, case: usize) -> GeneratorProfile {
        PROFILES[case % PROFILES.len()]()
    }

    /// `Ok(None)` on agreement, `Ok(Some(detail))` on a mismatch, `Err` when
    /// the solver or oracle refuses the instance.
    fn check(&self, e: &MultiExpr, g: &SimpleGraph) -> Result<Option<String>, String>;
}

const PROFILES: [fn() -> GeneratorProfile; 4] =
    [GeneratorProfile::default, GeneratorProfile::linear, GeneratorProfile::dense, GeneratorProfile::irredundant];

fn differ<T: PartialEq + std::fmt::Debug>(solver: T, oracle: T) -> Option<String> {
    (solver != oracle).then(|| format!("solver {solver:?}, oracle {oracle:?}"))
}

pub struct HcCheck;
pub struct EdsCheck;
pub struct MaxCutCheck;

impl Checker for HcCheck {
    fn name(&self) -> &'static str {
        "hc"
    }

    fn check(&self, e: &MultiExpr, g: &SimpleGraph) -> Result<Option<String>, String> {
        let want = oracle_hamiltonian_cycle(g).map_err(|x| x.to_string())?;
        Ok(differ(solve_hc(e).map_err(|x| x.to_string())?, want))
    }
}

impl Checker for EdsCheck {
    fn name(&self) -> &'static str {
        "eds"
    }

    fn check(&self, e: &MultiExpr, g: &SimpleGraph) -> Result<Option<String>, String> {
        let want = oracle_eds(g).map_err(|x| x.to_string())? as u32;
        for t in 0..=g.m() as u32 {
            let out = solve_eds_with(e, t).map_err(|x| x.to_string())?;
            if out.answer != (want <= t) || out.optimum != want {
                return Ok(Some(format!(
                    "budget {t}: solver ({}, optimum {}), oracle optimum {want}",
                    out.answer, out.optimum
                )));
            }
        }
        Ok(None)
    }
}

impl Checker for MaxCutCheck {
    fn name(&self) -> &'static str {
        "maxcut"
    }

    /// Irredundant expressions keep the class DP on its own path.
    fn profile(&self, _case: usize) -> GeneratorProfile {
        GeneratorProfile::irredundant()
    }

    fn check(&self, e: &MultiExpr, g: &SimpleGraph) -> Result<Option<String>, String> {
        let want = oracle_max_cut(g).map_err(|x| x.to_string())? as u64;
        let out = solve_max_cut(e, None).map_err(|x| x.to_string())?;
        Ok(differ(out.optimum, want))
    }
}

pub fn checkers(which: &str) -> Option<Vec<Box<dyn Checker>>> {
    let all: Vec<Box<dyn Checker>> = vec![Box::new(HcCheck), Box::new(EdsCheck), Box::new(MaxCutCheck)];
    match which {
        "all" => Some(all),
        name => {
            let one: Vec<_> = all.into_iter().filter(|c| c.name() == name).collect();
            (!one.is_empty()).then_some(one)
        }
    }
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub n: usize,
    pub k: Label,
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckSummary {
    pub check: String,
    pub cases: usize,
    pub agreements: usize,
    pub mismatches: usize,
    pub refused: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub check: String,
    pub case: usize,
    pub seed: u64,
    pub detail: String,
    pub original_nodes: usize,
    pub minimized_nodes: usize,
    /// The minimized failing expression.
    pub expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saved_to: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub n: usize,
    pub k: Label,
    pub count: usize,
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
    /// Generation errors, by case.
    pub generation_errors: Vec<(usize, String)>,
}

impl FuzzReport {
    pub fn clean(&self) -> bool {
        self.failures.is_empty() && self.generation_errors.is_empty()
    }
}

/// Seed of case `i`: distinct, deterministic, and spread over the seed space.
pub fn case_seed(seed: u64, case: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(case as u64)
}

/// Case index, seed, and the generated expression with its verdict.
type CaseResult = (usize, u64, Result<(MultiExpr, Verdict), String>);

enum Verdict {
    Agree,
    Mismatch(String),
    Refused,
}

fn run_case(c: &dyn Checker, e: &MultiExpr) -> Verdict {
    let g = match evaluate(e) {
        Ok(ev) => ev.graph.graph,
        Err(err) => return Verdict::Mismatch(format!("generated expression does not evaluate: {err}")),
    };
    match c.check(e, &g) {
        Ok(None) => Verdict::Agree,
        Ok(Some(d)) => Verdict::Mismatch(d),
        Err(_) => Verdict::Refused,
    }
}

/// Rebuilds `e` with node `drop` replaced by its `keep`-th child.
fn without_node(e: &MultiExpr, drop: usize, keep: usize) -> Option<MultiExpr> {
    fn go(e: &MultiExpr, id: NodeId, drop: usize, keep: usize, b: &mut ExprBuilder) -> Option<NodeId> {
        let node = e.node(id);
        if id.index() == drop {
            let child = node.children().nth(keep)?;
            return go(e, child, drop, keep, b);
        }
        Some(match node {
            Node::Intro { vertex, labels } => b.intro(vertex.clone(), *labels),
            Node::Union(l, r) => {
                let l = go(e, *l, drop, keep, b)?;
                let r = go(e, *r, drop, keep, b)?;
                b.union(l, r)
            }
            &Node::Join { i, j, child } => {
                let c = go(e, child, drop, keep, b)?;
                b.join(i, j, c)
            }
            &Node::Relabel { i, to, child } => {
                let c = go(e, child, drop, keep, b)?;
                b.relabel(i, to, c)
            }
        })
    }
    let mut b = ExprBuilder::new();
    let root = go(e, e.root(), drop, keep, &mut b)?;
    let out = b.finish(root, Some(e.k())).ok()?;
    validate(&out).is_ok().then_some(out)
}

/// Greedily deletes nodes while the expression stays valid and keeps failing.
pub fn minimize(c: &dyn Checker, e: &MultiExpr) -> MultiExpr {
    let mut cur = e.clone();
    'outer: loop {
        for drop in (0..cur.len()).rev() {
            for keep in 0..2 {
                if let Some(cand) = without_node(&cur, drop, keep) {
                    if matches!(run_case(c, &cand), Verdict::Mismatch(_)) {
                        cur = cand;
                        continue 'outer;
                    }
                }
            }
        }
        return cur;
    }
}

/// Runs every checker on `count` generated expressions. Failing expressions are
/// minimized and, when `out_dir` is given, written there.
pub fn fuzz(cfg: &FuzzConfig, checks: &[Box<dyn Checker>], out_dir: Option<&Path>) -> std::io::Result<FuzzReport> {
    let mut summaries = Vec::new();
    let mut failures = Vec::new();
    let mut generation_errors = Vec::new();
    for c in checks {
        let results: Vec<CaseResult> = (0..cfg.count)
            .into_par_iter()
            .map(|case| {
                let seed = case_seed(cfg.seed, case);
                let res = gen_random_expr(cfg.n, cfg.k, seed, &c.profile(case))
                    .map(|e| {
                        let v = run_case(c.as_ref(), &e);
                        (e, v)
                    })
                    .map_err(|err| err.to_string());
                (case, seed, res)
            })
            .collect();
        let mut s = CheckSummary { check: c.name().into(), cases: cfg.count, ..CheckSummary::default() };
        for (case, seed, res) in results {
            match res {
                Err(err) => generation_errors.push((case, err)),
                Ok((_, Verdict::Agree)) => s.agreements += 1,
                Ok((_, Verdict::Refused)) => s.refused += 1,
                Ok((e, Verdict::Mismatch(detail))) => {
                    s.mismatches += 1;
                    let small = minimize(c.as_ref(), &e);
                    let text = serialize(&small);
                    let saved_to = match out_dir {
                        Some(dir) => {
                            std::fs::create_dir_all(dir)?;
                            let path = dir.join(format!("{}-seed{}-case{case}.expr", c.name(), cfg.seed));
                            std::fs::write(&path, &text)?;
                            Some(path.display().to_string())
                        }
                        None => None,
                    };
                    failures.push(Failure {
                        check: c.name().into(),
                        case,
                        seed,
                        detail,
                        original_nodes: e.len(),
                        minimized_nodes: small.len(),
                        expression: text,
                        saved_to,
                    });
                }
            }
        }
        summaries.push(s);
    }
    Ok(FuzzReport {
        n: cfg.n,
        k: cfg.k,
        count: cfg.count,
        seed: cfg.seed,
        checks: summaries,
        failures,
        generation_errors,
    })
}
