use std::path::Path;

use mcw_cli::fuzz::{fuzz, Checker, FuzzConfig, HcCheck};
use mcw_cli::{run_args, Output, EXIT_NO, EXIT_REFUSED, EXIT_USAGE, EXIT_YES, RUN_RESULT_SCHEMA};
use mcw_core::expr::MultiExpr;
use mcw_core::graph::SimpleGraph;
use serde_json::Value;

const K2: &str = "(join 1 2 (union (intro a (1)) (intro b (2))))";
const C4: &str = "(join 1 2 (union (union (intro a (1)) (intro c (1))) (union (intro b (2)) (intro d (2)))))";
const P3_REDUNDANT: &str = "(join 1 2 (join 1 2 (union (intro a (1)) (union (intro b (2)) (intro c (2))))))";

fn mcw(args: &[&str]) -> Output {
    run_args(std::iter::once("mcw").chain(args.iter().copied()))
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", out.stdout))
}

#[test]
fn decision_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = put(dir.path(), "c4.expr", C4);
    let k2 = put(dir.path(), "k2.expr", K2);
    assert_eq!(mcw(&["solve", "hc", &c4]).code, EXIT_YES);
    assert_eq!(mcw(&["solve", "hc", &k2]).code, EXIT_NO);
    assert_eq!(mcw(&["solve", "eds", &k2, "--budget", "0"]).code, EXIT_NO);
    assert_eq!(mcw(&["solve", "eds", &k2, "--budget", "1"]).code, EXIT_YES);
    assert_eq!(mcw(&["solve", "maxcut", &c4, "--budget", "4"]).code, EXIT_YES);
    assert_eq!(mcw(&["solve", "maxcut", &c4, "--budget", "5"]).code, EXIT_NO);
    assert_eq!(mcw(&["oracle", "hc", &c4]).code, EXIT_YES);
    assert_eq!(mcw(&["oracle", "eds", &k2, "--budget", "0"]).code, EXIT_NO);
}

#[test]
fn usage_and_refusal_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.expr").display().to_string();
    assert_eq!(mcw(&["solve", "hc", &missing]).code, EXIT_USAGE);
    assert_eq!(mcw(&["solve", "teleport", &missing]).code, EXIT_USAGE);
    let bad = put(dir.path(), "bad.expr", "(join 1 2");
    let out = mcw(&["eval", &bad]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.starts_with("error:"));

    let p3 = put(dir.path(), "p3.expr", P3_REDUNDANT);
    let out = mcw(&["solve", "maxcut", &p3, "--json"]);
    assert_eq!(out.code, EXIT_YES);
    assert_eq!(json(&out)["fallback"], Value::Bool(true));
    let mis = put(dir.path(), "m.mis", "mis 3 2\ne 1 0 2 1\n");
    let prefix = dir.path().join("lb").display().to_string();
    let out = mcw(&["gen", "lb", "--mis", &mis, "--max-vertices", "10", "-o", &prefix]);
    assert_eq!(out.code, EXIT_REFUSED, "{}", out.stderr);
}

#[test]
fn validate_reports_findings() {
    let dir = tempfile::tempdir().unwrap();
    let dup = put(dir.path(), "dup.expr", "(union (intro a (1)) (intro a (2)))");
    let out = mcw(&["validate", &dup, "--json"]);
    assert_eq!(out.code, EXIT_NO);
    assert_eq!(json(&out)["details"]["findings"].as_array().unwrap().len(), 1);
}

#[test]
fn json_output_matches_schema_and_human_output() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = put(dir.path(), "c4.expr", C4);
    let k2 = put(dir.path(), "k2.expr", K2);
    let g = put(dir.path(), "c4.graph", "g 4 4 0\nv a\nv b\nv c\nv d\ne a b\ne b c\ne c d\ne d a\n");
    let mis = put(dir.path(), "m.mis", "mis 3 2\ne 1 0 2 1\n");
    let prefix = dir.path().join("lb").display().to_string();
    let schema: Value = serde_json::from_str(RUN_RESULT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", &c4],
        vec!["normalize", &c4],
        vec!["eval", &k2],
        vec!["solve", "hc", &c4],
        vec!["solve", "eds", &k2, "--budget", "0"],
        vec!["solve", "maxcut", &c4],
        vec!["oracle", "hc", &g],
        vec!["oracle", "maxcut", &g, "--budget", "4"],
        vec!["gen", "random", "--n", "5", "--k", "2", "--seed", "7"],
        vec!["gen", "lb", "--mis", &mis, "--override-C", "1", "--override-D", "1", "-o", &prefix],
        vec!["check", "gadgets", "--C", "5", "--D", "1", "--n", "1"],
        vec!["fuzz", "--n", "5", "--k", "2", "--count", "4", "--seed", "3"],
        vec!["solve", "hc", &c4, "--timings"],
    ];
    for args in runs {
        let mut with_json = args.clone();
        with_json.push("--json");
        let out = mcw(&with_json);
        let v = json(&out);
        if let Err(e) = validator.validate(&v) {
            panic!("{args:?}: output violates schema: {e}\n{}", out.stdout);
        }
        assert_eq!(v["exit_code"].as_i64().unwrap() as i32, out.code);
        let human = mcw(&args);
        assert_eq!(human.code, out.code);
        match v["answer"].as_bool() {
            Some(a) if args[0] != "validate" => {
                assert!(human.stdout.contains(&format!("answer: {}", if a { "yes" } else { "no" })), "{}", human.stdout)
            }
            _ => {}
        }
        if let Some(o) = v["optimum"].as_u64() {
            assert!(human.stdout.contains(&format!("optimum: {o}")));
        }
    }
}

#[test]
fn gen_lb_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let mis = put(dir.path(), "m.mis", "# minimal\nmis 3 2\ne 1 0 2 1\n");
    let prefix = dir.path().join("out").display().to_string();
    let out = mcw(&["gen", "lb", "--mis", &mis, "--override-C", "2", "--override-D", "2", "-o", &prefix, "--json"]);
    assert_eq!(out.code, EXIT_YES, "{}", out.stderr);
    let e = mcw_core::expr::parse(&std::fs::read_to_string(format!("{prefix}.expr")).unwrap()).unwrap();
    let (g, _, _) = SimpleGraph::from_text(&std::fs::read_to_string(format!("{prefix}.graph")).unwrap()).unwrap();
    assert!(mcw_core::expr::evaluate(&e).unwrap().graph.graph.diff_by_id(&g).is_none());
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.json")).unwrap()).unwrap();
    assert_eq!(summary["parameters"]["N"], "4");
    assert_eq!(summary, json(&out)["details"]);
}

/// Claims every graph is Hamiltonian.
struct AlwaysYes;

impl Checker for AlwaysYes {
    fn name(&self) -> &'static str {
        "always-yes"
    }

    fn check(&self, _e: &MultiExpr, g: &SimpleGraph) -> Result<Option<String>, String> {
        let want = mcw_core::graph::oracle_hamiltonian_cycle(g).map_err(|e| e.to_string())?;
        Ok((!want).then(|| "solver true, oracle false".to_string()))
    }
}

#[test]
fn fuzz_catches_a_corrupted_solver() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FuzzConfig { n: 6, k: 2, count: 30, seed: 5 };
    let checks: Vec<Box<dyn Checker>> = vec![Box::new(AlwaysYes), Box::new(HcCheck)];
    let report = fuzz(&cfg, &checks, Some(dir.path())).unwrap();
    assert!(report.checks[0].mismatches > 0);
    assert_eq!(report.checks[1].mismatches, 0);
    for f in &report.failures {
        assert!(f.minimized_nodes <= f.original_nodes);
        let saved = std::fs::read_to_string(f.saved_to.as_ref().unwrap()).unwrap();
        let e = mcw_core::expr::parse(&saved).unwrap();
        // Still a failing case after minimization.
        let g = mcw_core::expr::evaluate(&e).unwrap().graph.graph;
        assert!(AlwaysYes.check(&e, &g).unwrap().is_some());
    }
    // A single vertex is the smallest non-Hamiltonian graph.
    assert!(report.failures.iter().any(|f| f.minimized_nodes == 1));
}

#[test]
fn fuzz_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f").display().to_string();
    let args = ["fuzz", "--n", "6", "--k", "2", "--count", "50", "--seed", "1", "--out", &out, "--json"];
    let a = mcw(&args);
    assert_eq!(a.code, EXIT_YES);
    assert_eq!(a.stdout, mcw(&args).stdout);
    assert!(!Path::new(&out).exists(), "no failures, so nothing is persisted");
}
