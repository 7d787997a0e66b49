//! Acceptance suite: one line per criterion, nonzero exit on an unexpected failure.

use std::collections::{BTreeSet, HashMap};
use std::process::Command;
use std::time::Instant;

use mcw_core::eds::solve_eds_with;
use mcw_core::expr::{evaluate, gen_random_expr, is_linear, is_normalized, normalize, GeneratorProfile, MultiExpr};
use mcw_core::graph::{
    min_edge_dominating_set_direct, oracle_eds, oracle_hamiltonian_cycle, oracle_max_cut, AuxMultigraph, SimpleGraph,
};
use mcw_core::hamcycle::{
    check_red_blue_eulerian, family_dp, family_size_bound, reduce, solve_hc_with, HcInstance, HcOptions,
};
use mcw_core::lbgen::{audit_gadgets, build_expression, build_instance, GadgetKind, LbOptions, MisInstance};
use mcw_core::maxcut::solve_max_cut;
use mcw_core::Label;

/// Outcome of one criterion.
struct Verdict {
    pass: bool,
    summary: String,
    /// A failure recorded as a known deviation rather than a regression.
    documented: bool,
}

fn pass(summary: String) -> Verdict {
    Verdict { pass: true, summary, documented: false }
}

fn fail(summary: String) -> Verdict {
    Verdict { pass: false, summary, documented: false }
}

const PROFILES: [fn() -> GeneratorProfile; 4] =
    [GeneratorProfile::default, GeneratorProfile::linear, GeneratorProfile::dense, GeneratorProfile::irredundant];

fn gen(n: usize, k: Label, seed: u64, profile: &GeneratorProfile) -> MultiExpr {
    gen_random_expr(n, k, seed, profile).expect("generator succeeds")
}

fn graph(e: &MultiExpr) -> SimpleGraph {
    evaluate(e).expect("generated expressions are valid").graph.graph
}

fn seed_of(base: u64, i: usize) -> u64 {
    base * 1_000_003 + i as u64
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let (mut total, mut agree, mut yes) = (0, 0, 0);
    for base in 1..=5u64 {
        for i in 0..100 {
            let (n, mut k) = (3 + i % 8, 1 + (i / 8) as Label % 4);
            // Half the cases are edge-rich so that Hamiltonian graphs are common.
            let seed = seed_of(base, i);
            let e = if i % 2 == 0 {
                k = k.max(2);
                // Ask for n edges, settling for fewer when the generator cannot reach them.
                (0..=n)
                    .rev()
                    .find_map(|m| {
                        gen_random_expr(n, k, seed, &GeneratorProfile { min_edges: m, ..GeneratorProfile::dense() })
                            .ok()
                    })
                    .expect("min_edges 0 always succeeds")
            } else {
                gen(n, k, seed, &PROFILES[i / 2 % 4]())
            };
            let want = oracle_hamiltonian_cycle(&graph(&e)).unwrap();
            let got = solve_hc_with(&e, HcOptions::default()).unwrap().answer;
            total += 1;
            agree += usize::from(got == want);
            yes += usize::from(want);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let summary = format!("{agree}/{total} agree ({yes} Hamiltonian), n<=10, k<=4, 5 seeds, {secs:.1}s");
    if agree == total && secs < 300.0 {
        pass(summary)
    } else {
        fail(summary)
    }
}

fn criterion_2() -> Verdict {
    let (mut total, mut agree, mut checked, mut violations) = (0, 0, 0usize, 0usize);
    for i in 0..400 {
        let (n, k) = (1 + i % 7, 1 + (i / 7) as Label % 3);
        let e = gen(n, k, seed_of(7, i), &PROFILES[i % 4]());
        let on = solve_hc_with(&e, HcOptions { reduce: true, parallel: true }).unwrap();
        let off = solve_hc_with(&e, HcOptions { reduce: false, parallel: true }).unwrap();
        total += 1;
        agree += usize::from(on.answer == off.answer);
        // Size bound on every reduced family along one closing edge.
        let inst = HcInstance::new(&e).unwrap();
        if let Some(&edge) = inst.candidate_edges.first() {
            let endpoint: HashMap<_, _> =
                [(edge.0, inst.order as Label - 1), (edge.1, inst.order as Label)].into_iter().collect();
            family_dp(&inst.normalized, inst.order, &endpoint, &inst.vertices, true, &mut |ev| {
                if let Some(kept) = ev.kept {
                    checked += 1;
                    if kept.len() as f64 > family_size_bound(ev.vertices.max(1), inst.order) {
                        violations += 1;
                    }
                }
            });
        }
    }
    let summary =
        format!("{agree}/{total} reduce on/off agree; {checked} node families, {violations} size-bound violations");
    if agree == total && violations == 0 && checked > 0 {
        pass(summary)
    } else {
        fail(summary)
    }
}

/// Every multiset of `edges` edges (loops allowed) on labels `1..=order`.
fn all_multigraphs(order: usize, edges: usize) -> Vec<AuxMultigraph> {
    let pairs: Vec<(Label, Label)> =
        (1..=order as Label).flat_map(|a| (a..=order as Label).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn go(
        pairs: &[(Label, Label)],
        from: usize,
        left: usize,
        pick: &mut Vec<(Label, Label)>,
        order: usize,
        out: &mut Vec<AuxMultigraph>,
    ) {
        if left == 0 {
            out.push(AuxMultigraph::from_edges(order, pick));
            return;
        }
        for t in from..pairs.len() {
            pick.push(pairs[t]);
            go(pairs, t, left - 1, pick, order, out);
            pick.pop();
        }
    }
    go(&pairs, 0, edges, &mut pick, order, &mut out);
    out
}

fn criterion_3() -> Verdict {
    // Families observed in the DP before reduction, split by edge count.
    let mut families: Vec<Vec<AuxMultigraph>> = Vec::new();
    let mut seen = BTreeSet::new();
    'gen: for i in 0..400 {
        let e = gen(2 + i % 5, 1 + (i % 2) as Label, seed_of(11, i), &PROFILES[i % 4]());
        let inst = HcInstance::new(&e).unwrap();
        if inst.order > 4 {
            continue;
        }
        for &edge in inst.candidate_edges.iter().take(2) {
            let endpoint: HashMap<_, _> =
                [(edge.0, inst.order as Label - 1), (edge.1, inst.order as Label)].into_iter().collect();
            family_dp(&inst.normalized, inst.order, &endpoint, &inst.vertices, true, &mut |ev| {
                let mut by_size: HashMap<usize, Vec<AuxMultigraph>> = HashMap::new();
                for m in ev.raw {
                    by_size.entry(m.edge_count()).or_default().push(m.clone());
                }
                for (size, mut fam) in by_size {
                    fam.sort();
                    fam.dedup();
                    if (1..=4).contains(&size) && fam.len() >= 2 && seen.insert(fam.clone()) {
                        families.push(fam);
                    }
                }
            });
            if families.len() >= 150 {
                break 'gen;
            }
        }
    }
    let mut blue_checked = 0usize;
    let mut counterexamples = 0usize;
    let mut shrunk = 0usize;
    let mut cache: HashMap<(usize, usize), Vec<AuxMultigraph>> = HashMap::new();
    for fam in &families {
        let (order, size) = (fam[0].order(), fam[0].edge_count());
        let reps = reduce(fam);
        shrunk += usize::from(reps.len() < fam.len());
        let blues = cache.entry((order, size)).or_insert_with(|| all_multigraphs(order, size));
        for b in blues.iter() {
            blue_checked += 1;
            let full = fam.iter().any(|a| check_red_blue_eulerian(a, b).unwrap());
            let kept = reps.iter().any(|a| check_red_blue_eulerian(a, b).unwrap());
            if full && !kept {
                counterexamples += 1;
            }
        }
    }
    let summary = format!(
        "{} families ({shrunk} shrunk by reduce), {blue_checked} family/blue pairs, {counterexamples} counterexamples",
        families.len()
    );
    if families.len() >= 100 && counterexamples == 0 {
        pass(summary)
    } else {
        fail(summary)
    }
}

fn criterion_4() -> Verdict {
    let (mut total, mut thresholds, mut bad) = (0, 0, 0);
    for i in 0..500 {
        let (n, k) = (1 + i % 10, 1 + (i / 10) as Label % 4);
        let e = gen(n, k, seed_of(13, i), &PROFILES[i % 4]());
        let g = graph(&e);
        let want = oracle_eds(&g).unwrap() as u32;
        total += 1;
        let mut ok = solve_eds_with(&e, 0).unwrap().optimum == want;
        for t in 0..=g.m() as u32 {
            thresholds += 1;
            ok &= solve_eds_with(&e, t).unwrap().answer == (want <= t);
        }
        bad += usize::from(!ok);
    }
    let summary = format!("{}/{total} expressions exact over {thresholds} thresholds", total - bad);
    if bad == 0 {
        pass(summary)
    } else {
        fail(summary)
    }
}

/// Smallest adjacency encoding over all vertex permutations.
fn canonical(n: usize, adj: &[u8]) -> Vec<u8> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u8>> = None;
    loop {
        let mut code = vec![0u8; n];
        for (v, row) in code.iter_mut().enumerate() {
            for w in 0..n {
                if adj[perm[v]] >> perm[w] & 1 == 1 {
                    *row |= 1 << w;
                }
            }
        }
        if best.as_ref().map_or(true, |b| code < *b) {
            best = Some(code);
        }
        // Next permutation.
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best.unwrap_or_default()
}

fn to_graph(n: usize, adj: &[u8]) -> SimpleGraph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v))).collect();
    SimpleGraph::from_index_edges(n, &edges).unwrap()
}

fn extend(n: usize, reps: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for adj in reps {
        for nb in 0..1u8 << n {
            let mut next = adj.clone();
            next.push(nb);
            for (v, row) in next.iter_mut().enumerate().take(n) {
                if nb >> v & 1 == 1 {
                    *row |= 1 << n;
                }
            }
            out.push(next);
        }
    }
    out
}

fn criterion_5() -> Verdict {
    // Isomorphism-class representatives up to 6 vertices; every 7-vertex graph
    // is isomorphic to a 6-vertex representative plus one vertex.
    let mut reps: Vec<Vec<u8>> = vec![vec![]];
    let mut tested = 0usize;
    let mut exceptions = 0usize;
    let mut check = |n: usize, adj: &[u8]| {
        let g = to_graph(n, adj);
        tested += 1;
        if oracle_eds(&g).unwrap() != min_edge_dominating_set_direct(&g).unwrap() {
            exceptions += 1;
        }
    };
    let mut classes = Vec::new();
    for n in 1..=6 {
        let mut uniq = BTreeSet::new();
        for adj in extend(n - 1, &reps) {
            uniq.insert(canonical(n, &adj));
        }
        reps = uniq.into_iter().collect();
        classes.push(reps.len());
        for adj in &reps {
            check(n, adj);
        }
    }
    for adj in extend(6, &reps) {
        check(7, &adj);
    }
    let summary = format!("{tested} graphs (all isomorphism classes up to 6 vertices {classes:?}, 7-vertex cover set), {exceptions} exceptions");
    if exceptions == 0 && classes == [1, 2, 4, 11, 34, 156] {
        pass(summary)
    } else {
        fail(summary)
    }
}

fn criterion_6() -> Verdict {
    let (mut total, mut agree, mut fallbacks) = (0, 0, 0);
    for i in 0..300 {
        let (n, k) = (2 + i % 13, 1 + (i / 13) as Label % 3);
        let e = gen(n, k, seed_of(17, i), &GeneratorProfile::irredundant());
        let want = oracle_max_cut(&graph(&e)).unwrap() as u64;
        let out = solve_max_cut(&e, None).unwrap();
        total += 1;
        agree += usize::from(out.optimum == want);
        fallbacks += usize::from(out.fallback);
    }
    let summary = format!("{agree}/{total} exact, {fallbacks} oracle fallbacks, n<=14, k<=3");
    if agree == total && fallbacks == 0 {
        pass(summary)
    } else {
        fail(summary)
    }
}

fn criterion_7() -> Verdict {
    let (mut items, mut failures, mut unexplained) = (0, Vec::new(), 0);
    let mut values_ok = true;
    for c in 1..=3 {
        for d in 1..=2 {
            let r = audit_gadgets(c, d, 1).unwrap();
            items += r.items.len();
            for it in &r.items {
                if it.item.starts_with("mcut") {
                    values_ok &= it.pass;
                }
                if !it.pass {
                    failures.push(format!("{}: {}", it.gadget, it.item));
                    unexplained += usize::from(it.hypothesis_met);
                }
            }
        }
    }
    let summary = format!(
        "{items} items over C in 1..=3, D in 1..=2, n=1; closed-form values exact: {values_ok}; {} items fail, \
         all where C < D^2*C(2n,2)+1 or t > n",
        failures.len()
    );
    if failures.is_empty() {
        pass(summary)
    } else {
        Verdict { pass: false, summary, documented: values_ok && unexplained == 0 }
    }
}

fn criterion_8() -> Verdict {
    let mis = MisInstance::new(3, 2, vec![(1, 0, 2, 1)]).unwrap();
    let opts = LbOptions::default();
    let inst = build_instance(&mis, &opts).unwrap();
    let e = build_expression(&mis, &opts).unwrap();
    let ev = evaluate(&e).unwrap();
    let p = &inst.params;
    let k = p.k;
    let checks = [
        ("D=30", p.d == 30),
        ("C=901", p.c == 901),
        ("|E(A,B)|=D", inst.selection_edge_count() as u128 == p.d),
        (
            "outer F' count=N",
            inst.outer_count(|g| *g == GadgetKind::FPrime) as u128 == p.outer_fprime && p.outer_fprime == 4,
        ),
        ("graph equality", ev.graph.graph.diff_by_id(&inst.graph).is_none()),
        ("linear", is_linear(&e)),
        ("labels<=3k+32", e.labels_used().len() <= 3 * k + 32),
        ("joins irredundant", ev.all_joins_irredundant()),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let summary = format!(
        "{} vertices, {} edges, {} labels used (3k+32={}), {} nodes; failed: {failed:?}",
        inst.graph.n(),
        inst.graph.m(),
        e.labels_used().len(),
        3 * k + 32,
        e.len()
    );
    if failed.is_empty() {
        pass(summary)
    } else {
        fail(summary)
    }
}

fn criterion_9() -> Verdict {
    let (mut total, mut same, mut shaped) = (0, 0, 0);
    for i in 0..1000 {
        let (n, k) = (1 + i % 12, 1 + (i / 12) as Label % 5);
        let e = gen(n, k, seed_of(19, i), &PROFILES[i % 4]());
        let ne = normalize(&e);
        total += 1;
        same += usize::from(evaluate(&ne).unwrap().graph == evaluate(&e).unwrap().graph);
        shaped += usize::from(is_normalized(&ne));
    }
    let summary = format!("{same}/{total} equal labeled graphs, {shaped}/{total} in normal shape");
    if same == total && shaped == total {
        pass(summary)
    } else {
        fail(summary)
    }
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).display().to_string();
    std::fs::write(
        p("c4.expr"),
        "(join 1 2 (union (union (intro a (1)) (intro c (1))) (union (intro b (2)) (intro d (2)))))",
    )
    .unwrap();
    std::fs::write(p("m.mis"), "mis 3 2\ne 1 0 2 1\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_mcw");
    let gen = Command::new(bin)
        .args(["gen", "random", "--n", "8", "--k", "3", "--seed", "42", "-o", &p("r.expr")])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let (c4, r, mis, lb, fz) = (p("c4.expr"), p("r.expr"), p("m.mis"), p("lb"), p("fz"));
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", &r],
        vec!["normalize", &r],
        vec!["eval", &r],
        vec!["solve", "hc", &r],
        vec!["solve", "hc", &c4],
        vec!["solve", "eds", &r, "--budget", "2"],
        vec!["solve", "maxcut", &r],
        vec!["oracle", "hc", &r],
        vec!["oracle", "eds", &r],
        vec!["oracle", "maxcut", &r],
        vec!["gen", "random", "--n", "9", "--k", "3", "--seed", "5", "--profile", "dense"],
        vec!["gen", "lb", "--mis", &mis, "--override-C", "2", "--override-D", "2", "-o", &lb],
        vec!["check", "gadgets", "--C", "2", "--D", "2", "--n", "1"],
        vec!["fuzz", "--n", "7", "--k", "3", "--count", "40", "--seed", "9", "--out", &fz],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        let run = || {
            let o = Command::new(bin).args(args).arg("--json").output().unwrap();
            let files = if args[1] == "lb" {
                ["expr", "graph", "json"].iter().map(|x| std::fs::read(format!("{lb}.{x}")).unwrap()).collect()
            } else {
                Vec::new()
            };
            (o.stdout, o.status.code(), files)
        };
        if run() != run() {
            differing.push(args.join(" "));
        }
    }
    let summary = format!("{} commands run twice, byte-identical JSON; differing: {differing:?}", commands.len());
    if differing.is_empty() {
        pass(summary)
    } else {
        fail(summary)
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 10] = [
        ("HC differential", criterion_1),
        ("HC reduce soundness and family size bound", criterion_2),
        ("representation property of reduce", criterion_3),
        ("EDS differential", criterion_4),
        ("EDS reformulation", criterion_5),
        ("Max Cut differential", criterion_6),
        ("gadget audit", criterion_7),
        ("lower-bound generator structure", criterion_8),
        ("normalization", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut regressions = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        let status = match (v.pass, v.documented) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known deviation)",
            (false, false) => "FAIL",
        };
        println!("criterion {:>2} {status}: {name}: {} [{:.1}s]", i + 1, v.summary, start.elapsed().as_secs_f64());
        regressions += usize::from(!v.pass && !v.documented);
    }
    if regressions > 0 {
        println!("{regressions} criteria failed");
        std::process::exit(1);
    }
}
