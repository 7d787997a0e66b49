use mcw_core::eds::solve_eds_with;
use mcw_core::expr::{
    evaluate, gen_random_expr, is_normalized, normalize, parse, serialize, GeneratorProfile, MultiExpr,
};
use mcw_core::graph::{
    min_edge_dominating_set_direct, oracle_eds, oracle_hamiltonian_cycle, oracle_max_cut, SimpleGraph,
};
use mcw_core::hamcycle::{solve_hc_with, HcOptions};
use mcw_core::maxcut::solve_max_cut;
use mcw_core::Label;
use proptest::prelude::*;

fn expr(n: usize, k: Label, seed: u64, profile: &GeneratorProfile) -> MultiExpr {
    gen_random_expr(n, k, seed, profile).unwrap()
}

fn graph(e: &MultiExpr) -> SimpleGraph {
    evaluate(e).unwrap().graph.graph
}

fn profiles() -> impl Strategy<Value = GeneratorProfile> {
    prop_oneof![
        Just(GeneratorProfile::default()),
        Just(GeneratorProfile::linear()),
        Just(GeneratorProfile::dense()),
        Just(GeneratorProfile::irredundant()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_round_trips(n in 1usize..10, k in 1u32..5, seed: u64, p in profiles()) {
        let e = expr(n, k, seed, &p);
        let back = parse(&serialize(&e)).unwrap();
        prop_assert_eq!(serialize(&back), serialize(&e));
        prop_assert!(graph(&back).diff_by_id(&graph(&e)).is_none());
    }

    #[test]
    fn normalize_preserves_labeled_graph(n in 1usize..10, k in 1u32..5, seed: u64, p in profiles()) {
        let e = expr(n, k, seed, &p);
        let ne = normalize(&e);
        prop_assert!(is_normalized(&ne));
        prop_assert_eq!(ne.k(), e.k());
        prop_assert_eq!(evaluate(&ne).unwrap().graph, evaluate(&e).unwrap().graph);
    }

    #[test]
    fn hc_matches_oracle(n in 1usize..9, k in 1u32..4, seed: u64, p in profiles()) {
        let e = expr(n, k, seed, &p);
        let want = oracle_hamiltonian_cycle(&graph(&e)).unwrap();
        let got = solve_hc_with(&e, HcOptions::default()).unwrap();
        prop_assert_eq!(got.answer, want);
    }

    #[test]
    fn hc_reduction_is_sound(n in 1usize..7, k in 1u32..4, seed: u64) {
        let e = expr(n, k, seed, &GeneratorProfile::dense());
        let reduced = solve_hc_with(&e, HcOptions { reduce: true, parallel: false }).unwrap();
        let full = solve_hc_with(&e, HcOptions { reduce: false, parallel: false }).unwrap();
        prop_assert_eq!(reduced.answer, full.answer);
        prop_assert!(reduced.max_family <= full.max_family);
    }

    #[test]
    fn hc_statistics_ignore_scheduling(n in 3usize..9, k in 1u32..4, seed: u64) {
        let e = expr(n, k, seed, &GeneratorProfile::dense());
        let a = solve_hc_with(&e, HcOptions::default()).unwrap();
        let b = solve_hc_with(&e, HcOptions::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn eds_matches_oracle(n in 1usize..10, k in 1u32..5, seed: u64, p in profiles()) {
        let e = expr(n, k, seed, &p);
        let g = graph(&e);
        let want = oracle_eds(&g).unwrap() as u32;
        let out = solve_eds_with(&e, 0).unwrap();
        prop_assert_eq!(out.optimum, want);
        for t in 0..=g.m() as u32 {
            prop_assert_eq!(solve_eds_with(&e, t).unwrap().answer, want <= t);
        }
    }

    #[test]
    fn eds_reformulation(n in 1usize..8, k in 1u32..4, seed: u64) {
        let g = graph(&expr(n, k, seed, &GeneratorProfile::dense()));
        prop_assert_eq!(oracle_eds(&g).unwrap(), min_edge_dominating_set_direct(&g).unwrap());
    }

    #[test]
    fn max_cut_matches_oracle(n in 1usize..13, k in 1u32..4, seed: u64) {
        let e = expr(n, k, seed, &GeneratorProfile::irredundant());
        let want = oracle_max_cut(&graph(&e)).unwrap() as u64;
        let out = solve_max_cut(&e, Some(want)).unwrap();
        prop_assert!(!out.fallback);
        prop_assert_eq!(out.optimum, want);
        prop_assert_eq!(out.answer, Some(true));
        prop_assert_eq!(solve_max_cut(&e, Some(want + 1)).unwrap().answer, Some(false));
    }

    #[test]
    fn max_cut_with_redundant_joins(n in 1usize..10, k in 1u32..4, seed: u64) {
        let e = expr(n, k, seed, &GeneratorProfile::dense());
        let want = oracle_max_cut(&graph(&e)).unwrap() as u64;
        prop_assert_eq!(solve_max_cut(&e, None).unwrap().optimum, want);
    }
}
