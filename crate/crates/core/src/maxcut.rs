//! Max Cut over a multi-expression by dynamic programming on label-set classes.
//!
//! Vertices with the same label set are interchangeable for every later
//! operation, so a node's state only records, per class, how many of its
//! vertices are on side 1. The table maps such count vectors to the most
//! crossing edges achievable so far.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{evaluate, ExprError, MultiExpr, Node};
use crate::graph::{effective_cap, oracle_max_cut, OracleError, MAX_CUT_CAP};
use crate::label::{Label, LabelSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaxCutError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("join {i},{j} re-adds existing edges; the class DP would miscount")]
    RedundantJoin { i: Label, j: Label },
    #[error("expression has redundant joins and {n} vertices, more than the oracle fallback allows ({cap})")]
    RedundantExpressionTooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Per-node DP state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassState {
    /// Live classes: label set and vertex count, sorted by label set.
    pub classes: Vec<(LabelSet, u32)>,
    /// Side-1 count per class (in `classes` order) to best crossing-edge count.
    pub table: HashMap<Vec<u32>, u64>,
}

impl ClassState {
    pub fn vertex_count(&self) -> u32 {
        self.classes.iter().map(|c| c.1).sum()
    }

    pub fn best(&self) -> u64 {
        self.table.values().copied().max().unwrap_or(0)
    }

    /// Re-keys every class by `f(label set)`, merging classes that collide.
    fn remap(self, f: impl Fn(LabelSet) -> LabelSet) -> ClassState {
        let mut keys: Vec<(LabelSet, u32)> = Vec::new();
        let mut target = Vec::with_capacity(self.classes.len());
        for &(s, n) in &self.classes {
            let t = f(s);
            match keys.iter_mut().position(|k| k.0 == t) {
                Some(p) => {
                    keys[p].1 += n;
                    target.push(p);
                }
                None => {
                    target.push(keys.len());
                    keys.push((t, n));
                }
            }
        }
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by_key(|&p| keys[p].0);
        let mut rank = vec![0; keys.len()];
        for (r, &p) in order.iter().enumerate() {
            rank[p] = r;
        }
        let classes = order.iter().map(|&p| keys[p]).collect();
        let mut table = HashMap::with_capacity(self.table.len());
        for (c, v) in self.table {
            let mut merged = vec![0; keys.len()];
            for (x, &p) in c.iter().zip(&target) {
                merged[rank[p]] += x;
            }
            let slot = table.entry(merged).or_insert(v);
            *slot = (*slot).max(v);
        }
        ClassState { classes, table }
    }
}

pub fn mc_leaf(s: LabelSet) -> ClassState {
    ClassState { classes: vec![(s, 1)], table: [(vec![0], 0), (vec![1], 0)].into_iter().collect() }
}

pub fn mc_union(a: &ClassState, b: &ClassState) -> ClassState {
    let classes: Vec<(LabelSet, u32)> = a.classes.iter().chain(&b.classes).copied().collect();
    let mut table = HashMap::with_capacity(a.table.len() * b.table.len());
    for (ca, va) in &a.table {
        for (cb, vb) in &b.table {
            let mut c = ca.clone();
            c.extend_from_slice(cb);
            table.insert(c, va + vb);
        }
    }
    ClassState { classes, table }.remap(|s| s)
}

/// Adds the edges between every `i`-vertex and every `j`-vertex, all assumed new.
pub fn mc_join(a: &ClassState, i: Label, j: Label) -> ClassState {
    let with_i: Vec<usize> = (0..a.classes.len()).filter(|&p| a.classes[p].0.contains(i)).collect();
    let with_j: Vec<usize> = (0..a.classes.len()).filter(|&p| a.classes[p].0.contains(j)).collect();
    let table = a
        .table
        .iter()
        .map(|(c, &v)| {
            let mut gain = 0u64;
            for &s in &with_i {
                for &t in &with_j {
                    let (cs, ns) = (c[s] as u64, a.classes[s].1 as u64);
                    let (ct, nt) = (c[t] as u64, a.classes[t].1 as u64);
                    gain += cs * (nt - ct) + (ns - cs) * ct;
                }
            }
            (c.clone(), v + gain)
        })
        .collect();
    ClassState { classes: a.classes.clone(), table }
}

pub fn mc_relabel(a: ClassState, i: Label, to: LabelSet) -> ClassState {
    a.remap(|s| s.relabeled(i, to))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MaxCutOutcome {
    pub optimum: u64,
    pub answer: Option<bool>,
    /// True when redundant joins forced the brute-force oracle.
    pub fallback: bool,
}

/// Runs the class DP. Fails with `RedundantJoin` on the first redundant join.
pub fn class_dp(e: &MultiExpr) -> Result<u64, MaxCutError> {
    let ev = evaluate(e)?;
    let mut slots: Vec<Option<ClassState>> = vec![None; e.len()];
    for (idx, node) in e.nodes().iter().enumerate() {
        let mut take = |c: crate::expr::NodeId| slots[c.index()].take().expect("child done");
        let st = match node {
            Node::Intro { labels, .. } => mc_leaf(*labels),
            Node::Union(l, r) => {
                let (a, b) = (take(*l), take(*r));
                mc_union(&a, &b)
            }
            &Node::Join { i, j, child } => {
                if ev.annotations[idx].irredundant != Some(true) {
                    return Err(MaxCutError::RedundantJoin { i, j });
                }
                mc_join(&take(child), i, j)
            }
            &Node::Relabel { i, to, child } => mc_relabel(take(child), i, to),
        };
        slots[idx] = Some(st);
    }
    Ok(slots.pop().flatten().expect("root done").best())
}

/// Maximum cut of the graph of `e`, and whether it reaches `budget` when given.
pub fn solve_max_cut(e: &MultiExpr, budget: Option<u64>) -> Result<MaxCutOutcome, MaxCutError> {
    let (optimum, fallback) = match class_dp(e) {
        Ok(v) => (v, false),
        Err(MaxCutError::RedundantJoin { .. }) => {
            let g = evaluate(e)?.graph.graph;
            let cap = effective_cap(MAX_CUT_CAP);
            if g.n() > cap {
                return Err(MaxCutError::RedundantExpressionTooLarge { n: g.n(), cap });
            }
            (oracle_max_cut(&g)? as u64, true)
        }
        Err(err) => return Err(err),
    };
    Ok(MaxCutOutcome { optimum, answer: budget.map(|b| optimum >= b), fallback })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn ls(l: &[Label]) -> LabelSet {
        l.iter().copied().collect()
    }

    #[test]
    fn leaf_union_join() {
        let u = mc_union(&mc_leaf(ls(&[1])), &mc_leaf(ls(&[1])));
        assert_eq!(u.classes, vec![(ls(&[1]), 2)]);
        assert_eq!(u.table.len(), 3);
        assert!(u.table.values().all(|&v| v == 0));
        let u = mc_union(&mc_leaf(ls(&[1])), &mc_leaf(ls(&[2])));
        let j = mc_join(&u, 1, 2);
        assert_eq!(j.table[&vec![1, 0]], 1);
        assert_eq!(j.table[&vec![0, 0]], 0);
    }

    #[test]
    fn relabel_merges() {
        let u = mc_union(&mc_leaf(ls(&[1])), &mc_leaf(ls(&[1, 2])));
        let f = mc_relabel(u, 1, LabelSet::EMPTY);
        assert_eq!(f.classes, vec![(LabelSet::EMPTY, 1), (ls(&[2]), 1)]);
        let m = mc_relabel(f, 2, LabelSet::EMPTY);
        assert_eq!(m.classes, vec![(LabelSet::EMPTY, 2)]);
        assert_eq!(m.vertex_count(), 2);
    }

    #[test]
    fn small_optima() {
        let k2 = parse("(join 1 2 (union (intro a (1)) (intro b (2))))").unwrap();
        assert_eq!(solve_max_cut(&k2, None).unwrap().optimum, 1);
        let k3 = parse("(join 2 3 (join 1 2 (join 1 3 (union (intro a (1)) (union (intro b (2)) (intro c (3)))))))")
            .unwrap();
        assert_eq!(
            solve_max_cut(&k3, Some(2)).unwrap(),
            MaxCutOutcome { optimum: 2, answer: Some(true), fallback: false }
        );
        let c4 = parse("(join 1 2 (union (intro a (1)) (union (intro b (1)) (union (intro c (2)) (intro d (2))))))")
            .unwrap();
        assert_eq!(solve_max_cut(&c4, None).unwrap().optimum, 4);
    }

    #[test]
    fn redundant_falls_back() {
        let e = parse("(join 1 2 (join 1 2 (union (intro a (1)) (intro b (2)))))").unwrap();
        let out = solve_max_cut(&e, None).unwrap();
        assert!(out.fallback);
        assert_eq!(out.optimum, 1);
    }
}
