//! Edge Dominating Set via footprint dynamic programming.
//!
//! A graph has an edge dominating set of size at most `t` iff it has a vertex
//! cover `S` with `|S| - ν(G[S]) ≤ t`. A footprint `(I, ψ, ℓ)` summarizes a
//! partial cover: `I` is the union of labels of uncovered vertices, `ψ(i)`
//! counts cover vertices still waiting for a partner through label `i`, and
//! `ℓ` is the number of matched pairs. An extra star label, added to every
//! vertex, lets a cover vertex stay unmatched.

use std::collections::HashSet;

use serde::Serialize;

use crate::expr::{evaluate, normalize, ExprError, MultiExpr, Node};
use crate::label::{Label, LabelSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Footprint {
    pub uncovered: LabelSet,
    /// `psi[i - 1]` is the count for label `i`.
    pub psi: Vec<u32>,
    pub matched: u32,
}

impl Footprint {
    pub fn psi_of(&self, i: Label) -> u32 {
        self.psi[i as usize - 1]
    }

    /// `ℓ + Σψ`: the size of the edge dominating set this footprint certifies at the root.
    pub fn cost(&self) -> u32 {
        self.matched + self.psi.iter().sum::<u32>()
    }
}

pub type FootprintSet = HashSet<Footprint>;

pub fn eds_leaf(i: Label, order: usize) -> FootprintSet {
    let mut psi = vec![0; order];
    psi[i as usize - 1] = 1;
    [
        Footprint { uncovered: LabelSet::EMPTY, psi, matched: 0 },
        Footprint { uncovered: LabelSet::singleton(i), psi: vec![0; order], matched: 0 },
    ]
    .into_iter()
    .collect()
}

pub fn eds_forget(s: &FootprintSet, i: Label) -> FootprintSet {
    s.iter()
        .filter(|f| f.psi_of(i) == 0)
        .map(|f| Footprint { uncovered: f.uncovered.without(i), ..f.clone() })
        .collect()
}

pub fn eds_add_label(s: &FootprintSet, i: Label, j: Label) -> FootprintSet {
    assert_ne!(i, j, "add-label needs distinct labels");
    let (ii, jj) = (i as usize - 1, j as usize - 1);
    let mut out = FootprintSet::with_capacity(s.len());
    for f in s {
        let uncovered = if f.uncovered.contains(i) { f.uncovered.with(j) } else { f.uncovered };
        for r in 0..=f.psi[ii] {
            let mut psi = f.psi.clone();
            psi[ii] -= r;
            psi[jj] += r;
            out.insert(Footprint { uncovered, psi, matched: f.matched });
        }
    }
    out
}

pub fn eds_union(s1: &FootprintSet, s2: &FootprintSet) -> FootprintSet {
    let mut out = FootprintSet::with_capacity(s1.len() * s2.len());
    for a in s1 {
        for b in s2 {
            out.insert(Footprint {
                uncovered: a.uncovered.union(b.uncovered),
                psi: a.psi.iter().zip(&b.psi).map(|(x, y)| x + y).collect(),
                matched: a.matched + b.matched,
            });
        }
    }
    out
}

pub fn eds_join(s: &FootprintSet, i: Label, j: Label) -> FootprintSet {
    assert_ne!(i, j, "join needs distinct labels");
    let (ii, jj) = (i as usize - 1, j as usize - 1);
    let mut out = FootprintSet::with_capacity(s.len());
    for f in s {
        // A new edge between two uncovered vertices would be left uncovered.
        if f.uncovered.contains(i) && f.uncovered.contains(j) {
            continue;
        }
        for r in 0..=f.psi[ii].min(f.psi[jj]) {
            let mut psi = f.psi.clone();
            psi[ii] -= r;
            psi[jj] -= r;
            out.insert(Footprint { uncovered: f.uncovered, psi, matched: f.matched + r });
        }
    }
    out
}

/// `2^{k+1} (n+1)^{k+1} (⌈n/2⌉+1)`, the largest possible footprint set.
pub fn footprint_set_bound(n: usize, k: usize) -> f64 {
    let k1 = (k + 1) as f64;
    2f64.powf(k1) * ((n + 1) as f64).powf(k1) * (n.div_ceil(2) + 1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdsOutcome {
    pub answer: bool,
    /// Size of a minimum edge dominating set.
    pub optimum: u32,
    #[serde(skip)]
    pub max_set: usize,
}

/// Runs the footprint DP and returns the root set and the largest set seen.
pub fn footprint_dp(e: &MultiExpr) -> Result<(FootprintSet, usize), ExprError> {
    evaluate(e)?;
    let e = normalize(e);
    let order = e.k() as usize + 1;
    let star = order as Label;
    let mut slots: Vec<Option<FootprintSet>> = vec![None; e.len()];
    let mut max_set = 0;
    for (idx, node) in e.nodes().iter().enumerate() {
        let mut take = |c: crate::expr::NodeId| slots[c.index()].take().expect("child done");
        let set = match node {
            Node::Intro { labels, .. } => {
                let i = labels.first().expect("normalized intros carry one label");
                eds_add_label(&eds_leaf(i, order), i, star)
            }
            Node::Union(l, r) => {
                let (a, b) = (take(*l), take(*r));
                eds_union(&a, &b)
            }
            &Node::Join { i, j, child } => eds_join(&take(child), i, j),
            &Node::Relabel { i, to, child } => {
                let s = take(child);
                match to.without(i).first() {
                    None => eds_forget(&s, i),
                    Some(j) => eds_add_label(&s, i, j),
                }
            }
        };
        max_set = max_set.max(set.len());
        slots[idx] = Some(set);
    }
    Ok((slots.pop().flatten().expect("root done"), max_set))
}

pub fn solve_eds_with(e: &MultiExpr, t: u32) -> Result<EdsOutcome, ExprError> {
    let (root, max_set) = footprint_dp(e)?;
    let optimum = root.iter().map(Footprint::cost).min().expect("covering every vertex is always possible");
    Ok(EdsOutcome { answer: optimum <= t, optimum, max_set })
}

/// Whether the graph of `e` has an edge dominating set with at most `t` edges.
pub fn solve_eds(e: &MultiExpr, t: u32) -> Result<bool, ExprError> {
    Ok(solve_eds_with(e, t)?.answer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn fp(uncovered: &[Label], psi: &[u32], matched: u32) -> Footprint {
        Footprint { uncovered: uncovered.iter().copied().collect(), psi: psi.to_vec(), matched }
    }

    fn set(items: &[Footprint]) -> FootprintSet {
        items.iter().cloned().collect()
    }

    #[test]
    fn leaf() {
        assert_eq!(eds_leaf(2, 3), set(&[fp(&[], &[0, 1, 0], 0), fp(&[2], &[0, 0, 0], 0)]));
    }

    #[test]
    fn forget() {
        assert_eq!(eds_forget(&set(&[fp(&[1, 2], &[0, 0], 0)]), 1), set(&[fp(&[2], &[0, 0], 0)]));
        assert!(eds_forget(&set(&[fp(&[], &[3, 0], 0)]), 1).is_empty());
    }

    #[test]
    fn add_label() {
        let got = eds_add_label(&set(&[fp(&[1], &[1, 0, 0], 0)]), 1, 2);
        assert_eq!(got, set(&[fp(&[1, 2], &[1, 0, 0], 0), fp(&[1, 2], &[0, 1, 0], 0)]));
        let got = eds_add_label(&set(&[fp(&[], &[2, 0], 0)]), 1, 2);
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|f| f.psi.iter().sum::<u32>() == 2));
    }

    #[test]
    fn union() {
        let got = eds_union(&set(&[fp(&[1], &[0, 0], 1)]), &set(&[fp(&[1], &[0, 0], 2)]));
        assert_eq!(got, set(&[fp(&[1], &[0, 0], 3)]));
    }

    #[test]
    fn join() {
        assert!(eds_join(&set(&[fp(&[1, 2], &[0, 0], 0)]), 1, 2).is_empty());
        let got = eds_join(&set(&[fp(&[], &[1, 1], 0)]), 1, 2);
        assert_eq!(got, set(&[fp(&[], &[1, 1], 0), fp(&[], &[0, 0], 1)]));
    }

    #[test]
    fn solve_small() {
        let single = parse("(intro a (1))").unwrap();
        assert!(solve_eds(&single, 0).unwrap());
        let k2 = parse("(join 1 2 (union (intro a (1)) (intro b (2))))").unwrap();
        assert!(!solve_eds(&k2, 0).unwrap());
        assert!(solve_eds(&k2, 1).unwrap());
        let p4 = "(join 1 2 (union (intro a (1)) (relabel 1 () (join 1 2 (union (intro b (2)) \
                  (relabel 2 () (relabel 1 (1 2) (join 1 2 (union (intro c (1)) (intro d (2)))))))))))";
        let out = solve_eds_with(&parse(p4).unwrap(), 5).unwrap();
        assert_eq!(out.optimum, 1);
    }
}
