//! Hamiltonian Cycle on graphs given by a multi-k-expression.
//!
//! Partial solutions (path packings with an endpoint label choice) are never
//! materialized. Each one is summarized by its auxiliary multigraph on the
//! label set: one edge per path between the two chosen endpoint labels. The
//! DP keeps a family of such multigraphs per node, pruned to one member per
//! (degree vector, component partition) class.

mod eulerian;

pub use eulerian::{check_red_blue_eulerian, RED_BLUE_EDGE_CAP};

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{evaluate, normalize, ExprError, MultiExpr, Node, NodeId};
use crate::graph::AuxMultigraph;
use crate::label::Label;

/// A family of auxiliary multigraphs, kept sorted and duplicate-free.
pub type AuxFamily = Vec<AuxMultigraph>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HcError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("expression uses {0} labels; the auxiliary multigraphs support at most 30")]
    TooManyLabels(Label),
}

/// Equivalence key: two multigraphs are interchangeable iff their keys match.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReduceKey {
    pub degrees: Vec<u32>,
    pub components: Vec<u8>,
}

pub fn reduce_key(m: &AuxMultigraph) -> ReduceKey {
    ReduceKey { degrees: m.degree_vector(), components: m.component_representatives() }
}

fn canonical(mut f: Vec<AuxMultigraph>) -> AuxFamily {
    f.sort_unstable();
    f.dedup();
    f
}

/// Keeps the lexicographically smallest member of every equivalence class.
pub fn reduce(f: &[AuxMultigraph]) -> AuxFamily {
    let mut best: HashMap<ReduceKey, &AuxMultigraph> = HashMap::with_capacity(f.len());
    for m in f {
        best.entry(reduce_key(m)).and_modify(|cur| *cur = (*cur).min(m)).or_insert(m);
    }
    canonical(best.into_values().cloned().collect())
}

fn finish(f: Vec<AuxMultigraph>, reduce_on: bool) -> AuxFamily {
    if reduce_on {
        reduce(&f)
    } else {
        canonical(f)
    }
}

/// The family of a single vertex carrying label `i`: one loop at `i`.
pub fn leaf_family(i: Label, order: usize) -> AuxFamily {
    vec![AuxMultigraph::loop_at(order, i)]
}

/// Members in which `i` has degree zero.
pub fn forget_family(f: &[AuxMultigraph], i: Label) -> AuxFamily {
    f.iter().filter(|m| m.degree(i) == 0).cloned().collect()
}

/// Every way of moving path endpoints from label `i` to label `j`, before reduction.
pub fn add_label_family_raw(f: &[AuxMultigraph], i: Label, j: Label) -> AuxFamily {
    assert_ne!(i, j, "add-label needs distinct labels");
    let mut out = Vec::new();
    for m in f {
        let order = m.order() as Label;
        // Independent choice dimensions: (other label a, how many {a,i} edges move to {a,j}).
        let others: Vec<(Label, u16)> =
            (1..=order).filter(|&a| a != i && a != j).map(|a| (a, m.mult(a, i))).filter(|&(_, c)| c > 0).collect();
        let mij = m.mult(i, j);
        let mii = m.mult(i, i);
        let mut q = vec![0u16; others.len()];
        loop {
            for qj in 0..=mij {
                for q1 in 0..=mii {
                    for q2 in 0..=(mii - q1) {
                        let mut x = m.clone();
                        for (&(a, _), &qa) in others.iter().zip(&q) {
                            x.sub(a, i, qa);
                            x.add(a, j, qa);
                        }
                        x.sub(i, i, q1 + q2);
                        x.sub(i, j, qj);
                        x.add(i, j, q1);
                        x.add(j, j, q2 + qj);
                        out.push(x);
                    }
                }
            }
            // Odometer over the q_a.
            let mut p = 0;
            while p < q.len() && q[p] == others[p].1 {
                q[p] = 0;
                p += 1;
            }
            if p == q.len() {
                break;
            }
            q[p] += 1;
        }
    }
    canonical(out)
}

pub fn add_label_family(f: &[AuxMultigraph], i: Label, j: Label) -> AuxFamily {
    reduce(&add_label_family_raw(f, i, j))
}

/// All pairwise multiplicity sums, before reduction.
pub fn union_family_raw(f1: &[AuxMultigraph], f2: &[AuxMultigraph]) -> AuxFamily {
    canonical(f1.iter().flat_map(|a| f2.iter().map(move |b| a.sum(b))).collect())
}

pub fn union_family(f1: &[AuxMultigraph], f2: &[AuxMultigraph]) -> AuxFamily {
    reduce(&union_family_raw(f1, f2))
}

/// `A + {i,j}` for every member: merge two distinct paths, one with an
/// `i`-endpoint and one with a `j`-endpoint, through a new edge.
pub fn join_step(f: &[AuxMultigraph], i: Label, j: Label) -> Vec<AuxMultigraph> {
    assert_ne!(i, j, "join needs distinct labels");
    let mut out = Vec::new();
    for m in f {
        let order = m.order() as Label;
        for a in 1..=order {
            let mai = m.mult(a, i);
            if mai == 0 {
                continue;
            }
            for b in 1..=order {
                let mbj = m.mult(b, j);
                // Both picks name the same pair only when a = j and b = i.
                if mbj == 0 || (a == j && b == i && mbj < 2) {
                    continue;
                }
                let mut x = m.clone();
                x.sub(a, i, 1);
                x.sub(b, j, 1);
                x.add(a, b, 1);
                out.push(x);
            }
        }
    }
    out
}

/// Iterates `F ↦ F ∪ (F + {i,j})` up to `vx - 1` times, stopping at a fixpoint.
pub fn join_family(f: &[AuxMultigraph], i: Label, j: Label, vx: usize) -> AuxFamily {
    join_family_with(f, i, j, vx, true, &mut |_| {})
}

fn join_family_with(
    f: &[AuxMultigraph],
    i: Label,
    j: Label,
    vx: usize,
    reduce_on: bool,
    observe: &mut dyn FnMut(&[AuxMultigraph]),
) -> AuxFamily {
    let mut cur = finish(f.to_vec(), reduce_on);
    for _ in 1..vx {
        let mut raw = cur.clone();
        raw.extend(join_step(&cur, i, j));
        let raw = canonical(raw);
        observe(&raw);
        let next = finish(raw, reduce_on);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Whether some member is a single edge between `lu` and `lv`.
pub fn root_accepts(f: &[AuxMultigraph], lu: Label, lv: Label) -> bool {
    f.iter().any(|m| m.edge_count() == 1 && m.mult(lu, lv) == 1)
}

/// Upper bound on a reduced family's size: `n^order · 2^{order·(log2(order)+1)}`.
pub fn family_size_bound(n: usize, order: usize) -> f64 {
    let k = order as f64;
    (n as f64).powf(k) * 2f64.powf(k * (k.log2() + 1.0))
}

#[derive(Clone, Copy, Debug)]
pub struct HcOptions {
    /// Apply `reduce` after every step. Disabling keeps full families.
    pub reduce: bool,
    /// Try candidate edges on the rayon pool.
    pub parallel: bool,
}

impl Default for HcOptions {
    fn default() -> Self {
        HcOptions { reduce: true, parallel: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HcOutcome {
    pub answer: bool,
    /// Number of closing edges examined, up to and including the first success.
    pub edges_tried: usize,
    /// Largest family held at any node over the examined edges.
    pub max_family: usize,
}

/// One step of the family DP, reported to observers.
pub struct FamilyEvent<'a> {
    pub node: NodeId,
    /// Vertex count of the subgraph at `node`.
    pub vertices: usize,
    /// Candidate family before reduction.
    pub raw: &'a [AuxMultigraph],
    /// Family stored for the node (reduced unless reduction is off).
    pub kept: Option<&'a [AuxMultigraph]>,
}

/// Runs the family DP over a normalized expression.
///
/// `endpoint` maps the Intro nodes of the two path endpoints to their extra
/// label: such an Intro behaves like an Intro of the extra label followed by an
/// add of its own label, so its paths must end on the extra label at the root.
/// Returns the root family and the largest family seen.
pub fn family_dp(
    e: &MultiExpr,
    order: usize,
    endpoint: &HashMap<NodeId, Label>,
    vertices: &[usize],
    reduce_on: bool,
    observe: &mut dyn FnMut(&FamilyEvent<'_>),
) -> (AuxFamily, usize) {
    let mut slots: Vec<Option<AuxFamily>> = vec![None; e.len()];
    let mut max_family = 0;
    for (idx, node) in e.nodes().iter().enumerate() {
        let id = NodeId(idx as u32);
        let vx = vertices[idx];
        let emit = |raw: &[AuxMultigraph], observe: &mut dyn FnMut(&FamilyEvent<'_>)| {
            observe(&FamilyEvent { node: id, vertices: vx, raw, kept: None });
        };
        let fam = match node {
            Node::Intro { labels, .. } => {
                let own = labels.first().expect("normalized intros carry one label");
                match endpoint.get(&id) {
                    Some(&extra) => {
                        let raw = add_label_family_raw(&leaf_family(extra, order), extra, own);
                        emit(&raw, observe);
                        finish(raw, reduce_on)
                    }
                    None => leaf_family(own, order),
                }
            }
            Node::Union(l, r) => {
                let a = slots[l.index()].take().expect("child done");
                let b = slots[r.index()].take().expect("child done");
                let raw = union_family_raw(&a, &b);
                emit(&raw, observe);
                finish(raw, reduce_on)
            }
            &Node::Join { i, j, child } => {
                let f = slots[child.index()].take().expect("child done");
                join_family_with(&f, i, j, vx, reduce_on, &mut |raw| emit(raw, observe))
            }
            &Node::Relabel { i, to, child } => {
                let f = slots[child.index()].take().expect("child done");
                if to.is_empty() {
                    forget_family(&f, i)
                } else {
                    let j = to.without(i).first().expect("normalized relabels add exactly one label");
                    let raw = add_label_family_raw(&f, i, j);
                    emit(&raw, observe);
                    finish(raw, reduce_on)
                }
            }
        };
        observe(&FamilyEvent { node: id, vertices: vx, raw: &[], kept: Some(&fam) });
        max_family = max_family.max(fam.len());
        if fam.is_empty() {
            return (Vec::new(), max_family);
        }
        slots[idx] = Some(fam);
    }
    (slots.pop().flatten().expect("root done"), max_family)
}

/// Everything `solve_hc` needs that does not depend on the closing edge.
pub struct HcInstance {
    pub normalized: MultiExpr,
    pub order: usize,
    pub vertices: Vec<usize>,
    /// Closing-edge candidates as pairs of Intro nodes of `normalized`.
    pub candidate_edges: Vec<(NodeId, NodeId)>,
    pub n: usize,
}

impl HcInstance {
    pub fn new(e: &MultiExpr) -> Result<Self, HcError> {
        let ev = evaluate(e)?;
        if e.k() > 30 {
            return Err(HcError::TooManyLabels(e.k()));
        }
        let normalized = normalize(e);
        let nev = evaluate(&normalized)?;
        let mut intro_of = vec![NodeId(0); nev.graph.graph.n()];
        for (idx, v) in nev.vertex_of_node.iter().enumerate() {
            if let Some(v) = v {
                intro_of[*v as usize] = NodeId(idx as u32);
            }
        }
        // Vertex indices agree: normalization keeps Intro order.
        let candidate_edges = ev.graph.graph.edges().map(|(u, v)| (intro_of[u], intro_of[v])).collect();
        Ok(HcInstance {
            order: e.k() as usize + 2,
            vertices: nev.annotations.iter().map(|a| a.vertices).collect(),
            normalized,
            candidate_edges,
            n: ev.graph.graph.n(),
        })
    }

    /// Runs the DP with `(u, v)` as the closing edge.
    pub fn try_edge(&self, edge: (NodeId, NodeId), reduce_on: bool) -> (bool, usize) {
        let (lu, lv) = (self.order as Label - 1, self.order as Label);
        let endpoint: HashMap<NodeId, Label> = [(edge.0, lu), (edge.1, lv)].into_iter().collect();
        let (root, max_family) =
            family_dp(&self.normalized, self.order, &endpoint, &self.vertices, reduce_on, &mut |_| {});
        (root_accepts(&root, lu, lv), max_family)
    }
}

/// Decides whether the graph of `e` has a Hamiltonian cycle.
pub fn solve_hc(e: &MultiExpr) -> Result<bool, HcError> {
    Ok(solve_hc_with(e, HcOptions::default())?.answer)
}

pub fn solve_hc_with(e: &MultiExpr, opts: HcOptions) -> Result<HcOutcome, HcError> {
    let inst = HcInstance::new(e)?;
    if inst.n < 3 {
        return Ok(HcOutcome { answer: false, edges_tried: 0, max_family: 0 });
    }
    let chunk = if opts.parallel { rayon::current_num_threads().max(1) } else { 1 };
    let mut max_family = 0;
    let mut tried = 0;
    // Chunks keep the reported statistics independent of scheduling.
    for batch in inst.candidate_edges.chunks(chunk) {
        let results: Vec<(bool, usize)> = if opts.parallel {
            batch.par_iter().map(|&edge| inst.try_edge(edge, opts.reduce)).collect()
        } else {
            batch.iter().map(|&edge| inst.try_edge(edge, opts.reduce)).collect()
        };
        for (ok, fam) in results {
            tried += 1;
            max_family = max_family.max(fam);
            if ok {
                return Ok(HcOutcome { answer: true, edges_tried: tried, max_family });
            }
        }
    }
    Ok(HcOutcome { answer: false, edges_tried: tried, max_family })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn m(order: usize, edges: &[(Label, Label)]) -> AuxMultigraph {
        AuxMultigraph::from_edges(order, edges)
    }

    #[test]
    fn leaf_and_forget() {
        assert_eq!(leaf_family(1, 3), vec![m(3, &[(1, 1)])]);
        assert_eq!(leaf_family(3, 3)[0].degree_vector(), vec![0, 0, 2]);
        let f = canonical(vec![m(3, &[(1, 1)]), m(3, &[(2, 3)])]);
        assert_eq!(forget_family(&f, 1), vec![m(3, &[(2, 3)])]);
        assert_eq!(forget_family(&[m(3, &[(1, 2)])], 2), Vec::<AuxMultigraph>::new());
    }

    #[test]
    fn add_label_examples() {
        let got = add_label_family_raw(&[m(2, &[(1, 1)])], 1, 2);
        assert_eq!(got, canonical(vec![m(2, &[(1, 1)]), m(2, &[(1, 2)]), m(2, &[(2, 2)])]));
        let got = add_label_family_raw(&[m(3, &[(1, 3)])], 1, 2);
        assert_eq!(got, canonical(vec![m(3, &[(1, 3)]), m(3, &[(2, 3)])]));
        let got = add_label_family_raw(&[m(2, &[(1, 2), (1, 2)])], 1, 2);
        assert_eq!(got, canonical(vec![m(2, &[(1, 2), (1, 2)]), m(2, &[(1, 2), (2, 2)]), m(2, &[(2, 2), (2, 2)])]));
    }

    #[test]
    fn union_example() {
        let got = union_family(&[m(2, &[(1, 1)])], &[m(2, &[(2, 2)])]);
        assert_eq!(got, vec![m(2, &[(1, 1), (2, 2)])]);
    }

    #[test]
    fn join_examples() {
        let got = join_family(&[m(2, &[(1, 1), (2, 2)])], 1, 2, 2);
        assert_eq!(got, reduce(&[m(2, &[(1, 1), (2, 2)]), m(2, &[(1, 2)])]));
        assert!(got.contains(&m(2, &[(1, 2)])));
        assert_eq!(join_family(&[m(2, &[(1, 2)])], 1, 2, 2), vec![m(2, &[(1, 2)])]);
        let step = join_step(&[m(2, &[(1, 2), (1, 2)])], 1, 2);
        assert!(step.contains(&m(2, &[(1, 2)])));
    }

    #[test]
    fn root_examples() {
        assert!(root_accepts(&[m(4, &[(3, 4)])], 3, 4));
        assert!(!root_accepts(&[m(4, &[(3, 4), (1, 1)])], 3, 4));
        assert!(!root_accepts(&[], 3, 4));
    }

    #[test]
    fn small_graphs() {
        let c4 = "(join 1 2 (union (join 1 2 (union (intro a (1)) (intro b (2)))) (join 1 2 (union (intro c (1)) (intro d (2))))))";
        assert!(solve_hc(&parse(c4).unwrap()).unwrap());
        let p3 = "(join 1 2 (union (intro a (1)) (union (intro b (2)) (intro c (1)))))";
        assert!(!solve_hc(&parse(p3).unwrap()).unwrap());
        let k3 = "(join 2 3 (join 1 2 (join 1 3 (union (intro a (1)) (union (intro b (2)) (intro c (3)))))))";
        assert!(solve_hc(&parse(k3).unwrap()).unwrap());
        assert!(!solve_hc(&parse("(intro a (1))").unwrap()).unwrap());
    }
}
