use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{ExprError, MultiExpr, Node};
use crate::graph::{GraphBuilder, SimpleGraph};
use crate::label::{Label, LabelSet};

/// A simple graph together with a label set per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: SimpleGraph,
    pub labels: Vec<LabelSet>,
    pub k: Label,
}

impl LabeledGraph {
    pub fn to_text(&self) -> String {
        self.graph.to_text(Some((&self.labels, self.k)))
    }
}

/// Per-node statistics recorded during evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NodeAnnotation {
    pub vertices: usize,
    pub edges: usize,
    /// For Join nodes: whether every edge the join creates was absent before.
    pub irredundant: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub graph: LabeledGraph,
    /// Indexed like [`MultiExpr::nodes`].
    pub annotations: Vec<NodeAnnotation>,
    /// Graph vertex index of every Intro node (`None` for other nodes).
    pub vertex_of_node: Vec<Option<u32>>,
}

impl Evaluation {
    /// Whether every Join node only created new edges.
    pub fn all_joins_irredundant(&self) -> bool {
        self.annotations.iter().all(|a| a.irredundant != Some(false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    DuplicateVertex { vertex: String, nodes: Vec<u32> },
    JoinPrecondition { node: u32, vertex: String, i: Label, j: Label },
    SameLabelJoin { node: u32, label: Label },
    LabelOutOfRange { node: u32, label: Label, k: Label },
    EmptyIntro { node: u32, vertex: String },
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Finding::DuplicateVertex { vertex, nodes } => {
                write!(f, "vertex id `{vertex}` is introduced {} times (nodes {nodes:?})", nodes.len())
            }
            Finding::JoinPrecondition { node, vertex, i, j } => {
                write!(f, "node {node}: join {i} {j} applied while vertex `{vertex}` holds both labels")
            }
            Finding::SameLabelJoin { node, label } => write!(f, "node {node}: join of label {label} with itself"),
            Finding::LabelOutOfRange { node, label, k } => write!(f, "node {node}: label {label} outside 1..={k}"),
            Finding::EmptyIntro { node, vertex } => {
                write!(f, "node {node}: vertex `{vertex}` introduced with no labels")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.findings.is_empty()
    }
}

/// A partially evaluated subtree: its vertices and, per label, the vertices
/// currently holding it.
struct Fragment {
    verts: Vec<u32>,
    holders: Vec<Vec<u32>>,
    edges: usize,
}

impl Fragment {
    fn absorb(&mut self, mut other: Fragment) {
        if other.verts.len() > self.verts.len() {
            std::mem::swap(self, &mut other);
        }
        self.verts.append(&mut other.verts);
        for (mine, theirs) in self.holders.iter_mut().zip(other.holders.iter_mut()) {
            mine.append(theirs);
        }
        self.edges += other.edges;
    }
}

enum Mode<'a> {
    Strict,
    Report(&'a mut Vec<Finding>),
}

fn run(e: &MultiExpr, mut mode: Mode<'_>) -> Result<Evaluation, ExprError> {
    let k = e.k();
    let width = k as usize + 1;
    let mut labels: Vec<LabelSet> = Vec::new();
    let mut ids: Vec<&str> = Vec::new();
    let mut edge_set: HashSet<u64> = HashSet::new();
    let mut edge_list: Vec<(u32, u32)> = Vec::new();
    let mut annotations = Vec::with_capacity(e.len());
    let mut vertex_of_node = vec![None; e.len()];
    // Fragments are consumed by their unique parent, so a slot per node suffices.
    let mut slots: Vec<Option<Fragment>> = (0..e.len()).map(|_| None).collect();
    let key = |u: u32, v: u32| if u < v { (u as u64) << 32 | v as u64 } else { (v as u64) << 32 | u as u64 };

    let check_label = |node: usize, l: Label, mode: &mut Mode<'_>| -> Result<bool, ExprError> {
        if l == 0 || l > k {
            match mode {
                Mode::Strict => return Err(ExprError::LabelOutOfRange { label: l, k }),
                Mode::Report(f) => f.push(Finding::LabelOutOfRange { node: node as u32, label: l, k }),
            }
            return Ok(false);
        }
        Ok(true)
    };

    for (idx, node) in e.nodes().iter().enumerate() {
        let (frag, irredundant) = match node {
            Node::Intro { vertex, labels: ls } => {
                for l in ls.iter() {
                    check_label(idx, l, &mut mode)?;
                }
                if ls.is_empty() {
                    match &mut mode {
                        Mode::Strict => return Err(ExprError::Invalid(format!("vertex `{vertex}` has no labels"))),
                        Mode::Report(f) => f.push(Finding::EmptyIntro { node: idx as u32, vertex: vertex.clone() }),
                    }
                }
                let v = labels.len() as u32;
                let kept = ls.intersection(LabelSet::full(k));
                labels.push(kept);
                ids.push(vertex);
                vertex_of_node[idx] = Some(v);
                let mut holders = vec![Vec::new(); width];
                for l in kept.iter() {
                    holders[l as usize].push(v);
                }
                (Fragment { verts: vec![v], holders, edges: 0 }, None)
            }
            Node::Union(l, r) => {
                let mut a = slots[l.index()].take().expect("child evaluated");
                let b = slots[r.index()].take().expect("child evaluated");
                a.absorb(b);
                (a, None)
            }
            &Node::Join { i, j, child } => {
                let mut f = slots[child.index()].take().expect("child evaluated");
                let ok_i = check_label(idx, i, &mut mode)?;
                let ok_j = check_label(idx, j, &mut mode)?;
                if i == j {
                    match &mut mode {
                        Mode::Strict => {
                            return Err(ExprError::Invalid(format!("node {idx}: join of label {i} with itself")))
                        }
                        Mode::Report(fs) => fs.push(Finding::SameLabelJoin { node: idx as u32, label: i }),
                    }
                }
                let mut irredundant = true;
                if ok_i && ok_j && i != j {
                    for &u in &f.holders[i as usize] {
                        if labels[u as usize].contains(j) {
                            match &mut mode {
                                Mode::Strict => {
                                    return Err(ExprError::JoinPreconditionViolated {
                                        node: idx as u32,
                                        vertex: ids[u as usize].to_string(),
                                        i,
                                        j,
                                    })
                                }
                                Mode::Report(fs) => fs.push(Finding::JoinPrecondition {
                                    node: idx as u32,
                                    vertex: ids[u as usize].to_string(),
                                    i,
                                    j,
                                }),
                            }
                        }
                    }
                    let (hi, hj) = (&f.holders[i as usize], &f.holders[j as usize]);
                    let mut added = 0;
                    for &u in hi {
                        for &v in hj {
                            if u == v {
                                continue;
                            }
                            if edge_set.insert(key(u, v)) {
                                edge_list.push((u, v));
                                added += 1;
                            } else {
                                irredundant = false;
                            }
                        }
                    }
                    f.edges += added;
                }
                (f, Some(irredundant))
            }
            &Node::Relabel { i, to, child } => {
                let mut f = slots[child.index()].take().expect("child evaluated");
                let ok = check_label(idx, i, &mut mode)?;
                let mut ok_to = true;
                for l in to.iter() {
                    ok_to &= check_label(idx, l, &mut mode)?;
                }
                if ok && ok_to {
                    let moved = std::mem::take(&mut f.holders[i as usize]);
                    for v in moved {
                        let old = labels[v as usize];
                        let new = old.relabeled(i, to);
                        labels[v as usize] = new;
                        for s in new.difference(old.without(i)).iter() {
                            f.holders[s as usize].push(v);
                        }
                    }
                }
                (f, None)
            }
        };
        annotations.push(NodeAnnotation { vertices: frag.verts.len(), edges: frag.edges, irredundant });
        slots[idx] = Some(frag);
    }

    // Duplicate ids.
    let mut first: HashMap<&str, Vec<u32>> = HashMap::new();
    let intro_nodes: Vec<u32> = vertex_of_node.iter().enumerate().filter_map(|(n, v)| v.map(|_| n as u32)).collect();
    for (v, id) in ids.iter().enumerate() {
        first.entry(id).or_default().push(intro_nodes[v]);
    }
    let mut dups: Vec<(&str, Vec<u32>)> = first.into_iter().filter(|(_, ns)| ns.len() > 1).collect();
    dups.sort();
    if !dups.is_empty() {
        match &mut mode {
            Mode::Strict => return Err(ExprError::Invalid(format!("duplicate vertex id `{}`", dups[0].0))),
            Mode::Report(fs) => {
                for (id, nodes) in dups {
                    fs.push(Finding::DuplicateVertex { vertex: id.to_string(), nodes });
                }
                // Graph construction below needs distinct ids; callers in report
                // mode only look at the findings.
                return Ok(Evaluation {
                    graph: LabeledGraph { graph: SimpleGraph::default(), labels: Vec::new(), k },
                    annotations,
                    vertex_of_node,
                });
            }
        }
    }

    let mut b = GraphBuilder::new();
    for id in &ids {
        b.add_vertex(*id).expect("ids are distinct");
    }
    edge_list.sort_unstable();
    for (u, v) in edge_list {
        b.add_edge_idx(u as usize, v as usize).expect("edges are deduplicated and loop-free");
    }
    Ok(Evaluation { graph: LabeledGraph { graph: b.build(), labels, k }, annotations, vertex_of_node })
}

/// Evaluates `e` bottom-up. Fails on the first invalid construct.
pub fn evaluate(e: &MultiExpr) -> Result<Evaluation, ExprError> {
    run(e, Mode::Strict)
}

/// Collects every problem that would make [`evaluate`] fail.
pub fn validate(e: &MultiExpr) -> ValidationReport {
    let mut findings = Vec::new();
    run(e, Mode::Report(&mut findings)).expect("report mode records problems instead of failing");
    ValidationReport { findings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn eval(s: &str) -> Evaluation {
        evaluate(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn k2() {
        let ev = eval("(join 1 2 (union (intro a (1)) (intro b (2))))");
        let g = &ev.graph;
        assert_eq!((g.graph.n(), g.graph.m()), (2, 1));
        assert_eq!(g.labels, vec![LabelSet::singleton(1), LabelSet::singleton(2)]);
        assert_eq!(ev.annotations.last().unwrap().irredundant, Some(true));
    }

    #[test]
    fn add_label() {
        let ev = eval("(relabel 1 (1 3) (intro a (1)))");
        assert_eq!(ev.graph.labels[0], [1, 3].into_iter().collect());
    }

    #[test]
    fn path_abc() {
        let ev = eval("(join 2 3 (union (join 1 2 (union (intro a (1)) (intro b (2)))) (intro c (3))))");
        let (_, es) = ev.graph.graph.id_signature();
        assert_eq!(es.into_iter().collect::<Vec<_>>(), vec![("a", "b"), ("b", "c")]);
    }

    #[test]
    fn redundant_join_is_flagged() {
        let ev = eval("(join 1 2 (join 1 2 (union (intro a (1)) (intro b (2)))))");
        assert_eq!(ev.annotations.last().unwrap().irredundant, Some(false));
        assert_eq!(ev.graph.graph.m(), 1);
        assert!(!ev.all_joins_irredundant());
    }

    #[test]
    fn validation_findings() {
        let r = validate(&parse("(join 1 2 (intro a (1 2)))").unwrap());
        assert_eq!(r.findings, vec![Finding::JoinPrecondition { node: 1, vertex: "a".into(), i: 1, j: 2 }]);
        let r = validate(&parse("(union (intro a (1)) (intro a (2)))").unwrap());
        assert_eq!(r.findings, vec![Finding::DuplicateVertex { vertex: "a".into(), nodes: vec![0, 1] }]);
        assert!(validate(&parse("(join 1 2 (union (intro a (1)) (intro b (2))))").unwrap()).is_ok());
        assert!(evaluate(&parse("(join 1 2 (intro a (1 2)))").unwrap()).is_err());
    }

    #[test]
    fn annotations_are_monotone() {
        let e = parse("(join 2 3 (union (join 1 2 (union (intro a (1)) (intro b (2)))) (intro c (3))))").unwrap();
        let ev = evaluate(&e).unwrap();
        for (p, parent) in e.parents().iter().enumerate() {
            if let Some(q) = parent {
                assert!(ev.annotations[p].vertices <= ev.annotations[q.index()].vertices);
                assert!(ev.annotations[p].edges <= ev.annotations[q.index()].edges);
            }
        }
    }
}
