//! Simple graphs, label multigraphs, and exponential-time oracles.

mod cut;
mod multigraph;
mod oracle;

pub use cut::{conditional_max_cut, CONDITIONAL_CORE_CAP};
pub use multigraph::AuxMultigraph;
pub use oracle::{
    effective_cap, min_edge_dominating_set_direct, oracle_eds, oracle_hamiltonian_cycle, oracle_hamiltonian_path,
    oracle_max_cut, oracle_max_matching, OracleError, DIRECT_EDS_EDGE_CAP, EDS_CAP, HAMILTONIAN_CAP, MATCHING_CAP,
    MAX_CUT_CAP,
};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write;

use thiserror::Error;

use crate::label::{Label, LabelSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("edge `{0}`-`{1}` added twice")]
    ParallelEdge(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
}

/// A simple undirected graph with string vertex ids.
///
/// Vertices are indexed `0..n` in insertion order; adjacency lists are sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    ids: Vec<String>,
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl SimpleGraph {
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| (v as usize) > u).map(move |&v| (u, v as usize)))
    }

    pub fn index_map(&self) -> HashMap<&str, usize> {
        self.ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    /// Vertex-id set and edge set as id pairs (smaller id first).
    pub fn id_signature(&self) -> (BTreeSet<&str>, BTreeSet<(&str, &str)>) {
        let vs = self.ids.iter().map(String::as_str).collect();
        let es = self
            .edges()
            .map(|(u, v)| {
                let (a, b) = (self.ids[u].as_str(), self.ids[v].as_str());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        (vs, es)
    }

    /// Describes the first difference between two graphs compared by vertex id,
    /// or `None` if they have the same ids and the same edges.
    pub fn diff_by_id(&self, other: &SimpleGraph) -> Option<String> {
        let (va, ea) = self.id_signature();
        let (vb, eb) = other.id_signature();
        if let Some(v) = va.difference(&vb).next() {
            return Some(format!("vertex `{v}` only in the first graph"));
        }
        if let Some(v) = vb.difference(&va).next() {
            return Some(format!("vertex `{v}` only in the second graph"));
        }
        if va.len() != self.n() || vb.len() != other.n() {
            return Some("duplicate vertex ids".into());
        }
        if let Some((a, b)) = ea.difference(&eb).next() {
            return Some(format!("edge `{a}`-`{b}` only in the first graph"));
        }
        if let Some((a, b)) = eb.difference(&ea).next() {
            return Some(format!("edge `{a}`-`{b}` only in the second graph"));
        }
        None
    }

    /// Adjacency as bitmasks; only for graphs with at most 64 vertices.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "bitmask adjacency needs n <= 64");
        self.adj.iter().map(|ns| ns.iter().fold(0u64, |m, &v| m | 1 << v)).collect()
    }

    /// Induced subgraph on `keep` (in the given order).
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        let mut pos = vec![u32::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i as u32;
        }
        let mut b = GraphBuilder::new();
        for &v in keep {
            b.add_vertex(self.ids[v].clone()).expect("ids of a simple graph are distinct");
        }
        for (u, v) in self.edges() {
            if pos[u] != u32::MAX && pos[v] != u32::MAX {
                b.add_edge_idx(pos[u] as usize, pos[v] as usize).expect("induced edges are simple");
            }
        }
        b.build()
    }

    /// Writes the `g/v/e` text format. `labels`, when given, supplies per-vertex
    /// label sets and `k`.
    pub fn to_text(&self, labels: Option<(&[LabelSet], Label)>) -> String {
        let mut out = String::new();
        let k = labels.map_or(0, |(_, k)| k);
        writeln!(out, "g {} {} {}", self.n(), self.m(), k).expect("writing to a String");
        for (v, id) in self.ids.iter().enumerate() {
            out.push_str("v ");
            out.push_str(id);
            if let Some((ls, _)) = labels {
                for l in ls[v].iter() {
                    write!(out, " {l}").expect("writing to a String");
                }
            }
            out.push('\n');
        }
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", self.ids[u], self.ids[v]).expect("writing to a String");
        }
        out
    }

    /// Parses the `g/v/e` text format, returning the graph, per-vertex labels and `k`.
    pub fn from_text(text: &str) -> Result<(SimpleGraph, Vec<LabelSet>, Label), GraphError> {
        let fmt = |line: usize, reason: String| GraphError::Format { line, reason };
        let mut b = GraphBuilder::new();
        let mut labels = Vec::new();
        let mut header: Option<(usize, usize, Label)> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split(['#', ';']).next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut it = body.split_whitespace();
            let tag = it.next().expect("non-empty line");
            let rest: Vec<&str> = it.collect();
            let num = |s: &str| s.parse::<usize>().map_err(|_| fmt(line, format!("expected a number, found `{s}`")));
            match tag {
                "g" if header.is_none() => {
                    if rest.len() != 3 {
                        return Err(fmt(line, "header is `g <n> <m> <k>`".into()));
                    }
                    header = Some((num(rest[0])?, num(rest[1])?, num(rest[2])? as Label));
                }
                "v" if header.is_some() => {
                    let (id, ls) = rest.split_first().ok_or_else(|| fmt(line, "missing vertex id".into()))?;
                    b.add_vertex((*id).to_string())?;
                    let mut set = LabelSet::EMPTY;
                    for l in ls {
                        let l = num(l)? as Label;
                        if l == 0 || l > crate::label::MAX_LABEL {
                            return Err(fmt(line, format!("label {l} out of range")));
                        }
                        set.insert(l);
                    }
                    labels.push(set);
                }
                "e" if header.is_some() => {
                    if rest.len() != 2 {
                        return Err(fmt(line, "edge line is `e <id> <id>`".into()));
                    }
                    b.add_edge_by_id(rest[0], rest[1])?;
                }
                _ => return Err(fmt(line, format!("unexpected line `{body}`"))),
            }
        }
        let (n, m, k) = header.ok_or_else(|| fmt(1, "missing `g` header".into()))?;
        let g = b.build();
        if g.n() != n || g.m() != m {
            return Err(fmt(1, format!("header says {n} vertices and {m} edges, found {} and {}", g.n(), g.m())));
        }
        Ok((g, labels, k))
    }
}

/// Incremental builder for [`SimpleGraph`] that rejects loops and parallel edges.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    ids: Vec<String>,
    index: HashMap<String, u32>,
    adj: Vec<Vec<u32>>,
    edges: HashSet<(u32, u32)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize, GraphError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let v = self.ids.len() as u32;
        self.index.insert(id.clone(), v);
        self.ids.push(id);
        self.adj.push(Vec::new());
        Ok(v as usize)
    }

    /// Index of `id`, adding the vertex if it is new.
    pub fn vertex(&mut self, id: &str) -> usize {
        match self.index.get(id) {
            Some(&v) => v as usize,
            None => self.add_vertex(id).expect("absent id"),
        }
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).map(|&v| v as usize)
    }

    pub fn has_edge_idx(&self, u: usize, v: usize) -> bool {
        let key = if u < v { (u as u32, v as u32) } else { (v as u32, u as u32) };
        self.edges.contains(&key)
    }

    pub fn add_edge_idx(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(self.ids[u].clone()));
        }
        let key = if u < v { (u as u32, v as u32) } else { (v as u32, u as u32) };
        if !self.edges.insert(key) {
            return Err(GraphError::ParallelEdge(self.ids[u].clone(), self.ids[v].clone()));
        }
        self.adj[u].push(v as u32);
        self.adj[v].push(u as u32);
        Ok(())
    }

    pub fn add_edge_by_id(&mut self, a: &str, b: &str) -> Result<(), GraphError> {
        let u = self.index_of(a).ok_or_else(|| GraphError::UnknownVertex(a.into()))?;
        let v = self.index_of(b).ok_or_else(|| GraphError::UnknownVertex(b.into()))?;
        self.add_edge_idx(u, v)
    }

    pub fn build(self) -> SimpleGraph {
        let m = self.edges.len();
        let mut adj = self.adj;
        for ns in &mut adj {
            ns.sort_unstable();
        }
        SimpleGraph { ids: self.ids, adj, m }
    }
}

impl SimpleGraph {
    /// Graph on vertices `v0..v{n-1}` with the given index edges.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<SimpleGraph, GraphError> {
        let mut b = GraphBuilder::new();
        for v in 0..n {
            b.add_vertex(format!("v{v}"))?;
        }
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::UnknownVertex(format!("v{}", u.max(v))));
            }
            b.add_edge_idx(u, v)?;
        }
        Ok(b.build())
    }

    pub fn path(n: usize) -> SimpleGraph {
        let e: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_index_edges(n, &e).expect("path is simple")
    }

    pub fn cycle(n: usize) -> SimpleGraph {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let mut e: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        e.push((n - 1, 0));
        Self::from_index_edges(n, &e).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let e: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_index_edges(n, &e).expect("complete graph is simple")
    }

    /// The Petersen graph.
    pub fn petersen() -> SimpleGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_index_edges(10, &e).expect("Petersen graph is simple")
    }
}
