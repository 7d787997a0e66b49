//! Multi-k-expressions: an arena-backed AST plus parsing, printing,
//! validation, evaluation, normalization and random generation.
//!
//! Expressions produced by the lower-bound generator have depth in the
//! hundreds of thousands, so every traversal in this module is iterative.

mod eval;
mod gen;
mod normalize;
mod parse;
mod print;

pub use eval::{evaluate, validate, Evaluation, Finding, LabeledGraph, NodeAnnotation, ValidationReport};
pub use gen::{gen_random_expr, GeneratorProfile, Shape};
pub use normalize::{is_normalized, normalize};
pub use parse::{parse, ParseError};
pub use print::serialize;

use thiserror::Error;

use crate::label::{Label, LabelSet, MAX_LABEL};

/// Index of a node inside a [`MultiExpr`] or [`ExprBuilder`] arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Intro { vertex: String, labels: LabelSet },
    Union(NodeId, NodeId),
    Join { i: Label, j: Label, child: NodeId },
    Relabel { i: Label, to: LabelSet, child: NodeId },
}

impl Node {
    /// Children in left-to-right order.
    pub fn children(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            Node::Intro { .. } => (None, None),
            Node::Union(l, r) => (Some(l), Some(r)),
            Node::Join { child, .. } | Node::Relabel { child, .. } => (Some(child), None),
        };
        a.into_iter().chain(b)
    }

    fn max_label(&self) -> Option<Label> {
        match self {
            Node::Intro { labels, .. } => labels.last(),
            Node::Union(..) => None,
            Node::Join { i, j, .. } => Some(*i.max(j)),
            Node::Relabel { i, to, .. } => Some(to.last().map_or(*i, |m| m.max(*i))),
        }
    }

    fn map_children(&self, f: impl Fn(NodeId) -> NodeId) -> Node {
        match self {
            Node::Intro { .. } => self.clone(),
            Node::Union(l, r) => Node::Union(f(*l), f(*r)),
            Node::Join { i, j, child } => Node::Join { i: *i, j: *j, child: f(*child) },
            Node::Relabel { i, to, child } => Node::Relabel { i: *i, to: *to, child: f(*child) },
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("expression has no nodes")]
    Empty,
    #[error("node {0} is referenced more than once or after its parent")]
    NotATree(u32),
    #[error("node {0} is unreachable from the root")]
    Unreachable(u32),
    #[error("label {label} is outside 1..={k}")]
    LabelOutOfRange { label: Label, k: Label },
    #[error("declared k = {0} exceeds the supported maximum of {MAX_LABEL}")]
    KTooLarge(Label),
    #[error("join at node {node}: vertex `{vertex}` holds both {i} and {j}")]
    JoinPreconditionViolated { node: u32, vertex: String, i: Label, j: Label },
    #[error("expression is invalid: {0}")]
    Invalid(String),
    #[error("random generation failed after {attempts} attempts; the profile is over-constrained")]
    GenerationFailed { attempts: u32 },
}

/// A multi-k-expression.
///
/// Nodes are stored in post-order (children before parents, left subtree
/// before right subtree) and the root is the last node. Because every
/// constructor canonicalizes the order, two expressions are structurally
/// equal iff their arenas are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiExpr {
    k: Label,
    nodes: Vec<Node>,
}

impl MultiExpr {
    /// Declared label bound.
    pub fn k(&self) -> Label {
        self.k
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn root(&self) -> NodeId {
        NodeId(self.nodes.len() as u32 - 1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest label mentioned anywhere in the expression.
    pub fn max_label_used(&self) -> Label {
        self.nodes.iter().filter_map(Node::max_label).max().unwrap_or(0)
    }

    /// Every label mentioned anywhere in the expression.
    pub fn labels_used(&self) -> LabelSet {
        let mut s = LabelSet::EMPTY;
        for n in &self.nodes {
            match n {
                Node::Intro { labels, .. } => s = s.union(*labels),
                Node::Union(..) => {}
                Node::Join { i, j, .. } => s = s.with(*i).with(*j),
                Node::Relabel { i, to, .. } => s = s.with(*i).union(*to),
            }
        }
        s
    }

    pub fn intro_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Intro { .. })).count()
    }

    /// Same expression with a different declared `k`.
    pub fn with_k(mut self, k: Label) -> Result<Self, ExprError> {
        check_k(k, self.max_label_used())?;
        self.k = k;
        Ok(self)
    }

    /// True iff every Union node has an Intro node as a direct child.
    pub fn is_linear(&self) -> bool {
        self.nodes.iter().all(|n| match n {
            Node::Union(l, r) => self.is_intro(*l) || self.is_intro(*r),
            _ => true,
        })
    }

    fn is_intro(&self, id: NodeId) -> bool {
        matches!(self.node(id), Node::Intro { .. })
    }

    /// Parent of every node; the root maps to `None`.
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parent = vec![None; self.nodes.len()];
        for (p, n) in self.nodes.iter().enumerate() {
            for c in n.children() {
                parent[c.index()] = Some(NodeId(p as u32));
            }
        }
        parent
    }

    /// Rebuilds the expression as a builder, for rewriting passes.
    pub fn to_builder(&self) -> ExprBuilder {
        ExprBuilder { nodes: self.nodes.clone() }
    }
}

/// Free-function form of [`MultiExpr::is_linear`].
pub fn is_linear(e: &MultiExpr) -> bool {
    e.is_linear()
}

fn check_k(k: Label, used: Label) -> Result<(), ExprError> {
    if k > MAX_LABEL {
        return Err(ExprError::KTooLarge(k));
    }
    if used > k {
        return Err(ExprError::LabelOutOfRange { label: used, k });
    }
    Ok(())
}

/// Incremental constructor for [`MultiExpr`].
///
/// Nodes may be pushed in any order as long as children exist before their
/// parent is pushed; [`ExprBuilder::finish`] checks tree shape and
/// canonicalizes the arena.
#[derive(Clone, Debug, Default)]
pub struct ExprBuilder {
    nodes: Vec<Node>,
}

impl ExprBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn push(&mut self, node: Node) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    pub fn intro(&mut self, vertex: impl Into<String>, labels: LabelSet) -> NodeId {
        self.push(Node::Intro { vertex: vertex.into(), labels })
    }

    pub fn intro1(&mut self, vertex: impl Into<String>, label: Label) -> NodeId {
        self.intro(vertex, LabelSet::singleton(label))
    }

    pub fn union(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.push(Node::Union(l, r))
    }

    pub fn join(&mut self, i: Label, j: Label, child: NodeId) -> NodeId {
        self.push(Node::Join { i, j, child })
    }

    pub fn relabel(&mut self, i: Label, to: LabelSet, child: NodeId) -> NodeId {
        self.push(Node::Relabel { i, to, child })
    }

    /// `ρ_{i→∅}`.
    pub fn forget(&mut self, i: Label, child: NodeId) -> NodeId {
        self.relabel(i, LabelSet::EMPTY, child)
    }

    /// `ρ_{i→{i,j}}`.
    pub fn add_label(&mut self, i: Label, j: Label, child: NodeId) -> NodeId {
        self.relabel(i, LabelSet::singleton(i).with(j), child)
    }

    /// `ρ_{i→{j}}`.
    pub fn rename(&mut self, i: Label, j: Label, child: NodeId) -> NodeId {
        self.relabel(i, LabelSet::singleton(j), child)
    }

    /// Finishes with `root` as the root. `k` defaults to the largest label used.
    pub fn finish(self, root: NodeId, k: Option<Label>) -> Result<MultiExpr, ExprError> {
        let n = self.nodes.len();
        if n == 0 {
            return Err(ExprError::Empty);
        }
        // Iterative post-order from the root; `seen` catches shared subtrees.
        let mut seen = vec![false; n];
        let mut order: Vec<u32> = Vec::with_capacity(n);
        let mut stack: Vec<(NodeId, bool)> = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id.0);
                continue;
            }
            if id.index() >= n || seen[id.index()] {
                return Err(ExprError::NotATree(id.0));
            }
            seen[id.index()] = true;
            stack.push((id, true));
            let children: Vec<NodeId> = self.nodes[id.index()].children().collect();
            for c in children.into_iter().rev() {
                stack.push((c, false));
            }
        }
        if let Some(u) = seen.iter().position(|s| !s) {
            return Err(ExprError::Unreachable(u as u32));
        }
        let mut new_index = vec![0u32; n];
        for (pos, &old) in order.iter().enumerate() {
            new_index[old as usize] = pos as u32;
        }
        let mut old_nodes: Vec<Option<Node>> = self.nodes.into_iter().map(Some).collect();
        let nodes: Vec<Node> = order
            .iter()
            .map(|&old| {
                old_nodes[old as usize]
                    .take()
                    .expect("each node appears once in the order")
                    .map_children(|c| NodeId(new_index[c.index()]))
            })
            .collect();
        let used = nodes.iter().filter_map(Node::max_label).max().unwrap_or(0);
        let k = k.unwrap_or(used.max(1));
        check_k(k, used)?;
        Ok(MultiExpr { k, nodes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_canonicalizes_order() {
        let mut b = ExprBuilder::new();
        let x = b.intro1("b", 2);
        let y = b.intro1("a", 1);
        let u = b.union(y, x);
        let j = b.join(1, 2, u);
        let e = b.finish(j, None).unwrap();
        assert_eq!(e.k(), 2);
        assert!(matches!(&e.nodes()[0], Node::Intro { vertex, .. } if vertex == "a"));
        assert!(matches!(e.nodes()[2], Node::Union(NodeId(0), NodeId(1))));
        assert_eq!(e.root(), NodeId(3));
    }

    #[test]
    fn builder_rejects_shared_and_dangling_nodes() {
        let mut b = ExprBuilder::new();
        let x = b.intro1("a", 1);
        let u = b.union(x, x);
        assert_eq!(b.finish(u, None), Err(ExprError::NotATree(0)));

        let mut b = ExprBuilder::new();
        let _ = b.intro1("a", 1);
        let y = b.intro1("b", 1);
        assert_eq!(b.finish(y, None), Err(ExprError::Unreachable(0)));
    }

    #[test]
    fn declared_k_must_cover_labels() {
        let mut b = ExprBuilder::new();
        let x = b.intro1("a", 3);
        assert!(matches!(b.clone().finish(x, Some(2)), Err(ExprError::LabelOutOfRange { .. })));
        assert_eq!(b.finish(x, Some(5)).unwrap().k(), 5);
    }

    #[test]
    fn linearity() {
        let mut b = ExprBuilder::new();
        let l: Vec<NodeId> = (0..4).map(|v| b.intro1(format!("v{v}"), 1)).collect();
        let u1 = b.union(l[0], l[1]);
        let u2 = b.union(l[2], l[3]);
        let u3 = b.union(u1, u2);
        assert!(!b.finish(u3, None).unwrap().is_linear());

        let mut b = ExprBuilder::new();
        let a = b.intro1("a", 1);
        let c = b.intro1("c", 1);
        let d = b.intro1("d", 1);
        let u1 = b.union(c, d);
        let u2 = b.union(a, u1);
        assert!(b.finish(u2, None).unwrap().is_linear());
    }
}
