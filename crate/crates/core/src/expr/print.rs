use std::fmt::Write;

use super::{MultiExpr, Node, NodeId};
use crate::label::LabelSet;

enum Step {
    Node(NodeId),
    Space,
    Close,
}

fn write_labels(out: &mut String, s: LabelSet) {
    out.push('(');
    for (n, l) in s.iter().enumerate() {
        if n > 0 {
            out.push(' ');
        }
        write!(out, "{l}").expect("writing to a String");
    }
    out.push(')');
}

/// Canonical text form: one line, single spaces, no comments.
///
/// The `(mcw k ...)` wrapper is emitted only when the declared `k` differs
/// from the largest label used, so that re-parsing restores the same `k`.
pub fn serialize(e: &MultiExpr) -> String {
    let mut out = String::with_capacity(e.len() * 16);
    let wrapped = e.k() != e.max_label_used().max(1);
    if wrapped {
        write!(out, "(mcw {} ", e.k()).expect("writing to a String");
    }
    let mut stack = vec![Step::Node(e.root())];
    while let Some(step) = stack.pop() {
        match step {
            Step::Close => out.push(')'),
            Step::Space => out.push(' '),
            Step::Node(id) => match e.node(id) {
                Node::Intro { vertex, labels } => {
                    write!(out, "(intro {vertex} ").expect("writing to a String");
                    write_labels(&mut out, *labels);
                    out.push(')');
                }
                Node::Union(l, r) => {
                    out.push_str("(union ");
                    stack.push(Step::Close);
                    stack.push(Step::Node(*r));
                    stack.push(Step::Space);
                    stack.push(Step::Node(*l));
                }
                Node::Join { i, j, child } => {
                    write!(out, "(join {i} {j} ").expect("writing to a String");
                    stack.push(Step::Close);
                    stack.push(Step::Node(*child));
                }
                Node::Relabel { i, to, child } => {
                    write!(out, "(relabel {i} ").expect("writing to a String");
                    write_labels(&mut out, *to);
                    out.push(' ');
                    stack.push(Step::Close);
                    stack.push(Step::Node(*child));
                }
            },
        }
    }
    if wrapped {
        out.push(')');
    }
    out.push('\n');
    out
}
