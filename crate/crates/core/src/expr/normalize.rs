use super::{ExprBuilder, MultiExpr, Node, NodeId};
use crate::label::LabelSet;

/// Rewrites `e` so that every Intro carries one label and every Relabel is a
/// forget (`ρ_{i→∅}`) or an add (`ρ_{i→{i,j}}`).
///
/// A multi-label Intro becomes an Intro of its smallest label followed by adds.
/// `ρ_{i→S}` becomes an add for each `j ∈ S \ {i}`, followed by a forget of `i`
/// when `i ∉ S`; `ρ_{i→{i}}` disappears. No fresh labels are used.
pub fn normalize(e: &MultiExpr) -> MultiExpr {
    let mut b = ExprBuilder::new();
    // Post-order means children are already rewritten when a parent is seen.
    let mut map: Vec<NodeId> = Vec::with_capacity(e.len());
    for node in e.nodes() {
        let id = match node {
            Node::Intro { vertex, labels } => {
                let first = labels.first().expect("intro label sets are non-empty");
                let mut cur = b.intro1(vertex.clone(), first);
                for j in labels.without(first).iter() {
                    cur = b.add_label(first, j, cur);
                }
                cur
            }
            Node::Union(l, r) => b.union(map[l.index()], map[r.index()]),
            &Node::Join { i, j, child } => b.join(i, j, map[child.index()]),
            &Node::Relabel { i, to, child } => {
                let mut cur = map[child.index()];
                for j in to.without(i).iter() {
                    cur = b.add_label(i, j, cur);
                }
                if !to.contains(i) {
                    cur = b.forget(i, cur);
                }
                cur
            }
        };
        map.push(id);
    }
    let root = *map.last().expect("expressions are non-empty");
    b.finish(root, Some(e.k())).expect("rewriting preserves tree shape and labels")
}

/// Shape check for the output of [`normalize`].
pub fn is_normalized(e: &MultiExpr) -> bool {
    e.nodes().iter().all(|n| match n {
        Node::Intro { labels, .. } => labels.len() == 1,
        Node::Relabel { i, to, .. } => *to == LabelSet::EMPTY || (to.len() == 2 && to.contains(*i)),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, serialize};

    fn norm(s: &str) -> String {
        serialize(&normalize(&parse(s).unwrap())).trim_end().to_string()
    }

    #[test]
    fn multi_label_intro() {
        assert_eq!(norm("(intro v (1 2))"), "(relabel 1 (1 2) (intro v (1)))");
    }

    #[test]
    fn general_relabel() {
        assert_eq!(
            norm("(relabel 1 (2 3) (intro x (1)))"),
            "(relabel 1 () (relabel 1 (1 3) (relabel 1 (1 2) (intro x (1)))))"
        );
    }

    #[test]
    fn allowed_forms_unchanged() {
        for s in ["(relabel 1 (1 2) (intro x (1)))", "(relabel 1 () (intro x (1)))"] {
            assert_eq!(norm(s), s);
        }
    }

    #[test]
    fn identity_relabel_vanishes() {
        assert_eq!(norm("(relabel 1 (1) (intro x (1)))"), "(intro x (1))");
    }

    #[test]
    fn keeps_declared_k() {
        let e = normalize(&parse("(mcw 4 (relabel 1 (1) (intro x (1))))").unwrap());
        assert_eq!(e.k(), 4);
        assert!(is_normalized(&e));
    }
}
