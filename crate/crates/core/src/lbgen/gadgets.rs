//! Max Cut gadgets, grafted onto existing vertices of a [`GraphBuilder`].

use crate::graph::{GraphBuilder, GraphError, SimpleGraph};

use super::names;
use super::params::hif_r_count;

/// `c` disjoint paths `u - m - v`.
pub fn add_f(g: &mut GraphBuilder, prefix: &str, u: usize, v: usize, c: usize) -> Result<(), GraphError> {
    for p in 1..=c {
        let m = g.add_vertex(names::f_mid(prefix, p))?;
        g.add_edge_idx(u, m)?;
        g.add_edge_idx(m, v)?;
    }
    Ok(())
}

/// `c` disjoint paths `u - l - r - v`.
pub fn add_fprime(g: &mut GraphBuilder, prefix: &str, u: usize, v: usize, c: usize) -> Result<(), GraphError> {
    for p in 1..=c {
        let l = g.add_vertex(names::fprime_left(prefix, p))?;
        let r = g.add_vertex(names::fprime_right(prefix, p))?;
        g.add_edge_idx(u, l)?;
        g.add_edge_idx(l, r)?;
        g.add_edge_idx(r, v)?;
    }
    Ok(())
}

/// `F'` gadgets on each pair of `u, v, w`.
pub fn add_t(g: &mut GraphBuilder, prefix: &str, u: usize, v: usize, w: usize, c: usize) -> Result<(), GraphError> {
    let [uv, uw, vw] = names::t_parts(prefix);
    add_fprime(g, &uv, u, v, c)?;
    add_fprime(g, &uw, u, w, c)?;
    add_fprime(g, &vw, v, w, c)
}

/// `2n` columns of `d` vertices, consecutive column vertices joined by `F`
/// gadgets, and all vertices of distinct columns adjacent.
/// Returns the columns, `columns[col - 1][row - 1]`.
pub fn add_h(g: &mut GraphBuilder, gadget: &str, n: usize, d: usize, c: usize) -> Result<Vec<Vec<usize>>, GraphError> {
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(2 * n);
    for col in 1..=2 * n {
        let mut column = Vec::with_capacity(d);
        for row in 1..=d {
            let p = g.add_vertex(names::column_vertex(gadget, col, row))?;
            if let Some(&prev) = column.last() {
                add_f(g, &names::column_f(gadget, col, row - 1), prev, p, c)?;
            }
            for other in &columns {
                for &q in other {
                    g.add_edge_idx(q, p)?;
                }
            }
            column.push(p);
        }
        columns.push(column);
    }
    Ok(columns)
}

/// Column roles of an H-if gadget: attached to entries, carrying a triangle
/// gadget, or free. All 1-based and together a partition of `1..=2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HifLayout {
    pub attached: Vec<usize>,
    pub triangle: Vec<usize>,
    pub free: Vec<usize>,
}

pub fn hif_layout(alpha: usize, t: usize, n: usize) -> HifLayout {
    let r = hif_r_count(alpha, n);
    assert!(t >= 1 && t + r <= 2 * n, "H-if gadget with t={t}, alpha={alpha} does not fit 2n={} columns", 2 * n);
    let attached: Vec<usize> = (1..=t).collect();
    let triangle: Vec<usize> = (n + 1..=n + r).collect();
    let free = (1..=2 * n).filter(|c| !attached.contains(c) && !triangle.contains(c)).collect();
    HifLayout { attached, triangle, free }
}

/// H plus an `F` from the last vertex of column `i` to `xs[i-1]`, and for each
/// `t ≤ n - alpha` a vertex `r_t` with `F(r_t, y)` and `T(p_{n+t,D}, r_t, z)`.
#[allow(clippy::too_many_arguments)]
pub fn add_hif(
    g: &mut GraphBuilder,
    gadget: &str,
    alpha: usize,
    xs: &[usize],
    y: usize,
    z: usize,
    n: usize,
    d: usize,
    c: usize,
) -> Result<(), GraphError> {
    let layout = hif_layout(alpha, xs.len(), n);
    let columns = add_h(g, gadget, n, d, c)?;
    for (&col, &x) in layout.attached.iter().zip(xs) {
        add_f(g, &names::attach_f(gadget, col), columns[col - 1][d - 1], x, c)?;
    }
    for (t, &col) in layout.triangle.iter().enumerate() {
        let t = t + 1;
        let r = g.add_vertex(names::r(gadget, t))?;
        add_f(g, &names::r_f(gadget, t), r, y, c)?;
        add_t(g, &names::r_t(gadget, t), columns[col - 1][d - 1], r, z, c)?;
    }
    Ok(())
}

/// A standalone gadget and the indices of its distinguished vertices.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: SimpleGraph,
    /// Entry points in the gadget's parameter order.
    pub entries: Vec<usize>,
    /// Column vertices for H and H-if gadgets, `columns[col - 1][row - 1]`.
    pub columns: Vec<Vec<usize>>,
}

fn entry_vertices(g: &mut GraphBuilder, names: &[&str]) -> Vec<usize> {
    names.iter().map(|n| g.add_vertex(*n).expect("fresh builder")).collect()
}

fn column_indices(g: &SimpleGraph, gadget: &str, n: usize, d: usize) -> Vec<Vec<usize>> {
    (1..=2 * n)
        .map(|col| {
            (1..=d).map(|row| g.index_of(&names::column_vertex(gadget, col, row)).expect("column vertex")).collect()
        })
        .collect()
}

pub fn make_f(c: usize) -> Gadget {
    let mut g = GraphBuilder::new();
    let e = entry_vertices(&mut g, &["u", "v"]);
    add_f(&mut g, "f", e[0], e[1], c).expect("fresh names");
    Gadget { graph: g.build(), entries: e, columns: vec![] }
}

pub fn make_fprime(c: usize) -> Gadget {
    let mut g = GraphBuilder::new();
    let e = entry_vertices(&mut g, &["u", "v"]);
    add_fprime(&mut g, "f", e[0], e[1], c).expect("fresh names");
    Gadget { graph: g.build(), entries: e, columns: vec![] }
}

pub fn make_t(c: usize) -> Gadget {
    let mut g = GraphBuilder::new();
    let e = entry_vertices(&mut g, &["u", "v", "w"]);
    add_t(&mut g, "t", e[0], e[1], e[2], c).expect("fresh names");
    Gadget { graph: g.build(), entries: e, columns: vec![] }
}

pub fn make_h(n: usize, d: usize, c: usize) -> Gadget {
    let mut g = GraphBuilder::new();
    add_h(&mut g, "h", n, d, c).expect("fresh names");
    let graph = g.build();
    let columns = column_indices(&graph, "h", n, d);
    Gadget { graph, entries: vec![], columns }
}

/// Entries are `x1..xt, y, z`.
pub fn make_hif(alpha: usize, t: usize, n: usize, d: usize, c: usize) -> Gadget {
    let mut g = GraphBuilder::new();
    let mut labels: Vec<String> = (1..=t).map(|i| format!("x{i}")).collect();
    labels.push("y".into());
    labels.push("z".into());
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let e = entry_vertices(&mut g, &refs);
    add_hif(&mut g, "h", alpha, &e[..t], e[t], e[t + 1], n, d, c).expect("fresh names");
    let graph = g.build();
    let columns = column_indices(&graph, "h", n, d);
    Gadget { graph, entries: e, columns }
}
