//! Vertex naming shared by the graph and expression builders.
//!
//! Gadget internals are named `<gadget prefix>.<part>`, so every name is
//! determined by the gadget's role and never by construction order.

pub const D1: &str = "d1";
pub const D2: &str = "d2";
pub const D2P: &str = "d2p";

/// Prefix of the `F'` gadget between `d1` and `d2`.
pub const ANCHOR_FPRIME: &str = "fd";
/// Prefix of the `F` gadget between `d2p` and `d2`.
pub const ANCHOR_F: &str = "gd";

pub fn a(set: u64, i: usize, j: usize) -> String {
    format!("aS{set}i{i}j{j}")
}

pub fn b(set: u64, i: usize, j: usize) -> String {
    format!("bS{set}i{i}j{j}")
}

/// Entry vertex of slot `slot` (1..=4) in copy `j`.
pub fn z(slot: usize, j: usize) -> String {
    format!("z{slot}j{j}")
}

/// `F'` between `a_S^i(j)` and its complement partner.
pub fn pair_fprime(set: u64, i: usize, j: usize) -> String {
    format!("fa{set}i{i}j{j}")
}

/// `F'` between `b_S^i(j)` and `a_S^i(j+1)`.
pub fn link_fprime(set: u64, i: usize, j: usize) -> String {
    format!("fb{set}i{i}j{j}")
}

/// H-if gadget of slot `slot` (1..=4, or 5 for the gadget on `Z(j)`) in copy `j`.
pub fn hif(slot: usize, j: usize) -> String {
    format!("h{slot}j{j}")
}

/// Middle vertex `c` (1-based) of the `F` gadget `prefix`.
pub fn f_mid(prefix: &str, c: usize) -> String {
    format!("{prefix}.m{c}")
}

/// Path `c` of the `F'` gadget `prefix`: the vertex next to its first endpoint.
pub fn fprime_left(prefix: &str, c: usize) -> String {
    format!("{prefix}.l{c}")
}

/// Path `c` of the `F'` gadget `prefix`: the vertex next to its second endpoint.
pub fn fprime_right(prefix: &str, c: usize) -> String {
    format!("{prefix}.r{c}")
}

/// The three `F'` gadgets of the triangle gadget `prefix` on `(u, v, w)`.
pub fn t_parts(prefix: &str) -> [String; 3] {
    [format!("{prefix}uv"), format!("{prefix}uw"), format!("{prefix}vw")]
}

pub fn column_vertex(gadget: &str, col: usize, row: usize) -> String {
    format!("{gadget}.p{col}_{row}")
}

/// `F` between rows `row` and `row + 1` of column `col`.
pub fn column_f(gadget: &str, col: usize, row: usize) -> String {
    format!("{gadget}.p{col}_{row}f")
}

/// `F` between the last row of column `col` and its entry point.
pub fn attach_f(gadget: &str, col: usize) -> String {
    format!("{gadget}.x{col}")
}

pub fn r(gadget: &str, t: usize) -> String {
    format!("{gadget}.r{t}")
}

/// `F` between `r_t` and the gadget's `y` entry.
pub fn r_f(gadget: &str, t: usize) -> String {
    format!("{gadget}.r{t}f")
}

/// Triangle gadget on `(p_{n+t,D}, r_t, z)`.
pub fn r_t(gadget: &str, t: usize) -> String {
    format!("{gadget}.t{t}")
}
