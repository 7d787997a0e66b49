//! A linear multi-expression of the instance graph with `O(k)` labels.
//!
//! Vertices are introduced copy by copy. Inside copy `j`, for every set `S`
//! of the family and every index `i`, come `a_S^i(j)`, its complement
//! partner, the `F'` pair between them, then `b_S^i(j-1)` and its partner
//! with the `F'` links into copy `j`. Gadget columns are created right after
//! the vertex they attach to; the rest of each H-if gadget is completed at
//! the end of the copy. Small reusable labels carry gadget internals, and
//! `current`/`old` label pairs build cliques and complete multipartite parts
//! one vertex or column at a time.

use serde::{Deserialize, Serialize};

use crate::expr::{ExprBuilder, MultiExpr, NodeId};
use crate::label::{Label, LabelSet};

use super::gadgets::hif_layout;
use super::instance::checked_params;
use super::mis::MisInstance;
use super::names;
use super::params::ReductionParams;
use super::{LbError, LbOptions};

/// How the edges between `A(j)` and `B(j)` are created.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpressionStyle {
    /// Each `b` vertex is joined, as it is introduced, to the earlier `A`
    /// vertices sharing an element with its set. Every join adds only new edges.
    #[default]
    Irredundant,
    /// One join per element `q` at the end of the copy. Pairs of sets sharing
    /// several elements get their edges added repeatedly.
    PerElement,
}

/// Label numbering. Element-indexed labels come first, then the fixed ones.
struct Labels {
    k: Label,
    style: ExpressionStyle,
    fixed: Label,
}

// Offsets of the fixed labels.
const D1: Label = 0;
const D2: Label = 1;
const D2P: Label = 2;
const F: Label = 3;
const FL: Label = 4;
const FR: Label = 5;
const FLE: Label = 6;
const FRE: Label = 7;
const A: Label = 8;
const ABAR: Label = 9;
const B: Label = 10;
const BBAR: Label = 11;
const AOLD: Label = 12;
const ABAROLD: Label = 13;
const BOLD: Label = 14;
const BBAROLD: Label = 15;
const P: Label = 16;
const R: Label = 17;
/// Column labels of slots 1..=5 are `H + slot - 1`, their old versions `HOLD + slot - 1`.
const H: Label = 18;
const HOLD: Label = 23;
/// Entry labels of slots 1..=4 are `Z + slot - 1`.
const Z: Label = 28;
const FIXED_COUNT: Label = 32;

impl Labels {
    fn new(k: usize, style: ExpressionStyle) -> Self {
        let k = k as Label;
        let indexed = match style {
            ExpressionStyle::Irredundant => 2 * k + 1,
            ExpressionStyle::PerElement => 3 * k,
        };
        Labels { k, style, fixed: indexed + 1 }
    }

    fn total(&self) -> Label {
        self.fixed + FIXED_COUNT - 1
    }

    fn a_old(&self, q: usize) -> Label {
        q as Label
    }

    fn a_cur(&self, q: usize) -> Label {
        self.k + q as Label
    }

    fn b_elem(&self, q: usize) -> Label {
        debug_assert_eq!(self.style, ExpressionStyle::PerElement);
        2 * self.k + q as Label
    }

    /// Temporary marker of the `A` vertices a new `b` vertex must see.
    fn mark(&self) -> Label {
        debug_assert_eq!(self.style, ExpressionStyle::Irredundant);
        2 * self.k + 1
    }

    fn fx(&self, offset: Label) -> Label {
        self.fixed + offset
    }

    fn h(&self, slot: usize) -> Label {
        self.fx(H + slot as Label - 1)
    }

    fn h_old(&self, slot: usize) -> Label {
        self.fx(HOLD + slot as Label - 1)
    }

    fn z(&self, slot: usize) -> Label {
        self.fx(Z + slot as Label - 1)
    }
}

fn elements(set: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |b| set >> b & 1 == 1).map(|b| b + 1)
}

struct Emitter<'p> {
    b: ExprBuilder,
    cur: Option<NodeId>,
    l: Labels,
    p: &'p ReductionParams,
    /// Whether slot `s` already has a finished column (index `s`, 1..=5).
    started: [bool; 6],
}

impl Emitter<'_> {
    fn intro(&mut self, name: String, labels: impl IntoIterator<Item = Label>) {
        let x = self.b.intro(name, labels.into_iter().collect::<LabelSet>());
        self.cur = Some(match self.cur {
            None => x,
            Some(c) => self.b.union(c, x),
        });
    }

    fn top(&self) -> NodeId {
        self.cur.expect("an Intro comes first")
    }

    fn join(&mut self, i: Label, j: Label) {
        self.cur = Some(self.b.join(i, j, self.top()));
    }

    fn forget(&mut self, i: Label) {
        self.cur = Some(self.b.forget(i, self.top()));
    }

    fn rename(&mut self, i: Label, j: Label) {
        self.cur = Some(self.b.rename(i, j, self.top()));
    }

    fn add(&mut self, i: Label, j: Label) {
        self.cur = Some(self.b.add_label(i, j, self.top()));
    }

    fn c(&self) -> usize {
        self.p.c as usize
    }

    /// Middle vertices of an `F` gadget, labelled `f`.
    fn f_vertices(&mut self, prefix: &str) {
        let f = self.l.fx(F);
        for c in 1..=self.c() {
            self.intro(names::f_mid(prefix, c), [f]);
        }
    }

    /// Inner paths of an `F'` gadget; left ends labelled `fl`, right ends `fr`.
    fn fprime_vertices(&mut self, prefix: &str) {
        let (fl, fr, fle, fre) = (self.l.fx(FL), self.l.fx(FR), self.l.fx(FLE), self.l.fx(FRE));
        for c in 1..=self.c() {
            self.intro(names::fprime_left(prefix, c), [fl, fle]);
            self.intro(names::fprime_right(prefix, c), [fr, fre]);
            self.join(fle, fre);
            self.forget(fle);
            self.forget(fre);
        }
    }

    /// `F'` between the holders of `u` (left side) and of `v` (right side).
    fn fprime(&mut self, prefix: &str, u: Label, v: Label) {
        let (fl, fr) = (self.l.fx(FL), self.l.fx(FR));
        self.fprime_vertices(prefix);
        self.join(u, fl);
        self.forget(fl);
        self.join(v, fr);
        self.forget(fr);
    }

    /// Rows of column `col`. Every row but the last ends with the `F` gadget
    /// to the next row. With `attach`, the last row gets the `F` towards its
    /// entry point and drops `p`; otherwise the last row keeps `p`.
    fn column_rows(&mut self, gadget: &str, slot: usize, col: usize, attach: bool) {
        let (p, f, h) = (self.l.fx(P), self.l.fx(F), self.l.h(slot));
        let d = self.p.d as usize;
        for row in 1..=d {
            self.intro(names::column_vertex(gadget, col, row), [p, h]);
            if row > 1 {
                self.join(p, f);
                self.forget(f);
            }
            if row < d {
                self.f_vertices(&names::column_f(gadget, col, row));
            } else if attach {
                self.f_vertices(&names::attach_f(gadget, col));
            } else {
                continue;
            }
            self.join(p, f);
            self.forget(p);
        }
    }

    /// Joins the finished column to the earlier columns of its gadget.
    fn close_column(&mut self, slot: usize) {
        let (h, h_old) = (self.l.h(slot), self.l.h_old(slot));
        if self.started[slot] {
            self.join(h, h_old);
        }
        self.rename(h, h_old);
        self.started[slot] = true;
    }

    fn attached_column(&mut self, gadget: &str, slot: usize, col: usize, entry: Label) {
        let f = self.l.fx(F);
        self.column_rows(gadget, slot, col, true);
        self.join(entry, f);
        self.forget(f);
        self.close_column(slot);
    }

    fn free_column(&mut self, gadget: &str, slot: usize, col: usize) {
        self.column_rows(gadget, slot, col, false);
        self.forget(self.l.fx(P));
        self.close_column(slot);
    }

    /// Column `col` with vertex `r_t`, `F(r_t, y)` and `T(p_{col,D}, r_t, z)`.
    fn triangle_column(&mut self, gadget: &str, slot: usize, col: usize, t: usize, y: Label, z: Label) {
        let (p, r, f) = (self.l.fx(P), self.l.fx(R), self.l.fx(F));
        self.intro(names::r(gadget, t), [r]);
        self.column_rows(gadget, slot, col, false);
        let [uv, uw, vw] = names::t_parts(&names::r_t(gadget, t));
        self.fprime(&uv, p, r);
        self.fprime(&uw, p, z);
        self.forget(p);
        self.fprime(&vw, r, z);
        self.f_vertices(&names::r_f(gadget, t));
        self.join(r, f);
        self.join(f, y);
        self.forget(f);
        self.forget(r);
        self.close_column(slot);
    }

    fn finish_gadget(&mut self, slot: usize) {
        self.forget(self.l.h_old(slot));
        self.started[slot] = false;
    }

    fn anchors(&mut self) {
        let (d1, d2, d2p, f) = (self.l.fx(D1), self.l.fx(D2), self.l.fx(D2P), self.l.fx(F));
        self.intro(names::D1.into(), [d1]);
        self.intro(names::D2.into(), [d2]);
        self.intro(names::D2P.into(), [d2p]);
        self.fprime(names::ANCHOR_FPRIME, d1, d2);
        self.f_vertices(names::ANCHOR_F);
        self.join(f, d2p);
        self.join(f, d2);
        self.forget(f);
    }

    /// One step of the main loop: index `i` of set `set` in iteration `j`
    /// (copy `j` for `A`, copy `j - 1` for `B`).
    fn selection_step(&mut self, j: usize, set: u64, i: usize) {
        let p = self.p;
        let (n, m) = (p.n, p.m);
        let full = (1u64 << p.k) - 1;
        let co = full & !set;
        let (a, abar, b, bbar) = (self.l.fx(A), self.l.fx(ABAR), self.l.fx(B), self.l.fx(BBAR));
        if j <= m {
            let cp = &p.copies[j - 1];
            for (s, lab) in [(set, a), (co, abar)] {
                let labels: Vec<Label> = elements(s).map(|q| self.l.a_cur(q)).chain([lab]).collect();
                self.intro(names::a(s, i, j), labels);
                for sg in cp.slots.iter().filter(|sg| sg.attached_set == s) {
                    let slot = sg.slot.index();
                    self.attached_column(&names::hif(slot, j), slot, i, lab);
                }
            }
            self.fprime(&names::pair_fprime(set, i, j), a, abar);
        }
        if j >= 2 {
            for (s, lb, la) in [(set, b, a), (co, bbar, abar)] {
                let mut labels = vec![lb];
                if self.l.style == ExpressionStyle::PerElement {
                    labels.extend(elements(s).map(|q| self.l.b_elem(q)));
                }
                self.intro(names::b(s, i, j - 1), labels);
                if self.l.style == ExpressionStyle::Irredundant {
                    let y = self.l.mark();
                    for q in elements(s) {
                        self.add(self.l.a_old(q), y);
                    }
                    self.join(lb, y);
                    self.forget(y);
                }
                if j <= m {
                    self.fprime(&names::link_fprime(s, i, j - 1), lb, la);
                }
            }
        }
        let mut pairs = Vec::new();
        if j <= m {
            pairs.extend([(a, AOLD), (abar, ABAROLD)]);
        }
        if j >= 2 {
            pairs.extend([(b, BOLD), (bbar, BBAROLD)]);
        }
        for (cur, old) in pairs {
            let old = self.l.fx(old);
            if i > 1 {
                self.join(cur, old);
            }
            self.rename(cur, old);
            if i == n {
                self.forget(old);
            }
        }
    }

    fn end_of_iteration(&mut self, j: usize) {
        let (k, m) = (self.p.k, self.p.m);
        if j >= 2 {
            for q in 1..=k {
                if self.l.style == ExpressionStyle::PerElement {
                    self.join(self.l.a_old(q), self.l.b_elem(q));
                    self.forget(self.l.b_elem(q));
                }
                self.forget(self.l.a_old(q));
            }
        }
        if j <= m {
            for q in 1..=k {
                self.rename(self.l.a_cur(q), self.l.a_old(q));
            }
            self.complete_gadgets(j);
        }
    }

    fn complete_gadgets(&mut self, j: usize) {
        let p = self.p;
        let n = p.n;
        let cp = &p.copies[j - 1];
        let (d2, d2p) = (self.l.fx(D2), self.l.fx(D2P));
        let outer = names::hif(5, j);
        for (pos, sg) in cp.slots.iter().enumerate() {
            let slot = sg.slot.index();
            let (gadget, z) = (names::hif(slot, j), self.l.z(slot));
            self.intro(names::z(slot, j), [z]);
            let layout = hif_layout(sg.alpha, n, n);
            for (t, &col) in layout.triangle.iter().enumerate() {
                self.triangle_column(&gadget, slot, col, t + 1, d2, z);
            }
            for &col in &layout.free {
                self.free_column(&gadget, slot, col);
            }
            self.finish_gadget(slot);
            self.attached_column(&outer, 5, pos + 1, z);
            self.forget(z);
        }
        let zc = cp.z_count();
        let layout = hif_layout(zc - 1, zc, n);
        for &col in &layout.free {
            self.free_column(&outer, 5, col);
        }
        for (t, &col) in layout.triangle.iter().enumerate() {
            self.triangle_column(&outer, 5, col, t + 1, d2, d2p);
        }
        self.finish_gadget(5);
    }
}

/// Builds the expression for the padded `mis`.
pub fn build_expression(mis: &MisInstance, opts: &LbOptions) -> Result<MultiExpr, LbError> {
    let (_, p) = checked_params(mis, opts)?;
    let labels = Labels::new(p.k, opts.style);
    if labels.total() > crate::label::MAX_LABEL {
        return Err(LbError::TooManyLabels { needed: labels.total() });
    }
    let mut e = Emitter { b: ExprBuilder::new(), cur: None, l: labels, p: &p, started: [false; 6] };
    e.anchors();
    for j in 1..=p.m + 1 {
        for &set in &p.family {
            for i in 1..=p.n {
                e.selection_step(j, set, i);
            }
        }
        e.end_of_iteration(j);
    }
    let root = e.top();
    Ok(e.b.finish(root, None)?)
}

/// Labels the expression may use for family order `k`.
pub fn label_budget(k: usize, style: ExpressionStyle) -> usize {
    Labels::new(k, style).total() as usize
}
