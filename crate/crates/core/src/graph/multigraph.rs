use std::fmt;

use crate::label::Label;

/// A loop-allowing multigraph on the vertex set `1..=order`, stored as the
/// upper triangle (diagonal included) of its multiplicity matrix in row-major
/// order.
///
/// The derived `Ord` compares that triangle lexicographically (after the
/// order), which is the tie-break used when picking class representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AuxMultigraph {
    order: u8,
    mult: Vec<u16>,
}

impl AuxMultigraph {
    pub fn new(order: usize) -> Self {
        assert!((1..=32).contains(&order), "multigraph order {order} unsupported");
        AuxMultigraph { order: order as u8, mult: vec![0; order * (order + 1) / 2] }
    }

    /// A single loop at `a`.
    pub fn loop_at(order: usize, a: Label) -> Self {
        let mut m = Self::new(order);
        m.add(a, a, 1);
        m
    }

    /// Multigraph with one edge per listed pair.
    pub fn from_edges(order: usize, edges: &[(Label, Label)]) -> Self {
        let mut m = Self::new(order);
        for &(a, b) in edges {
            m.add(a, b, 1);
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    fn idx(&self, a: Label, b: Label) -> usize {
        let k = self.order as usize;
        assert!(a >= 1 && b >= 1 && a as usize <= k && b as usize <= k, "label out of range");
        let (a, b) = if a <= b { (a as usize - 1, b as usize - 1) } else { (b as usize - 1, a as usize - 1) };
        // Rows 0..a hold k, k-1, ..., k-a+1 entries.
        a * k - a * a.saturating_sub(1) / 2 + (b - a)
    }

    pub fn mult(&self, a: Label, b: Label) -> u16 {
        self.mult[self.idx(a, b)]
    }

    pub fn set(&mut self, a: Label, b: Label, c: u16) {
        let i = self.idx(a, b);
        self.mult[i] = c;
    }

    pub fn add(&mut self, a: Label, b: Label, c: u16) {
        let i = self.idx(a, b);
        self.mult[i] += c;
    }

    pub fn sub(&mut self, a: Label, b: Label, c: u16) {
        let i = self.idx(a, b);
        self.mult[i] = self.mult[i].checked_sub(c).expect("multiplicity underflow");
    }

    /// Total number of edges, loops included.
    pub fn edge_count(&self) -> usize {
        self.mult.iter().map(|&c| c as usize).sum()
    }

    /// Degree of `a`; a loop contributes two.
    pub fn degree(&self, a: Label) -> u32 {
        (1..=self.order as Label)
            .map(|b| if a == b { 2 * self.mult(a, a) as u32 } else { self.mult(a, b) as u32 })
            .sum()
    }

    pub fn degree_vector(&self) -> Vec<u32> {
        (1..=self.order as Label).map(|a| self.degree(a)).collect()
    }

    /// `rep[a-1]` is the smallest label in the component of `a`. Loops do not
    /// connect anything.
    pub fn component_representatives(&self) -> Vec<u8> {
        let k = self.order as usize;
        let mut parent: Vec<u8> = (0..k as u8).collect();
        fn find(p: &mut [u8], x: u8) -> u8 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            let mut y = x;
            while p[y as usize] != r {
                let next = p[y as usize];
                p[y as usize] = r;
                y = next;
            }
            r
        }
        for (a, b, _) in self.edges() {
            if a != b {
                let (ra, rb) = (find(&mut parent, a as u8 - 1), find(&mut parent, b as u8 - 1));
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi as usize] = lo;
                }
            }
        }
        (0..k as u8).map(|x| find(&mut parent, x)).collect()
    }

    /// Connected components as sorted label lists, sorted by smallest member.
    pub fn components(&self) -> Vec<Vec<Label>> {
        let rep = self.component_representatives();
        let mut block_of = vec![usize::MAX; rep.len()];
        let mut blocks: Vec<Vec<Label>> = Vec::new();
        for (a, &r) in rep.iter().enumerate() {
            if block_of[r as usize] == usize::MAX {
                block_of[r as usize] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of[r as usize]].push(a as Label + 1);
        }
        blocks
    }

    /// Edge-disjoint union (multiplicity sum).
    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "orders differ");
        AuxMultigraph { order: self.order, mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect() }
    }

    /// `(a, b, multiplicity)` for every pair `a <= b` with positive multiplicity.
    pub fn edges(&self) -> impl Iterator<Item = (Label, Label, u16)> + '_ {
        let k = self.order as Label;
        (1..=k).flat_map(move |a| (a..=k).map(move |b| (a, b))).filter_map(move |(a, b)| {
            let c = self.mult(a, b);
            (c > 0).then_some((a, b, c))
        })
    }
}

impl fmt::Debug for AuxMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}[", self.order)?;
        for (n, (a, b, c)) in self.edges().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}{b}")?;
            if c > 1 {
                write!(f, "x{c}")?;
            }
        }
        write!(f, "]")
    }
}
