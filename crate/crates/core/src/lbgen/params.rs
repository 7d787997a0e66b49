//! Numeric parameters of the Max Cut instance and gadget cut values.

use serde::Serialize;

use super::mis::MisInstance;
use super::LbError;

pub fn mcut_f(c: u128) -> u128 {
    2 * c
}

pub fn mcut_fprime(c: u128) -> u128 {
    3 * c
}

pub fn mcut_t(c: u128) -> u128 {
    3 * mcut_fprime(c) - c
}

pub fn mcut_h(n: u128, d: u128, c: u128) -> u128 {
    2 * n * (d - 1) * mcut_f(c) + n * n * d * d
}

/// Number of `r` vertices (and `T` gadgets) of an H-if gadget.
pub fn hif_r_count(alpha: usize, n: usize) -> usize {
    n.saturating_sub(alpha)
}

pub fn mcut_hif(alpha: usize, t: usize, n: u128, d: u128, c: u128) -> u128 {
    let r = hif_r_count(alpha, n as usize) as u128;
    mcut_h(n, d, c) + (t as u128 + r) * mcut_f(c) + r * mcut_t(c)
}

/// Vertex count of an H-if gadget, entry points excluded.
pub fn hif_vertex_count(alpha: usize, t: usize, n: u128, d: u128, c: u128) -> u128 {
    let r = hif_r_count(alpha, n as usize) as u128;
    2 * n * d + 2 * n * (d - 1) * c + t as u128 * c + r * (1 + c + 3 * 2 * c)
}

/// The four optional entry vertices of a copy, in slot order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZSlot {
    /// Fewer than `α` vertices of `A_{S1}` on side 1.
    FirstBelow = 1,
    /// More than `α` vertices of `A_{S1}` on side 1.
    FirstAbove = 2,
    /// Fewer than `β` vertices of `A_{S2}` on side 1.
    SecondBelow = 3,
    /// More than `β` vertices of `A_{S2}` on side 1.
    SecondAbove = 4,
}

impl ZSlot {
    pub const ALL: [ZSlot; 4] = [ZSlot::FirstBelow, ZSlot::FirstAbove, ZSlot::SecondBelow, ZSlot::SecondAbove];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The H-if gadget guarding one entry vertex `z` of a copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlotGadget {
    pub slot: ZSlot,
    /// Bitmask of the set whose `A` vertices are the gadget's entries.
    pub attached_set: u64,
    pub alpha: usize,
}

/// Per-edge data of one copy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyParams {
    pub part1: usize,
    pub part2: usize,
    pub alpha: usize,
    pub beta: usize,
    pub set1: u64,
    pub set2: u64,
    /// Present slots in slot order; their positions are the `Z(j)` order.
    pub slots: Vec<SlotGadget>,
    pub budget: u128,
}

impl CopyParams {
    pub fn z_count(&self) -> usize {
        self.slots.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionParams {
    /// Part count after padding.
    pub parts: usize,
    /// Ground set size of the set families.
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub c: u128,
    pub d: u128,
    pub c_overridden: bool,
    pub d_overridden: bool,
    pub l1: u128,
    pub l2: u128,
    pub l: u128,
    pub outer_fprime: u128,
    pub budget: u128,
    /// Sets containing 1, as bitmasks over `[k]`, in increasing order; `φ(i)` is entry `i - 1`.
    pub family: Vec<u64>,
    /// The complements of `family`, same order.
    pub co_family: Vec<u64>,
    pub copies: Vec<CopyParams>,
}

fn binom2(x: u128) -> u128 {
    x * x.saturating_sub(1) / 2
}

/// `C(k, k/2)` sets of size `k/2` containing 1, and those avoiding 1.
pub fn set_families(k: usize) -> (Vec<u64>, Vec<u64>) {
    assert!(k % 2 == 0 && (2..=62).contains(&k), "family order must be even and at most 62");
    let full = (1u64 << k) - 1;
    let mut fam = Vec::new();
    // Enumerate masks of popcount k/2 containing bit 0 in increasing order (Gosper's hack).
    let mut x: u64 = (1u64 << (k / 2)) - 1;
    while x <= full {
        if x & 1 == 1 {
            fam.push(x);
        }
        let c = x & x.wrapping_neg();
        let r = x + c;
        if r > full || r == 0 {
            break;
        }
        x = (((r ^ x) >> 2) / c) | r;
    }
    let co = fam.iter().map(|s| full & !s).collect();
    (fam, co)
}

impl ReductionParams {
    /// Parameters for the (already padded) instance `mis`.
    pub fn new(mis: &MisInstance, c_override: Option<u128>, d_override: Option<u128>) -> Result<Self, LbError> {
        if mis.size < 2 {
            return Err(LbError::TrivialInstance);
        }
        if mis.edges.is_empty() {
            return Err(LbError::NoEdges);
        }
        let k = MisInstance::family_order(mis.parts);
        let (family, co_family) = set_families(k);
        if family.len() != mis.parts {
            return Err(LbError::NotPadded { parts: mis.parts, k });
        }
        let n = mis.size - 1;
        let (nn, kp, m) = (n as u128, mis.parts as u128, mis.edges.len() as u128);
        let d_default = m * (4 * kp * binom2(nn) + 2 * kp * (2 * kp - 1) * nn * nn);
        let d = d_override.unwrap_or(d_default);
        let c = c_override.unwrap_or(d * d * binom2(2 * nn) + 1);
        if c == 0 || d == 0 {
            return Err(LbError::InvalidOverride);
        }
        let l1 = kp * (2 * kp - 2) * nn * nn;
        let l2 = 2 * kp * nn * nn;
        let outer_fprime = 1 + m * kp * nn + (m - 1) * 2 * kp * nn;
        let copies: Vec<CopyParams> = mis
            .edges
            .iter()
            .map(|&(i1, a, i2, b)| {
                let (set1, set2) = (family[i1 - 1], family[i2 - 1]);
                let full = (1u64 << k) - 1;
                let mut slots = Vec::new();
                if a != 0 {
                    slots.push(SlotGadget { slot: ZSlot::FirstBelow, attached_set: set1, alpha: a - 1 });
                }
                if a != n {
                    slots.push(SlotGadget { slot: ZSlot::FirstAbove, attached_set: full & !set1, alpha: n - (a + 1) });
                }
                if b != 0 {
                    slots.push(SlotGadget { slot: ZSlot::SecondBelow, attached_set: set2, alpha: b - 1 });
                }
                if b != n {
                    slots.push(SlotGadget { slot: ZSlot::SecondAbove, attached_set: full & !set2, alpha: n - (b + 1) });
                }
                let z = slots.len();
                let budget =
                    mcut_hif(z - 1, z, nn, d, c) + slots.iter().map(|s| mcut_hif(s.alpha, n, nn, d, c)).sum::<u128>();
                CopyParams { part1: i1, part2: i2, alpha: a, beta: b, set1, set2, slots, budget }
            })
            .collect();
        let budget =
            outer_fprime * mcut_fprime(c) + mcut_f(c) + copies.iter().map(|cp| cp.budget).sum::<u128>() + m * (l1 + l2);
        Ok(ReductionParams {
            parts: mis.parts,
            k,
            n,
            m: mis.edges.len(),
            c,
            d,
            c_overridden: c_override.is_some(),
            d_overridden: d_override.is_some(),
            l1,
            l2,
            l: l1 + l2,
            outer_fprime,
            budget,
            family,
            co_family,
            copies,
        })
    }

    /// Vertex count of the instance graph, computed without building it.
    pub fn predicted_vertices(&self) -> u128 {
        let (n, kp, m, c, d) = (self.n as u128, self.parts as u128, self.m as u128, self.c, self.d);
        let anchors = 3 + 2 * c + c;
        let copies = m * (4 * kp * n + kp * n * 2 * c) + (m - 1) * 2 * kp * n * 2 * c;
        let gadgets: u128 = self
            .copies
            .iter()
            .map(|cp| {
                let z = cp.z_count();
                z as u128
                    + hif_vertex_count(z - 1, z, n, d, c)
                    + cp.slots.iter().map(|s| hif_vertex_count(s.alpha, self.n, n, d, c)).sum::<u128>()
            })
            .sum();
        anchors + copies + gadgets
    }
}
