//! Exhaustive checks of the gadget cut properties at small parameters.

use serde::Serialize;

use crate::graph::{conditional_max_cut, OracleError, SimpleGraph};

use super::gadgets::{hif_layout, make_f, make_fprime, make_h, make_hif, make_t};
use super::params::{hif_r_count, mcut_f, mcut_fprime, mcut_h, mcut_hif, mcut_t};

/// Largest number of H column vertices whose assignments get enumerated.
pub const H_COLUMN_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditItem {
    pub gadget: String,
    pub item: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// Whether the premises of the property hold: `C ≥ D²·C(2n,2) + 1` for H
    /// and H-if, and additionally `t ≤ n` for H-if. Always true for F, F' and T.
    pub hypothesis_met: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub c: usize,
    pub d: usize,
    pub n: usize,
    /// Whether `C ≥ D²·C(2n,2) + 1`.
    pub hypothesis_met: bool,
    pub items: Vec<AuditItem>,
}

impl AuditReport {
    /// Every item whose premise holds passes.
    pub fn passes_under_hypothesis(&self) -> bool {
        self.items.iter().filter(|i| i.hypothesis_met).all(|i| i.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}

struct Items {
    out: Vec<AuditItem>,
    gadget: String,
    hypothesis: bool,
}

impl Items {
    fn push(&mut self, item: &str, expected: String, observed: String, pass: bool) {
        self.out.push(AuditItem {
            gadget: self.gadget.clone(),
            item: item.to_string(),
            expected,
            observed,
            pass,
            hypothesis_met: self.hypothesis,
        });
    }

    fn eq(&mut self, item: &str, expected: usize, observed: usize) {
        self.push(item, format!("= {expected}"), observed.to_string(), expected == observed);
    }

    fn at_most(&mut self, item: &str, bound: i128, observed: Option<usize>) {
        // `None` means no partition falls under the item: vacuously true.
        let pass = observed.map_or(true, |o| o as i128 <= bound);
        let obs = observed.map_or_else(|| "no such partition".into(), |o| o.to_string());
        self.push(item, format!("<= {bound}"), obs, pass);
    }

    fn below(&mut self, item: &str, bound: usize, observed: Option<usize>) {
        let pass = observed.map_or(true, |o| o < bound);
        let obs = observed.map_or_else(|| "no such partition".into(), |o| o.to_string());
        self.push(item, format!("< {bound}"), obs, pass);
    }
}

fn cut(g: &SimpleGraph, pins: &[(usize, bool)]) -> Result<usize, OracleError> {
    conditional_max_cut(g, pins)
}

/// Assignments of `vs` as pin lists, indexed by bitmask (bit `b` = side of `vs[b]`).
fn pins_of(vs: &[usize], mask: u64) -> Vec<(usize, bool)> {
    vs.iter().enumerate().map(|(b, &v)| (v, mask >> b & 1 == 1)).collect()
}

fn audit_f_family(c: usize, out: &mut Vec<AuditItem>) -> Result<(), OracleError> {
    let cc = c as u128;
    let f = make_f(c);
    let (u, v) = (f.entries[0], f.entries[1]);
    let mut it = Items { out: Vec::new(), gadget: format!("F(C={c})"), hypothesis: true };
    let best = cut(&f.graph, &[])?;
    it.eq("mcut(F) = 2C", mcut_f(cc) as usize, best);
    it.eq("u,v apart: best = mcut(F) - C", best - c, cut(&f.graph, &[(u, true), (v, false)])?);
    it.eq("u,v together: extends to optimal", best, cut(&f.graph, &[(u, true), (v, true)])?);
    out.append(&mut it.out);

    let fp = make_fprime(c);
    let (u, v) = (fp.entries[0], fp.entries[1]);
    let mut it = Items { out: Vec::new(), gadget: format!("F'(C={c})"), hypothesis: true };
    let best = cut(&fp.graph, &[])?;
    it.eq("mcut(F') = 3C", mcut_fprime(cc) as usize, best);
    it.eq("u,v together: best = mcut(F') - C", best - c, cut(&fp.graph, &[(u, true), (v, true)])?);
    it.eq("u,v apart: extends to optimal", best, cut(&fp.graph, &[(u, true), (v, false)])?);
    out.append(&mut it.out);

    let t = make_t(c);
    let mut it = Items { out: Vec::new(), gadget: format!("T(C={c})"), hypothesis: true };
    let best = cut(&t.graph, &[])?;
    it.eq("mcut(T) = 3 mcut(F') - C", mcut_t(cc) as usize, best);
    let mono = [true, false]
        .iter()
        .map(|&s| cut(&t.graph, &pins_of(&t.entries, if s { 7 } else { 0 })))
        .collect::<Result<Vec<_>, _>>()?;
    it.at_most("u,v,w together: <= mcut(T) - 2C", best as i128 - 2 * c as i128, mono.into_iter().max());
    let mixed = (1..7u64).map(|mask| cut(&t.graph, &pins_of(&t.entries, mask))).collect::<Result<Vec<_>, _>>()?;
    it.eq("u,v,w not together: extends to optimal", best, mixed.into_iter().min().unwrap_or(0));
    out.append(&mut it.out);
    Ok(())
}

fn audit_h(c: usize, d: usize, n: usize, hypothesis: bool, out: &mut Vec<AuditItem>) -> Result<(), OracleError> {
    let h = make_h(n, d, c);
    let verts: Vec<usize> = h.columns.iter().flatten().copied().collect();
    if verts.len() > H_COLUMN_CAP {
        return Err(OracleError::TooLarge { what: "H column enumeration", size: verts.len(), cap: H_COLUMN_CAP });
    }
    let mut it = Items { out: Vec::new(), gadget: format!("H(n={n},D={d},C={c})"), hypothesis };
    let best = cut(&h.graph, &[])?;
    it.eq("mcut(H) = 2n(D-1) mcut(F) + n^2 D^2", mcut_h(n as u128, d as u128, c as u128) as usize, best);
    let (mut bad_max, mut good_min): (Option<usize>, Option<usize>) = (None, None);
    for mask in 0..1u64 << verts.len() {
        let val = cut(&h.graph, &pins_of(&verts, mask))?;
        // Column `col` occupies bits col*d .. col*d + d.
        let cols: Vec<Option<bool>> = (0..2 * n)
            .map(|col| {
                let bits = (mask >> (col * d)) & ((1 << d) - 1);
                match bits {
                    0 => Some(false),
                    b if b == (1 << d) - 1 => Some(true),
                    _ => None,
                }
            })
            .collect();
        let good = cols.iter().all(Option::is_some) && cols.iter().filter(|c| **c == Some(true)).count() == n;
        if good {
            good_min = Some(good_min.map_or(val, |g| g.min(val)));
        } else {
            bad_max = Some(bad_max.map_or(val, |b| b.max(val)));
        }
    }
    it.below("optimal partitions: whole columns, exactly n on side 1", best, bad_max);
    it.eq("n whole columns on side 1: extends to optimal", best, good_min.unwrap_or(0));
    it.at_most("split column or wrong column count: <= mcut(H) - D^2", best as i128 - (d * d) as i128, bad_max);
    out.append(&mut it.out);
    Ok(())
}

fn audit_hif(
    alpha: usize,
    t: usize,
    c: usize,
    d: usize,
    n: usize,
    hypothesis: bool,
    out: &mut Vec<AuditItem>,
) -> Result<(), OracleError> {
    let g = make_hif(alpha, t, n, d, c);
    let hypothesis = hypothesis && t <= n;
    let mut it = Items { out: Vec::new(), gadget: format!("H-if(alpha={alpha},t={t},n={n},D={d},C={c})"), hypothesis };
    let best = cut(&g.graph, &[])?;
    let formula = mcut_hif(alpha, t, n as u128, d as u128, c as u128) as usize;
    it.eq("mcut = mcut(H) + (t + n - alpha) mcut(F) + (n - alpha) mcut(T)", formula, best);
    let (mut over_max, mut ok_min): (Option<usize>, Option<usize>) = (None, None);
    for mask in 0..1u64 << (t + 2) {
        let pins = pins_of(&g.entries, mask);
        let selected = (0..t).filter(|&b| mask >> b & 1 == 1).count();
        let (y, z) = (mask >> t & 1 == 1, mask >> (t + 1) & 1 == 1);
        let val = cut(&g.graph, &pins)?;
        if !y && !z && selected > alpha {
            over_max = Some(over_max.map_or(val, |o| o.max(val)));
        } else if !y && (z || selected <= alpha) {
            ok_min = Some(ok_min.map_or(val, |o| o.min(val)));
        }
    }
    it.below("y,z on side 2 and optimal: at most alpha entries on side 1", best, over_max);
    it.eq("admissible entry sides: extends to optimal", best, ok_min.unwrap_or(best));
    it.at_most(
        "y,z on side 2, more than alpha entries on side 1: <= mcut - D^2",
        best as i128 - (d * d) as i128,
        over_max,
    );
    out.append(&mut it.out);
    Ok(())
}

/// H-if parameter pairs `(alpha, t)` that fit `2n` columns.
pub fn hif_parameters(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for t in 1..=2 * n {
        for alpha in 0..=t {
            if t + hif_r_count(alpha, n) <= 2 * n {
                v.push((alpha, t));
            }
        }
    }
    v
}

/// Audits F, F', T, H and every fitting H-if gadget for the given parameters.
pub fn audit_gadgets(c: usize, d: usize, n: usize) -> Result<AuditReport, OracleError> {
    assert!(c >= 1 && d >= 1 && n >= 1, "gadget parameters must be positive");
    let hypothesis = c as u128 > (d * d) as u128 * ((2 * n) * (2 * n - 1) / 2) as u128;
    let mut items = Vec::new();
    audit_f_family(c, &mut items)?;
    audit_h(c, d, n, hypothesis, &mut items)?;
    for (alpha, t) in hif_parameters(n) {
        debug_assert!(hif_layout(alpha, t, n).attached.len() == t);
        audit_hif(alpha, t, c, d, n, hypothesis, &mut items)?;
    }
    Ok(AuditReport { c, d, n, hypothesis_met: hypothesis, items })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_family_small() {
        let mut items = Vec::new();
        audit_f_family(2, &mut items).unwrap();
        assert!(items.iter().all(|i| i.pass), "{items:#?}");
    }

    #[test]
    fn parameters_fit() {
        assert_eq!(hif_parameters(1), vec![(0, 1), (1, 1), (1, 2), (2, 2)]);
    }
}
