//! Multicolored Independent Set instances.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::LbError;

/// Ordered pairs of `(part, index)` vertices joined by an edge.
type Conflicts = BTreeSet<((usize, usize), (usize, usize))>;

/// A `k`-partite graph with parts `U_1..U_k` of `size` vertices each.
/// Vertex `u_i^γ` is part `i` (1-based), index `γ` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisInstance {
    pub parts: usize,
    pub size: usize,
    /// `(i1, a, i2, b)`: an edge between `u_{i1}^a` and `u_{i2}^b`, in input order.
    pub edges: Vec<(usize, usize, usize, usize)>,
}

/// Largest search space `size^parts` the brute-force solver accepts.
pub const MIS_BRUTE_FORCE_CAP: u128 = 1 << 24;

impl MisInstance {
    pub fn new(parts: usize, size: usize, edges: Vec<(usize, usize, usize, usize)>) -> Result<Self, LbError> {
        let mis = MisInstance { parts, size, edges };
        mis.check()?;
        Ok(mis)
    }

    fn check(&self) -> Result<(), LbError> {
        let bad = |reason: String| Err(LbError::InvalidMis(reason));
        if self.parts == 0 || self.size == 0 {
            return bad("need at least one part of at least one vertex".into());
        }
        let mut seen = BTreeSet::new();
        for &(i1, a, i2, b) in &self.edges {
            if !(1..=self.parts).contains(&i1) || !(1..=self.parts).contains(&i2) {
                return bad(format!("part index out of range 1..={}", self.parts));
            }
            if a >= self.size || b >= self.size {
                return bad(format!("vertex index out of range 0..{}", self.size));
            }
            if i1 == i2 {
                return bad(format!("edge inside part {i1}"));
            }
            if !seen.insert(((i1, a).min((i2, b)), (i1, a).max((i2, b)))) {
                return bad(format!("duplicate edge {i1} {a} {i2} {b}"));
            }
        }
        Ok(())
    }

    /// Parses `mis <parts> <size>` followed by `e <i1> <a> <i2> <b>` lines.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, LbError> {
        let mut header = None;
        let mut edges = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| LbError::MisFormat { line: no + 1, reason: reason.to_string() };
            let mut words = line.split_whitespace();
            let tag = words.next().expect("non-empty line");
            let nums: Vec<usize> = words
                .map(|w| w.parse().map_err(|_| err("expected a non-negative integer")))
                .collect::<Result<_, _>>()?;
            match (tag, header, nums.len()) {
                ("mis", None, 2) => header = Some((nums[0], nums[1])),
                ("mis", Some(_), _) => return Err(err("repeated header")),
                ("mis", None, _) => return Err(err("header needs two numbers")),
                ("e", Some(_), 4) => edges.push((nums[0], nums[1], nums[2], nums[3])),
                ("e", None, _) => return Err(err("edge before header")),
                ("e", Some(_), _) => return Err(err("edge needs four numbers")),
                _ => return Err(err("unknown line")),
            }
        }
        let (parts, size) = header.ok_or(LbError::MisFormat { line: 0, reason: "missing header".into() })?;
        Self::new(parts, size, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("mis {} {}\n", self.parts, self.size);
        for (i1, a, i2, b) in &self.edges {
            writeln!(s, "e {i1} {a} {i2} {b}").expect("writing to a string");
        }
        s
    }

    /// Whether one vertex per part can be picked with no edge among the picks.
    pub fn has_multicolored_independent_set(&self) -> Result<bool, LbError> {
        let space = (self.size as u128).checked_pow(self.parts as u32).unwrap_or(u128::MAX);
        if space > MIS_BRUTE_FORCE_CAP {
            return Err(LbError::TooLarge {
                what: "multicolored independent set search",
                size: space,
                cap: MIS_BRUTE_FORCE_CAP,
            });
        }
        let conflict: Conflicts =
            self.edges.iter().flat_map(|&(i1, a, i2, b)| [((i1, a), (i2, b)), ((i2, b), (i1, a))]).collect();
        let mut pick = Vec::with_capacity(self.parts);
        Ok(self.search(&conflict, &mut pick))
    }

    fn search(&self, conflict: &Conflicts, pick: &mut Vec<usize>) -> bool {
        let part = pick.len() + 1;
        if part > self.parts {
            return true;
        }
        for g in 0..self.size {
            let ok = pick.iter().enumerate().all(|(p, &h)| !conflict.contains(&((p + 1, h), (part, g))));
            if ok {
                pick.push(g);
                if self.search(conflict, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }

    /// Smallest even `k` with `C(k, k/2) / 2 ≥ parts`.
    pub fn family_order(parts: usize) -> usize {
        let mut k = 2;
        while central_binomial_half(k) < parts as u128 {
            k += 2;
        }
        k
    }

    /// Adds edgeless parts until the part count is `C(k, k/2) / 2` for some even `k`.
    /// A vertex of an edgeless part can always be picked, so the answer is unchanged.
    pub fn padded(&self) -> MisInstance {
        let target = central_binomial_half(Self::family_order(self.parts)) as usize;
        MisInstance { parts: target, size: self.size, edges: self.edges.clone() }
    }
}

/// `C(k, k/2) / 2`.
pub fn central_binomial_half(k: usize) -> u128 {
    let h = k / 2;
    let mut c: u128 = 1;
    for x in 0..h {
        c = c * (k - x) as u128 / (x + 1) as u128;
    }
    c / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let m = MisInstance::parse("# demo\nmis 3 2\ne 1 0 2 1\n").unwrap();
        assert_eq!(m.edges, vec![(1, 0, 2, 1)]);
        assert_eq!(MisInstance::parse(&m.to_text()).unwrap(), m);
        assert!(MisInstance::parse("mis 2 2\ne 1 0 1 1\n").is_err());
        assert!(MisInstance::parse("mis 2 2\ne 1 0 2 2\n").is_err());
        assert!(MisInstance::parse("e 1 0 2 1\n").is_err());
    }

    #[test]
    fn family_sizes() {
        assert_eq!(central_binomial_half(2), 1);
        assert_eq!(central_binomial_half(4), 3);
        assert_eq!(central_binomial_half(6), 10);
        assert_eq!(MisInstance::family_order(3), 4);
        assert_eq!(MisInstance::family_order(4), 6);
        assert_eq!(MisInstance::new(2, 2, vec![]).unwrap().padded().parts, 3);
    }

    #[test]
    fn brute_force() {
        // Every pair of picks from parts 1 and 2 conflicts.
        let all = (0..2).flat_map(|a| (0..2).map(move |b| (1, a, 2, b))).collect();
        assert!(!MisInstance::new(2, 2, all).unwrap().has_multicolored_independent_set().unwrap());
        assert!(MisInstance::new(2, 2, vec![(1, 0, 2, 0)]).unwrap().has_multicolored_independent_set().unwrap());
    }
}
