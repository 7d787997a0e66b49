//! Exact conditional max cut for sparse gadget graphs.
//!
//! Vertices of degree at least three (plus every pinned vertex) form a core
//! whose side assignments are enumerated exhaustively. What remains splits
//! into small components (the internal path vertices of gadgets); given a
//! core assignment each component is maximized independently by exhaustive
//! enumeration of its own assignments, memoized on the sides of its core
//! neighbours. The result is the exact maximum over all partitions that
//! respect the pinned sides.

use std::collections::HashMap;

use super::{OracleError, SimpleGraph};

/// Largest number of unpinned core vertices whose assignments get enumerated.
pub const CONDITIONAL_CORE_CAP: usize = 24;
const COMPONENT_CAP: usize = 14;

struct Component {
    /// Edges inside the component, as local indices.
    inner: Vec<(usize, usize)>,
    /// Edges to the core: local index and position in `neighbors`.
    boundary: Vec<(usize, usize)>,
    /// Distinct core positions adjacent to the component.
    neighbors: Vec<usize>,
    size: usize,
    memo: HashMap<u64, usize>,
}

impl Component {
    fn best(&mut self, core_side: &[bool]) -> usize {
        let key = self.neighbors.iter().enumerate().fold(0u64, |k, (b, &c)| k | (core_side[c] as u64) << b);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut best = 0;
        for assign in 0u64..(1 << self.size) {
            let side = |x: usize| assign >> x & 1 == 1;
            let inner = self.inner.iter().filter(|&&(a, b)| side(a) != side(b)).count();
            let bound = self.boundary.iter().filter(|&&(a, nb)| side(a) != (key >> nb & 1 == 1)).count();
            best = best.max(inner + bound);
        }
        self.memo.insert(key, best);
        best
    }
}

/// Maximum number of crossing edges over all 2-partitions of `g` in which each
/// `(vertex, side)` of `fixed` holds.
pub fn conditional_max_cut(g: &SimpleGraph, fixed: &[(usize, bool)]) -> Result<usize, OracleError> {
    let n = g.n();
    let mut pinned: Vec<Option<bool>> = vec![None; n];
    for &(v, s) in fixed {
        assert!(pinned[v].map_or(true, |prev| prev == s), "vertex {v} pinned to both sides");
        pinned[v] = Some(s);
    }
    let mut in_core: Vec<bool> = (0..n).map(|v| pinned[v].is_some() || g.degree(v) >= 3).collect();

    // Grow the core until every leftover component is small.
    let comps = loop {
        let comps = leftover_components(g, &in_core);
        match comps.iter().find(|c| c.len() > COMPONENT_CAP) {
            None => break comps,
            Some(big) => {
                let v = *big.iter().max_by_key(|&&v| (g.degree(v), std::cmp::Reverse(v))).expect("non-empty");
                in_core[v] = true;
            }
        }
    };

    let core: Vec<usize> = (0..n).filter(|&v| in_core[v]).collect();
    let mut core_pos = vec![usize::MAX; n];
    for (p, &v) in core.iter().enumerate() {
        core_pos[v] = p;
    }
    let mut free: Vec<usize> = (0..core.len()).filter(|&p| pinned[core[p]].is_none()).collect();
    // Without any pinned vertex, swapping sides is a symmetry: fix one core vertex.
    let mut core_side = vec![false; core.len()];
    for (p, &v) in core.iter().enumerate() {
        if let Some(s) = pinned[v] {
            core_side[p] = s;
        }
    }
    if fixed.is_empty() && !free.is_empty() {
        free.remove(0);
    }
    if free.len() > CONDITIONAL_CORE_CAP {
        return Err(OracleError::TooLarge {
            what: "conditional max cut core",
            size: free.len(),
            cap: CONDITIONAL_CORE_CAP,
        });
    }

    let mut components: Vec<Component> = comps
        .iter()
        .map(|vs| {
            let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let mut inner = Vec::new();
            let mut boundary_raw = Vec::new();
            for (i, &v) in vs.iter().enumerate() {
                for &w in g.neighbors(v) {
                    let w = w as usize;
                    if in_core[w] {
                        boundary_raw.push((i, core_pos[w]));
                    } else if let Some(&j) = local.get(&w) {
                        if i < j {
                            inner.push((i, j));
                        }
                    }
                }
            }
            let mut neighbors: Vec<usize> = boundary_raw.iter().map(|&(_, c)| c).collect();
            neighbors.sort_unstable();
            neighbors.dedup();
            let boundary = boundary_raw
                .into_iter()
                .map(|(i, c)| (i, neighbors.binary_search(&c).expect("collected above")))
                .collect();
            Component { inner, boundary, neighbors, size: vs.len(), memo: HashMap::new() }
        })
        .collect();

    let core_edges: Vec<(usize, usize)> =
        g.edges().filter(|&(u, v)| in_core[u] && in_core[v]).map(|(u, v)| (core_pos[u], core_pos[v])).collect();

    let mut best = 0;
    for assign in 0u64..(1 << free.len()) {
        for (b, &p) in free.iter().enumerate() {
            core_side[p] = assign >> b & 1 == 1;
        }
        let mut total = core_edges.iter().filter(|&&(a, b)| core_side[a] != core_side[b]).count();
        for c in &mut components {
            total += c.best(&core_side);
        }
        best = best.max(total);
    }
    Ok(best)
}

fn leftover_components(g: &SimpleGraph, in_core: &[bool]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if in_core[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                let w = w as usize;
                if !in_core[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::oracle_max_cut;

    #[test]
    fn matches_plain_oracle_without_constraints() {
        for g in [SimpleGraph::petersen(), SimpleGraph::cycle(7), SimpleGraph::complete(6), SimpleGraph::path(20)] {
            assert_eq!(conditional_max_cut(&g, &[]).unwrap(), oracle_max_cut(&g).unwrap());
        }
    }

    #[test]
    fn pinned_sides_are_respected() {
        let g = SimpleGraph::path(3);
        assert_eq!(conditional_max_cut(&g, &[(0, false), (2, true)]).unwrap(), 1);
        assert_eq!(conditional_max_cut(&g, &[(0, false), (2, false)]).unwrap(), 2);
    }
}
