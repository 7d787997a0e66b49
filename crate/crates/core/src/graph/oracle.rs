//! Brute-force reference solvers. Each has a hard size cap; the environment
//! variable `MCW_ORACLE_CAP` can lower (never raise) every cap.

use thiserror::Error;

use super::SimpleGraph;

pub const HAMILTONIAN_CAP: usize = 22;
pub const MATCHING_CAP: usize = 22;
pub const EDS_CAP: usize = 18;
pub const MAX_CUT_CAP: usize = 26;
/// Edge cap for [`min_edge_dominating_set_direct`].
pub const DIRECT_EDS_EDGE_CAP: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what}: instance size {size} exceeds the oracle cap {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },
}

/// `cap`, lowered to `MCW_ORACLE_CAP` when that variable holds a smaller number.
pub fn effective_cap(cap: usize) -> usize {
    std::env::var("MCW_ORACLE_CAP").ok().and_then(|s| s.trim().parse::<usize>().ok()).map_or(cap, |env| env.min(cap))
}

fn check(what: &'static str, size: usize, cap: usize) -> Result<(), OracleError> {
    let cap = effective_cap(cap);
    if size > cap {
        Err(OracleError::TooLarge { what, size, cap })
    } else {
        Ok(())
    }
}

/// `reach[mask]` = set of vertices `w` such that some path starting at `start`
/// visits exactly `mask` and ends at `w`.
fn path_ends(adj: &[u64], start: usize) -> Vec<u32> {
    let n = adj.len();
    let mut reach = vec![0u32; 1 << n];
    reach[1 << start] = 1 << start;
    for mask in 0..(1usize << n) {
        let ends = reach[mask] as u64;
        if ends == 0 {
            continue;
        }
        let mut free = !(mask as u64) & ((1u64 << n) - 1);
        while free != 0 {
            let x = free.trailing_zeros() as usize;
            free &= free - 1;
            if adj[x] & ends != 0 {
                reach[mask | 1 << x] |= 1 << x;
            }
        }
    }
    reach
}

/// Whether a Hamiltonian path from `u` to `v` exists.
pub fn oracle_hamiltonian_path(g: &SimpleGraph, u: usize, v: usize) -> Result<bool, OracleError> {
    check("hamiltonian path", g.n(), HAMILTONIAN_CAP)?;
    let n = g.n();
    if u == v {
        return Ok(n == 1);
    }
    let reach = path_ends(&g.adjacency_masks(), u);
    Ok(reach[(1 << n) - 1] & (1 << v) != 0)
}

/// Whether a Hamiltonian cycle exists. Graphs with fewer than three vertices have none.
pub fn oracle_hamiltonian_cycle(g: &SimpleGraph) -> Result<bool, OracleError> {
    check("hamiltonian cycle", g.n(), HAMILTONIAN_CAP)?;
    let n = g.n();
    if n < 3 || (0..n).any(|v| g.degree(v) < 2) {
        return Ok(false);
    }
    // Every Hamiltonian cycle is an edge 0-w plus a Hamiltonian path from 0 to w.
    let adj = g.adjacency_masks();
    let reach = path_ends(&adj, 0);
    Ok(reach[(1 << n) - 1] as u64 & adj[0] != 0)
}

/// `table[mask]` = maximum matching size of the subgraph induced by `mask`.
fn matching_table(adj: &[u64]) -> Vec<u8> {
    let n = adj.len();
    let mut f = vec![0u8; 1 << n];
    for mask in 1..(1usize << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = f[rest];
        let mut nb = adj[v] & rest as u64;
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            best = best.max(1 + f[rest & !(1 << w)]);
        }
        f[mask] = best;
    }
    f
}

/// Maximum matching size, by branching on the edges of the lowest vertex.
pub fn oracle_max_matching(g: &SimpleGraph) -> Result<usize, OracleError> {
    check("max matching", g.n(), MATCHING_CAP)?;
    if g.n() == 0 {
        return Ok(0);
    }
    Ok(*matching_table(&g.adjacency_masks()).last().expect("non-empty table") as usize)
}

/// Minimum edge dominating set size, as the minimum over vertex covers `S` of
/// `|S| - ν(G[S])`.
pub fn oracle_eds(g: &SimpleGraph) -> Result<usize, OracleError> {
    check("edge dominating set", g.n(), EDS_CAP)?;
    let n = g.n();
    if g.m() == 0 {
        return Ok(0);
    }
    let adj = g.adjacency_masks();
    let nu = matching_table(&adj);
    let full = (1u64 << n) - 1;
    let mut best = usize::MAX;
    for s in 0..(1u64 << n) {
        let mut outside = full & !s;
        let mut cover = true;
        while outside != 0 {
            let v = outside.trailing_zeros() as usize;
            outside &= outside - 1;
            if adj[v] & !s != 0 {
                cover = false;
                break;
            }
        }
        if cover {
            best = best.min(s.count_ones() as usize - nu[s as usize] as usize);
        }
    }
    Ok(best)
}

/// Minimum number of edges whose endpoints touch every edge, by enumerating
/// edge subsets in order of size.
pub fn min_edge_dominating_set_direct(g: &SimpleGraph) -> Result<usize, OracleError> {
    check("direct edge dominating set", g.m(), DIRECT_EDS_EDGE_CAP)?;
    assert!(g.n() <= 64, "direct check uses bitmask vertex sets");
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let dominated = |chosen: &[usize]| {
        let covered = chosen.iter().fold(0u64, |m, &e| m | 1 << edges[e].0 | 1 << edges[e].1);
        edges.iter().all(|&(u, v)| covered & (1 << u | 1 << v) != 0)
    };
    for size in 0..=edges.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if dominated(&idx) {
                return Ok(size);
            }
            // Next combination in lexicographic order.
            let mut p = size;
            while p > 0 && idx[p - 1] == edges.len() - size + p - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            for q in p..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    unreachable!("the full edge set dominates every edge")
}

/// Maximum cut, enumerating side assignments in Gray-code order with vertex 0
/// fixed to the first side.
pub fn oracle_max_cut(g: &SimpleGraph) -> Result<usize, OracleError> {
    check("max cut", g.n(), MAX_CUT_CAP)?;
    let n = g.n();
    if n <= 1 {
        return Ok(0);
    }
    let adj = g.adjacency_masks();
    let mut side = 0u64;
    let mut cut: i64 = 0;
    let mut best = 0i64;
    for step in 1u64..(1 << (n - 1)) {
        let x = step.trailing_zeros() as usize + 1;
        let same = if side >> x & 1 == 1 { adj[x] & side } else { adj[x] & !side };
        let crossing = adj[x].count_ones() as i64 - same.count_ones() as i64;
        // Flipping x turns its crossing edges into same-side ones and vice versa.
        cut += same.count_ones() as i64 - crossing;
        side ^= 1 << x;
        best = best.max(cut);
    }
    Ok(best as usize)
}
