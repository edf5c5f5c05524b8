//! Exact minimum linear arrangements for small graphs.

use thiserror::Error;

use crate::graph::{Arrangement, Graph};
use crate::par::Execution;

pub const DEFAULT_DP_LIMIT: usize = 20;
pub const DEFAULT_BRUTE_LIMIT: usize = 9;
/// The DP table has `2^n` entries; beyond this it stops being desk-sized.
pub const MAX_DP_NODES: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("graph has {nodes} nodes, limit is {limit}")]
pub struct TooLarge {
    pub nodes: usize,
    pub limit: usize,
}

fn multiplicities(g: &Graph) -> Vec<Vec<(usize, u32)>> {
    let n = g.node_count();
    let mut m = vec![vec![0u32; n]; n];
    for &(u, v) in g.edges() {
        m[u][v] += 1;
        m[v][u] += 1;
    }
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|&(_, k)| k > 0)
                .collect()
        })
        .collect()
}

/// Subset DP: `f(S) = min_{v∈S} f(S∖v) + cut(S)`, where `v` is placed at
/// position `|S|`. Returns the optimal cost and one optimal arrangement.
pub fn exact_minla(g: &Graph, limit: usize) -> Result<(u64, Arrangement), TooLarge> {
    let n = g.node_count();
    let limit = limit.min(MAX_DP_NODES);
    if n > limit {
        return Err(TooLarge { nodes: n, limit });
    }
    let adj = multiplicities(g);
    let degree: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
    let full = (1usize << n) - 1;
    let mut cut = vec![0u32; full + 1];
    let mut best = vec![u32::MAX; full + 1];
    let mut last = vec![0u8; full + 1];
    best[0] = 0;
    for s in 1..=full {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let inside: u32 = adj[v]
            .iter()
            .filter(|&&(w, _)| rest >> w & 1 == 1)
            .map(|&(_, k)| k)
            .sum();
        cut[s] = cut[rest] + degree[v] - 2 * inside;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let cand = best[s & !(1 << v)] + cut[s];
            if cand < best[s] {
                best[s] = cand;
                last[s] = v as u8;
            }
        }
    }
    let mut order = vec![0; n];
    let mut s = full;
    for slot in (0..n).rev() {
        let v = last[s] as usize;
        order[slot] = v;
        s &= !(1 << v);
    }
    let arr = Arrangement::from_order(&order).expect("backtracking yields a permutation");
    Ok((best[full] as u64, arr))
}

fn order_cost(edges: &[(usize, usize)], pos: &[usize]) -> u64 {
    edges.iter().map(|&(u, v)| pos[u].abs_diff(pos[v]) as u64).sum()
}

/// Enumerates every permutation (split by first node across `exec`).
pub fn brute_force_minla(
    g: &Graph,
    limit: usize,
    exec: Execution,
) -> Result<(u64, Arrangement), TooLarge> {
    let n = g.node_count();
    if n > limit {
        return Err(TooLarge { nodes: n, limit });
    }
    let edges = g.edges();
    let per_first = exec.map((0..n).collect(), |first| {
        let mut rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
        let mut pos = vec![0; n];
        let mut best: Option<(u64, Vec<usize>)> = None;
        let mut consider = |rest: &[usize]| {
            pos[first] = 1;
            for (i, &v) in rest.iter().enumerate() {
                pos[v] = i + 2;
            }
            let c = order_cost(edges, &pos);
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                let mut order = vec![first];
                order.extend_from_slice(rest);
                best = Some((c, order));
            }
        };
        // Heap's algorithm, iterative
        let k = rest.len();
        let mut counters = vec![0; k];
        consider(&rest);
        let mut i = 0;
        while i < k {
            if counters[i] < i {
                if i % 2 == 0 {
                    rest.swap(0, i);
                } else {
                    rest.swap(counters[i], i);
                }
                consider(&rest);
                counters[i] += 1;
                i = 0;
            } else {
                counters[i] = 0;
                i += 1;
            }
        }
        best.expect("at least one permutation")
    });
    let (cost, order) = per_first
        .into_iter()
        .min_by_key(|(c, _)| *c)
        .expect("graph is nonempty");
    Ok((cost, Arrangement::from_order(&order).expect("permutation")))
}
