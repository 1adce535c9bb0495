//! Max-flow / min-cut on undirected graphs with exact integer capacities.
//!
//! Edmonds-Karp with paired residual arcs. Capacities are `BigInt` because
//! callers scale exact rational edge values by a common denominator. The
//! returned cut side is the set of vertices reachable from the source in the
//! final residual graph, which is deterministic given the input edge order.

use num::bigint::BigInt;
use num::{Signed, Zero};
use std::collections::VecDeque;

pub struct FlowOutcome {
    pub value: BigInt,
    /// Source side of a minimum cut.
    pub source_side: Vec<bool>,
}

/// Maximum flow between `source` and `sink`. Each `(u, v, cap)` is an
/// undirected edge usable up to `cap` in either direction.
pub fn max_flow(n: usize, edges: &[(usize, usize, BigInt)], source: usize, sink: usize) -> FlowOutcome {
    assert_ne!(source, sink);
    let mut to: Vec<usize> = Vec::with_capacity(edges.len() * 2);
    let mut cap: Vec<BigInt> = Vec::with_capacity(edges.len() * 2);
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v, ref c) in edges {
        debug_assert!(!c.is_negative());
        incident[u].push(to.len());
        to.push(v);
        cap.push(c.clone());
        incident[v].push(to.len());
        to.push(u);
        cap.push(c.clone());
    }

    let mut value = BigInt::zero();
    loop {
        // BFS for the shortest augmenting path
        let mut via: Vec<Option<usize>> = vec![None; n]; // arc into each vertex
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        'bfs: while let Some(u) = queue.pop_front() {
            for &a in &incident[u] {
                let w = to[a];
                if !seen[w] && cap[a].is_positive() {
                    seen[w] = true;
                    via[w] = Some(a);
                    if w == sink {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !seen[sink] {
            return FlowOutcome { value, source_side: seen };
        }
        // bottleneck along the path
        let mut bottleneck: Option<BigInt> = None;
        let mut v = sink;
        while let Some(a) = via[v] {
            if bottleneck.as_ref().is_none_or(|b| cap[a] < *b) {
                bottleneck = Some(cap[a].clone());
            }
            v = to[a ^ 1];
        }
        let f = bottleneck.unwrap();
        let mut v = sink;
        while let Some(a) = via[v] {
            cap[a] -= &f;
            cap[a ^ 1] += &f;
            v = to[a ^ 1];
        }
        value += f;
    }
}
