//! Minimum joins for parity correction.
//!
//! A T-join is an edge set whose odd-degree vertices are exactly T. With
//! unit edge weights the minimum T-join is the symmetric difference of
//! shortest paths between matched pairs of T, under a minimum-cost perfect
//! matching of T in the shortest-path metric. The matching is computed
//! exactly by dynamic programming over subsets, which is plenty at the
//! instance sizes this crate targets.

use crate::graph::{EdgeSet, Graph, VertexSet};
use thiserror::Error;

/// Largest target set the subset DP will take (2^p states).
pub const MATCHING_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum TJoinError {
    #[error("{count} targets have no perfect pairing; the target set must be even")]
    OddTargets { count: usize },
    #[error("{count} targets exceed the matching limit of {limit}")]
    TooManyTargets { count: usize, limit: usize },
    #[error("target vertex {v} is out of range for {n} vertices")]
    TargetOutOfRange { v: usize, n: usize },
    #[error("assembled join has the wrong odd-degree set")]
    ParityMismatch,
}

/// Exact minimum-weight perfect matching on `p` points with symmetric cost
/// matrix `d`, by DP over subsets. Returns index pairs `(i, j)` with `i < j`.
/// Ties break toward the smallest partner of the lowest unmatched point.
///
/// Panics if `p` is odd, `p > MATCHING_LIMIT`, or `d` is not `p` by `p`.
pub fn min_weight_matching(d: &[Vec<u64>]) -> Vec<(usize, usize)> {
    let p = d.len();
    assert!(p % 2 == 0, "matching needs an even point count");
    assert!(p <= MATCHING_LIMIT, "matching limited to {MATCHING_LIMIT} points");
    assert!(d.iter().all(|row| row.len() == p), "cost matrix must be square");
    if p == 0 {
        return Vec::new();
    }
    let full = 1usize << p;
    // best[mask] = cheapest pairing of the points in mask (even popcount)
    let mut best = vec![u64::MAX; full];
    best[0] = 0;
    for mask in 1..full {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut low = u64::MAX;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = best[rest & !(1 << j)];
            if sub != u64::MAX {
                low = low.min(sub + d[i][j]);
            }
        }
        best[mask] = low;
    }
    let mut pairs = Vec::with_capacity(p / 2);
    let mut mask = full - 1;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut bits = rest;
        let mut chosen = None;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = best[rest & !(1 << j)];
            if sub != u64::MAX && sub + d[i][j] == best[mask] {
                chosen = Some(j);
                break;
            }
        }
        let j = chosen.expect("a perfect pairing exists on a complete cost matrix");
        pairs.push((i, j));
        mask = rest & !(1 << j);
    }
    pairs
}

/// Minimum-size T-join of `g`: the smallest edge set whose odd-degree
/// vertices are exactly `targets`. Empty targets give the empty set.
pub fn min_tjoin(g: &Graph, targets: &VertexSet) -> Result<EdgeSet, TJoinError> {
    for &v in targets {
        if v >= g.n() {
            return Err(TJoinError::TargetOutOfRange { v, n: g.n() });
        }
    }
    if targets.len() % 2 != 0 {
        return Err(TJoinError::OddTargets { count: targets.len() });
    }
    if targets.len() > MATCHING_LIMIT {
        return Err(TJoinError::TooManyTargets {
            count: targets.len(),
            limit: MATCHING_LIMIT,
        });
    }
    let mut join = EdgeSet::empty(g.m());
    if targets.is_empty() {
        return Ok(join);
    }
    let points: Vec<usize> = targets.iter().copied().collect();
    let dist: Vec<Vec<u64>> = points
        .iter()
        .map(|&a| {
            let row = g.bfs_distances(a);
            points.iter().map(|&b| row[b]).collect()
        })
        .collect();
    for (i, j) in min_weight_matching(&dist) {
        // toggle the shortest path between the pair; overlaps cancel, which
        // never increases the size
        let (a, b) = (points[i], points[j]);
        let parents = g.bfs_tree(a);
        let mut v = b;
        while v != a {
            let e = parents[v].expect("graph is connected");
            join.toggle(e);
            let (x, y) = g.edges()[e];
            v = x + y - v;
        }
    }
    if join.odd_vertices(g) != *targets {
        return Err(TJoinError::ParityMismatch);
    }
    Ok(join)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_pairs_small_costs() {
        // four points on a line: adjacent pairing wins
        let d = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 1, 2],
            vec![2, 1, 0, 1],
            vec![3, 2, 1, 0],
        ];
        assert_eq!(min_weight_matching(&d), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn matching_respects_ties_deterministically() {
        // all costs equal: lowest point takes its smallest partner
        let d = vec![vec![1; 4]; 4];
        assert_eq!(min_weight_matching(&d), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn matching_crosses_when_cheaper() {
        let d = vec![
            vec![0, 9, 1, 9],
            vec![9, 0, 9, 1],
            vec![1, 9, 0, 9],
            vec![9, 1, 9, 0],
        ];
        assert_eq!(min_weight_matching(&d), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn matching_matches_brute_enumeration() {
        // (p-1)!! pairings, enumerated recursively
        fn brute(d: &[Vec<u64>], left: &mut Vec<usize>) -> u64 {
            if left.is_empty() {
                return 0;
            }
            let i = left.remove(0);
            let mut best = u64::MAX;
            for pos in 0..left.len() {
                let j = left.remove(pos);
                best = best.min(d[i][j] + brute(d, left));
                left.insert(pos, j);
            }
            left.insert(0, i);
            best
        }
        let mut seed: u64 = 11;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..40 {
            let p = 2 * (1 + (next() % 4) as usize);
            let mut d = vec![vec![0u64; p]; p];
            for i in 0..p {
                for j in i + 1..p {
                    let c = next() % 20;
                    d[i][j] = c;
                    d[j][i] = c;
                }
            }
            let pairs = min_weight_matching(&d);
            let got: u64 = pairs.iter().map(|&(i, j)| d[i][j]).sum();
            let want = brute(&d, &mut (0..p).collect());
            assert_eq!(got, want);
            // the pairing is a partition of the points
            let mut used = vec![false; p];
            for (i, j) in pairs {
                assert!(i < j && !used[i] && !used[j]);
                used[i] = true;
                used[j] = true;
            }
            assert!(used.iter().all(|&u| u));
        }
    }

    #[test]
    fn empty_targets_give_empty_join() {
        let g = Graph::parse("3 2 0 2\n0 1\n1 2\n").unwrap();
        let join = min_tjoin(&g, &VertexSet::new()).unwrap();
        assert_eq!(join.size(), 0);
    }

    #[test]
    fn odd_targets_are_rejected() {
        let g = Graph::parse("3 2 0 2\n0 1\n1 2\n").unwrap();
        assert!(matches!(
            min_tjoin(&g, &VertexSet::from([0, 1, 2])),
            Err(TJoinError::OddTargets { count: 3 })
        ));
        assert!(matches!(
            min_tjoin(&g, &VertexSet::from([5])),
            Err(TJoinError::TargetOutOfRange { v: 5, n: 3 })
        ));
    }

    #[test]
    fn join_on_star_uses_leaf_edge() {
        let g = Graph::parse("4 3 0 2\n1 0\n1 2\n1 3\n").unwrap();
        let join = min_tjoin(&g, &VertexSet::from([1, 3])).unwrap();
        assert_eq!(join.indices().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn join_across_path_takes_whole_path() {
        let g = Graph::parse("4 3 0 3\n0 1\n1 2\n2 3\n").unwrap();
        let join = min_tjoin(&g, &VertexSet::from([0, 3])).unwrap();
        assert_eq!(join.size(), 3);
        let inner = min_tjoin(&g, &VertexSet::from([1, 2])).unwrap();
        assert_eq!(inner.indices().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn join_pairs_up_four_targets() {
        let g = Graph::parse("4 3 0 3\n0 1\n1 2\n2 3\n").unwrap();
        let join = min_tjoin(&g, &VertexSet::from([0, 1, 2, 3])).unwrap();
        assert_eq!(join.indices().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn join_matches_exhaustive_minimum() {
        let mut seed: u64 = 17;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for trial in 0..30 {
            let n = 4 + (next() % 3) as usize;
            let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|v| (v, v + 1)).collect();
            for u in 0..n {
                for v in u + 2..n {
                    if edges.len() < 12 && next() % 3 == 0 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, edges, 0, n - 1).unwrap();
            let mut targets = VertexSet::new();
            for v in 0..n {
                if next() % 2 == 0 {
                    targets.insert(v);
                }
            }
            if targets.len() % 2 != 0 {
                let v = *targets.iter().next().unwrap();
                targets.remove(&v);
            }
            let join = min_tjoin(&g, &targets).unwrap();
            assert_eq!(join.odd_vertices(&g), targets, "trial {trial}");
            // exhaustive scan over all edge subsets
            let mut best = usize::MAX;
            for bits in 0..1u32 << g.m() {
                let set = EdgeSet::from_indices(
                    g.m(),
                    (0..g.m()).filter(|&e| bits >> e & 1 == 1),
                );
                if set.odd_vertices(&g) == targets {
                    best = best.min(set.size());
                }
            }
            assert_eq!(join.size(), best, "trial {trial}");
        }
    }
}
