//! Spanning tree construction layered along the narrow-cut chain.
//!
//! Within each level the tree is a BFS tree of the support graph restricted
//! to that level; consecutive levels are joined by the smallest available
//! support edge. The result crosses every narrow cut exactly once, which is
//! what keeps the parity-correction join cheap later. With no narrow cuts
//! the tree is just a BFS tree of the input graph from s.

use crate::graph::{EdgeSet, Graph, GraphError, VertexSet};
use crate::narrow_cuts::NarrowCutChain;
use crate::separation::FractionalSolution;
use num::Signed;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("support graph is disconnected, so the fractional point is not feasible")]
    SupportDisconnected,
    #[error("level {level} is disconnected in the support graph: reached {got} of {want} vertices")]
    LevelDisconnected { level: usize, got: usize, want: usize },
    #[error("no support edge between level {level} and level {next}")]
    NoConnector { level: usize, next: usize },
    #[error("assembled edge set is not a spanning tree: {edges} edges, {reached} of {n} vertices reachable")]
    NotSpanning { edges: usize, reached: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Subgraph of positive-value edges, with a map back to host edge indices.
#[derive(Debug, Clone)]
pub struct SupportGraph {
    pub graph: Graph,
    /// Host edge index of each support edge.
    pub edge_in_g: Vec<usize>,
}

pub fn support_graph(g: &Graph, x: &FractionalSolution) -> Result<SupportGraph, TreeError> {
    let mut edges = Vec::new();
    let mut edge_in_g = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if x.value(e).is_positive() {
            edges.push((u, v));
            edge_in_g.push(e);
        }
    }
    let graph = Graph::new(g.n(), edges, g.s(), g.t()).map_err(|err| match err {
        GraphError::Disconnected => TreeError::SupportDisconnected,
        other => TreeError::Graph(other),
    })?;
    Ok(SupportGraph { graph, edge_in_g })
}

/// Spanning tree of the host graph, with its per-level pieces. All edge sets
/// are indexed by host edges.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub edges: EdgeSet,
    /// One BFS tree per level; empty sets for singleton levels. A single
    /// entry holding the whole tree when there are no narrow cuts.
    pub level_trees: Vec<EdgeSet>,
    /// Host edge joining level i to level i+1; empty without narrow cuts.
    pub connectors: Vec<usize>,
}

/// BFS tree edges inside `allowed` starting from its smallest vertex,
/// scanning neighbors in ascending order. Returns host-graph edge indices
/// plus the number of vertices reached.
fn level_tree(
    support: &SupportGraph,
    allowed: &VertexSet,
) -> (Vec<usize>, usize) {
    let start = *allowed.iter().next().expect("levels are nonempty");
    let mut seen = VertexSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &(w, e) in support.graph.adj(u) {
            if allowed.contains(&w) && !seen.contains(&w) {
                seen.insert(w);
                edges.push(support.edge_in_g[e]);
                queue.push_back(w);
            }
        }
    }
    (edges, seen.len())
}

pub fn build_tree(
    g: &Graph,
    support: &SupportGraph,
    chain: &NarrowCutChain,
) -> Result<SpanningTree, TreeError> {
    let mut edges = EdgeSet::empty(g.m());
    let mut level_trees = Vec::new();
    let mut connectors = Vec::new();

    if chain.cuts.is_empty() {
        // no narrow cuts: any spanning tree of the input graph works
        let mut tree = EdgeSet::empty(g.m());
        for e in g.bfs_tree(g.s()).into_iter().flatten() {
            tree.insert(e);
            edges.insert(e);
        }
        level_trees.push(tree);
    } else {
        for (i, level) in chain.levels.iter().enumerate() {
            let (tree_edges, reached) = level_tree(support, level);
            if reached != level.len() {
                return Err(TreeError::LevelDisconnected {
                    level: i,
                    got: reached,
                    want: level.len(),
                });
            }
            let mut tree = EdgeSet::empty(g.m());
            for e in tree_edges {
                tree.insert(e);
                edges.insert(e);
            }
            level_trees.push(tree);
        }
        for i in 0..chain.cuts.len() {
            let (a, b) = (&chain.levels[i], &chain.levels[i + 1]);
            // smallest support edge with one endpoint in each level,
            // compared by normalized endpoints
            let mut best: Option<((usize, usize), usize)> = None;
            for (se, &(u, v)) in support.graph.edges().iter().enumerate() {
                let joins = (a.contains(&u) && b.contains(&v))
                    || (a.contains(&v) && b.contains(&u));
                if !joins {
                    continue;
                }
                let key = (u.min(v), u.max(v));
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, support.edge_in_g[se]));
                }
            }
            match best {
                Some((_, e)) => {
                    connectors.push(e);
                    edges.insert(e);
                }
                None => return Err(TreeError::NoConnector { level: i, next: i + 1 }),
            }
        }
    }

    // a spanning tree exactly: n-1 edges reaching every vertex
    let mut seen = vec![false; g.n()];
    seen[g.s()] = true;
    let mut queue = VecDeque::from([g.s()]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &(w, e) in g.adj(u) {
            if edges.contains(e) && !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    if edges.size() != g.n() - 1 || reached != g.n() {
        return Err(TreeError::NotSpanning { edges: edges.size(), reached, n: g.n() });
    }
    Ok(SpanningTree { edges, level_trees, connectors })
}

/// Vertices whose degree parity in `tree` disagrees with an s-t trail:
/// the terminals must be odd, everyone else even.
pub fn wrong_degree_set(g: &Graph, tree: &EdgeSet, s: usize, t: usize) -> VertexSet {
    let mut wrong = tree.odd_vertices(g);
    for v in [s, t] {
        if !wrong.insert(v) {
            wrong.remove(&v);
        }
    }
    wrong
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::narrow_cuts::{extract_narrow_cuts, gomory_hu_tree};
    use crate::rat::{rat, ratio};
    use crate::separation::solve_relaxation;

    fn frac(m: usize, vals: &[(i64, i64)]) -> FractionalSolution {
        FractionalSolution::new(vals.iter().map(|&(p, q)| ratio(p, q)).collect(), m).unwrap()
    }

    fn chain_for(g: &Graph, x: &FractionalSolution) -> NarrowCutChain {
        let tree = gomory_hu_tree(g, x).unwrap();
        extract_narrow_cuts(g, x, &tree).unwrap()
    }

    #[test]
    fn support_drops_zero_edges() {
        let g = Graph::parse("3 3 0 2\n0 1\n1 2\n0 2\n").unwrap();
        let x = frac(3, &[(1, 1), (1, 1), (0, 1)]);
        let support = support_graph(&g, &x).unwrap();
        assert_eq!(support.graph.m(), 2);
        assert_eq!(support.edge_in_g, vec![0, 1]);
    }

    #[test]
    fn support_rejects_disconnected_point() {
        // zeroing the middle edge of the path cuts the support in two
        let g = Graph::parse("4 3 0 3\n0 1\n1 2\n2 3\n").unwrap();
        let x = frac(3, &[(1, 1), (0, 1), (1, 1)]);
        assert!(matches!(
            support_graph(&g, &x),
            Err(TreeError::SupportDisconnected)
        ));
    }

    #[test]
    fn star_tree_connects_levels_with_smallest_edges() {
        let g = Graph::parse("4 3 0 2\n1 0\n1 2\n1 3\n").unwrap();
        let x = frac(3, &[(1, 1), (1, 1), (2, 1)]);
        let support = support_graph(&g, &x).unwrap();
        let chain = chain_for(&g, &x);
        assert_eq!(chain.k(), 2);
        let tree = build_tree(&g, &support, &chain).unwrap();
        // levels {0}, {1,3}, {2}: level tree is the center-leaf edge (1,3),
        // connectors are (0,1) and (1,2)
        assert_eq!(tree.edges.indices().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(tree.level_trees.len(), 3);
        assert_eq!(tree.level_trees[0].size(), 0);
        assert_eq!(tree.level_trees[1].indices().collect::<Vec<_>>(), vec![2]);
        assert_eq!(tree.level_trees[2].size(), 0);
        assert_eq!(tree.connectors, vec![0, 1]);
    }

    #[test]
    fn tree_crosses_each_narrow_cut_once() {
        let g = Graph::parse("4 3 0 2\n1 0\n1 2\n1 3\n").unwrap();
        let x = frac(3, &[(1, 1), (1, 1), (2, 1)]);
        let support = support_graph(&g, &x).unwrap();
        let chain = chain_for(&g, &x);
        let tree = build_tree(&g, &support, &chain).unwrap();
        for cut in &chain.cuts {
            let crossing = g.cut_edges(cut).unwrap();
            let count = crossing.indices().filter(|&e| tree.edges.contains(e)).count();
            assert_eq!(count, 1);
        }
    }

    #[test]
    fn fallback_without_narrow_cuts_uses_input_graph() {
        // saturated two-edge path: no narrow cuts, tree comes from g
        let g = Graph::parse("3 2 0 2\n0 1\n1 2\n").unwrap();
        let x = frac(2, &[(2, 1), (2, 1)]);
        let support = support_graph(&g, &x).unwrap();
        let chain = chain_for(&g, &x);
        assert_eq!(chain.k(), 0);
        let tree = build_tree(&g, &support, &chain).unwrap();
        assert_eq!(tree.edges.size(), 2);
        assert!(tree.connectors.is_empty());
        assert_eq!(tree.level_trees.len(), 1);
        assert_eq!(tree.level_trees[0].size(), 2);
    }

    #[test]
    fn fallback_tree_can_use_edges_outside_support() {
        // artificial chain with no cuts forces the fallback even though the
        // support misses edge (2,3); the BFS tree on g still spans
        let g = Graph::parse("4 4 0 1\n0 1\n0 2\n0 3\n2 3\n").unwrap();
        let x = frac(4, &[(2, 1), (2, 1), (2, 1), (0, 1)]);
        let support = support_graph(&g, &x).unwrap();
        let chain = NarrowCutChain { cuts: vec![], levels: vec![(0..4).collect()] };
        let tree = build_tree(&g, &support, &chain).unwrap();
        assert_eq!(tree.edges.size(), 3);
        assert_eq!(tree.edges.indices().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn missing_connector_is_reported() {
        let g = Graph::parse("4 3 0 3\n0 1\n1 2\n2 3\n").unwrap();
        let x = frac(3, &[(1, 1), (1, 1), (1, 1)]);
        let support = support_graph(&g, &x).unwrap();
        // fabricate a chain whose middle level pair has no joining edge
        let chain = NarrowCutChain {
            cuts: vec![VertexSet::from([0, 2])],
            levels: vec![VertexSet::from([0, 2]), VertexSet::from([1, 3])],
        };
        // level {0,2} is not connected in the support graph
        assert!(matches!(
            build_tree(&g, &support, &chain),
            Err(TreeError::LevelDisconnected { level: 0, .. })
        ));
    }

    #[test]
    fn disconnected_level_is_reported() {
        let g = Graph::parse("5 4 0 4\n0 1\n1 2\n2 3\n3 4\n").unwrap();
        let x = frac(4, &[(1, 1), (1, 1), (1, 1), (1, 1)]);
        let support = support_graph(&g, &x).unwrap();
        let chain = NarrowCutChain {
            cuts: vec![VertexSet::from([0]), VertexSet::from([0, 1, 3])],
            levels: vec![
                VertexSet::from([0]),
                VertexSet::from([1, 3]),
                VertexSet::from([2, 4]),
            ],
        };
        assert!(matches!(
            build_tree(&g, &support, &chain),
            Err(TreeError::LevelDisconnected { level: 1, .. })
        ));
    }

    #[test]
    fn wrong_degree_flips_terminals() {
        let g = Graph::parse("4 3 0 2\n1 0\n1 2\n1 3\n").unwrap();
        // tree = all three star edges: degrees 1,3,1,1; terminals 0,2 are
        // fine (odd), 1 and 3 are wrong
        let tree = EdgeSet::from_indices(3, [0, 1, 2]);
        assert_eq!(wrong_degree_set(&g, &tree, 0, 2), VertexSet::from([1, 3]));

        // path tree on P4 with terminals 0,3: everyone is already correct
        let p = Graph::parse("4 3 0 3\n0 1\n1 2\n2 3\n").unwrap();
        let tree = EdgeSet::from_indices(3, [0, 1, 2]);
        assert!(wrong_degree_set(&p, &tree, 0, 3).is_empty());

        // same tree, terminals 0,2: t=2 has even-but-should-be-odd issue at
        // degree 2, and 3 has odd-but-should-be-even
        assert_eq!(wrong_degree_set(&p, &tree, 0, 2), VertexSet::from([2, 3]));
    }

    #[test]
    fn wrong_degree_set_is_always_even() {
        let mut seed: u64 = 5;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..30 {
            let n = 4 + (next() % 4) as usize;
            let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|v| (v, v + 1)).collect();
            for u in 0..n {
                for v in u + 2..n {
                    if next() % 3 == 0 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, edges, 0, n - 1).unwrap();
            let mut set = EdgeSet::empty(g.m());
            for e in 0..g.m() {
                if next() % 2 == 0 {
                    set.insert(e);
                }
            }
            assert_eq!(wrong_degree_set(&g, &set, 0, n - 1).len() % 2, 0);
        }
    }

    #[test]
    fn solved_relaxations_build_valid_trees() {
        let mut seed: u64 = 31;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for trial in 0..25 {
            let n = 4 + (next() % 4) as usize;
            let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|v| (v, v + 1)).collect();
            for u in 0..n {
                for v in u + 2..n {
                    if next() % 3 == 0 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, edges, 0, n - 1).unwrap();
            let relax = solve_relaxation(&g).unwrap();
            let x = relax.solution;
            let support = support_graph(&g, &x).unwrap();
            let chain = chain_for(&g, &x);
            let tree = build_tree(&g, &support, &chain).unwrap();
            assert_eq!(tree.edges.size(), n - 1, "trial {trial}");
            // every narrow cut is crossed exactly once
            for cut in &chain.cuts {
                let crossing = g.cut_edges(cut).unwrap();
                let count =
                    crossing.indices().filter(|&e| tree.edges.contains(e)).count();
                assert_eq!(count, 1, "trial {trial}");
            }
            // tree value bound: |J| = n-1 <= sum of x
            assert!(rat(n as i64 - 1) <= relax.value, "trial {trial}");
        }
    }
}
