//! Cut tree over the fractional edge values, and extraction of the chain of
//! narrow cuts.
//!
//! A narrow cut is an s-t cut whose fractional value is strictly below 2.
//! For a feasible point of the relaxation these cuts are totally ordered by
//! inclusion on their s-sides, and every one of them shows up as an edge of
//! a Gomory-Hu cut tree on the s-t tree path. The tree is built with the
//! classic contraction scheme: repeatedly split a multi-vertex supernode by
//! a max-flow between its two smallest members, with the rest of the current
//! tree contracted into the flow instance component-wise.
//!
//! Every tree edge's stored weight is re-checked against the actual cut value
//! of its side before the tree is returned, so a construction bug surfaces as
//! an error here rather than as a wrong chain downstream.

use crate::flow::max_flow;
use crate::graph::{Graph, GraphError, VertexSet};
use crate::rat::{rat, Rat};
use crate::separation::FractionalSolution;
use num::bigint::BigInt;
use num::Signed;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NarrowCutError {
    #[error(
        "cut tree edge ({a}, {b}) stores weight {stored} but its side evaluates to {actual}"
    )]
    WeightMismatch { a: usize, b: usize, stored: Rat, actual: Rat },
    #[error("narrow cuts are not nested: {0:?} vs {1:?}")]
    NotNested(VertexSet, VertexSet),
    #[error("cut tree is not a spanning tree: {edges} edges for {n} vertices")]
    NotATree { edges: usize, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One edge of the cut tree: removing it splits the vertices into `side_a`
/// (containing `a`) and its complement, and that cut has value `weight`
/// under the fractional solution the tree was built from.
#[derive(Debug, Clone)]
pub struct GhEdge {
    pub a: usize,
    pub b: usize,
    pub weight: Rat,
    pub side_a: VertexSet,
}

/// Gomory-Hu cut tree: for any pair (u, v), the minimum u-v cut value equals
/// the smallest edge weight on the tree path between them.
#[derive(Debug, Clone)]
pub struct GomoryHuTree {
    n: usize,
    edges: Vec<GhEdge>,
}

impl GomoryHuTree {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[GhEdge] {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a].push((e.b, i));
            adj[e.b].push((e.a, i));
        }
        for list in &mut adj {
            list.sort();
        }
        adj
    }

    /// Tree-path edge indices from `u` to `v`.
    fn path_edges(&self, u: usize, v: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut from: Vec<Option<(usize, usize)>> = vec![None; self.n]; // (vertex, edge)
        let mut seen = vec![false; self.n];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(w) = queue.pop_front() {
            for &(nb, e) in &adj[w] {
                if !seen[nb] {
                    seen[nb] = true;
                    from[nb] = Some((w, e));
                    queue.push_back(nb);
                }
            }
        }
        let mut path = Vec::new();
        let mut w = v;
        while let Some((prev, e)) = from[w] {
            path.push(e);
            w = prev;
        }
        path.reverse();
        path
    }

    /// Minimum u-v cut value read off the tree.
    pub fn min_cut(&self, u: usize, v: usize) -> Rat {
        self.path_edges(u, v)
            .into_iter()
            .map(|e| self.edges[e].weight.clone())
            .min()
            .expect("distinct vertices in a spanning tree have a path")
    }
}

/// Builds the cut tree of `(V, x)` by supernode splitting.
pub fn gomory_hu_tree(g: &Graph, x: &FractionalSolution) -> Result<GomoryHuTree, NarrowCutError> {
    let n = g.n();
    let (nums, denom) = x.scaled();

    // current supernodes and the tree over them
    let mut nodes: Vec<VertexSet> = vec![(0..n).collect()];
    let mut node_of: Vec<usize> = vec![0; n];
    let mut tree: Vec<(usize, usize, BigInt)> = Vec::new();

    while let Some(xi) = nodes.iter().position(|c| c.len() >= 2) {
        // components of the current tree with xi removed; everything in one
        // component is contracted to a single flow vertex
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for &(a, b, _) in &tree {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut comp = vec![usize::MAX; nodes.len()];
        let mut ncomp = 0;
        for start in 0..nodes.len() {
            if start == xi || comp[start] != usize::MAX {
                continue;
            }
            comp[start] = ncomp;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &nb in &adj[u] {
                    if nb != xi && comp[nb] == usize::MAX {
                        comp[nb] = ncomp;
                        queue.push_back(nb);
                    }
                }
            }
            ncomp += 1;
        }

        let members: Vec<usize> = nodes[xi].iter().copied().collect();
        let k = members.len();
        let mut local = vec![usize::MAX; n];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let mut fedges: Vec<(usize, usize, BigInt)> = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !nums[e].is_positive() {
                continue;
            }
            let a = if node_of[u] == xi { local[u] } else { k + comp[node_of[u]] };
            let b = if node_of[v] == xi { local[v] } else { k + comp[node_of[v]] };
            if a != b {
                fedges.push((a, b, nums[e].clone()));
            }
        }
        // split by the min cut between the two smallest members
        let outcome = max_flow(k + ncomp, &fedges, 0, 1);
        let new_id = nodes.len();
        let mut stay = VertexSet::new();
        let mut moved = VertexSet::new();
        for (i, &v) in members.iter().enumerate() {
            if outcome.source_side[i] {
                stay.insert(v);
            } else {
                moved.insert(v);
                node_of[v] = new_id;
            }
        }
        nodes[xi] = stay;
        nodes.push(moved);
        // neighbors of xi on the sink side of the split follow the new node
        for edge in tree.iter_mut() {
            let other = match (edge.0 == xi, edge.1 == xi) {
                (true, _) => edge.1,
                (_, true) => edge.0,
                _ => continue,
            };
            if !outcome.source_side[k + comp[other]] {
                if edge.0 == xi {
                    edge.0 = new_id;
                } else {
                    edge.1 = new_id;
                }
            }
        }
        tree.push((xi, new_id, outcome.value));
    }

    if tree.len() != n - 1 {
        return Err(NarrowCutError::NotATree { edges: tree.len(), n });
    }
    let mut vertex_of = vec![usize::MAX; nodes.len()];
    for (id, members) in nodes.iter().enumerate() {
        vertex_of[id] = *members.iter().next().expect("every supernode ends up a singleton");
    }
    let edges: Vec<(usize, usize, Rat)> = tree
        .into_iter()
        .map(|(a, b, w)| (vertex_of[a], vertex_of[b], Rat::new(w, denom.clone())))
        .collect();

    // sides by removing each edge in turn, then verify stored weights
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b, _)) in edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    let mut gh_edges = Vec::with_capacity(edges.len());
    for (i, (a, b, weight)) in edges.into_iter().enumerate() {
        let mut side = VertexSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for &(nb, e) in &adj[u] {
                if e != i && !side.contains(&nb) {
                    side.insert(nb);
                    queue.push_back(nb);
                }
            }
        }
        let actual = x.cut_value(g, &side)?;
        if actual != weight {
            return Err(NarrowCutError::WeightMismatch { a, b, stored: weight, actual });
        }
        gh_edges.push(GhEdge { a, b, weight, side_a: side });
    }
    Ok(GomoryHuTree { n, edges: gh_edges })
}

/// The narrow cuts of `x`, each given by its s-side, in inclusion order,
/// together with the levels they carve out of the vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrowCutChain {
    /// `cuts[0] < cuts[1] < ...` as sets; each contains s and excludes t.
    pub cuts: Vec<VertexSet>,
    /// `k + 1` difference sets: `cuts[0]`, then `cuts[i] - cuts[i-1]`, then
    /// the complement of the last cut. With no narrow cuts this is just the
    /// whole vertex set.
    pub levels: Vec<VertexSet>,
}

impl NarrowCutChain {
    pub fn k(&self) -> usize {
        self.cuts.len()
    }
}

/// Reads the narrow cuts off the tree path between the terminals: every
/// path edge of weight below 2 contributes its s-side. Verifies the chain
/// property instead of assuming it.
pub fn extract_narrow_cuts(
    g: &Graph,
    x: &FractionalSolution,
    tree: &GomoryHuTree,
) -> Result<NarrowCutChain, NarrowCutError> {
    let (s, t) = (g.s(), g.t());
    let two = rat(2);
    let mut cuts: Vec<VertexSet> = Vec::new();
    for e in tree.path_edges(s, t) {
        let edge = &tree.edges[e];
        if edge.weight >= two {
            continue;
        }
        let side = if edge.side_a.contains(&s) {
            edge.side_a.clone()
        } else {
            (0..g.n()).filter(|v| !edge.side_a.contains(v)).collect()
        };
        debug_assert!(!side.contains(&t), "path edge must separate the terminals");
        // narrowness straight from the definition, not just the tree weight
        let value = x.cut_value(g, &side)?;
        if value != edge.weight {
            return Err(NarrowCutError::WeightMismatch {
                a: edge.a,
                b: edge.b,
                stored: edge.weight.clone(),
                actual: value,
            });
        }
        cuts.push(side);
    }
    cuts.sort_by_key(|c| c.len());
    for w in cuts.windows(2) {
        if !(w[0].len() < w[1].len() && w[0].is_subset(&w[1])) {
            return Err(NarrowCutError::NotNested(w[0].clone(), w[1].clone()));
        }
    }

    let mut levels = Vec::with_capacity(cuts.len() + 1);
    let mut prev = VertexSet::new();
    for cut in &cuts {
        levels.push(cut.difference(&prev).copied().collect());
        prev = cut.clone();
    }
    levels.push((0..g.n()).filter(|v| !prev.contains(v)).collect());
    Ok(NarrowCutChain { cuts, levels })
}
