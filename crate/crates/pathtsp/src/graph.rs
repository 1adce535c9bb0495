//! Graph primitives: simple undirected graphs with two terminals, edge
//! multisets, cuts and partitions, BFS metric completion, Eulerian trails and
//! shortcutting a trail to a spanning path.
//!
//! Edges carry stable indices (their position in the input edge list) and all
//! traversals visit neighbors in ascending vertex order, so every routine here
//! is deterministic for a fixed input.

use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed header: expected `n m s t`, got `{0}`")]
    BadHeader(String),
    #[error("malformed edge line `{0}`: expected `u v`")]
    BadEdgeLine(String),
    #[error("edge count mismatch: header declares {expected}, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("vertex {0} out of range for n = {1}")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("terminals coincide (s = t = {0})")]
    EqualTerminals(usize),
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("cut side must be a nonempty proper subset of the vertices")]
    ImproperCut,
    #[error("blocks do not partition the vertex set")]
    InvalidPartition,
    #[error("edge index {0} out of range for m = {1}")]
    EdgeOutOfRange(usize, usize),
    #[error("edge multiplicity above 2 is not representable")]
    MultiplicityOverflow,
    #[error("multigraph degrees have the wrong parity for an s-t trail")]
    BadParity,
    #[error("multigraph does not connect all vertices")]
    MultigraphDisconnected,
    #[error("trail does not start at s and end at t")]
    BadTrailEnds,
    #[error("trail does not visit every vertex")]
    TrailNotSpanning,
}

/// Simple connected undirected graph with distinguished distinct terminals
/// `s` and `t`. Vertices are `0..n`; edges keep their input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    s: usize,
    t: usize,
    edges: Vec<(usize, usize)>,
    /// Per vertex: (neighbor, edge index), sorted by neighbor.
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        s: usize,
        t: usize,
    ) -> Result<Graph, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewVertices(n));
        }
        for &v in &[s, t] {
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
        }
        if s == t {
            return Err(GraphError::EqualTerminals(s));
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        for list in &mut adj {
            list.sort();
        }
        let g = Graph { n, s, t, edges, adj };
        if !g.reachable_from(0).iter().all(|&r| r) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Parse the text format: header `n m s t`, then `m` lines `u v`.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| GraphError::BadHeader(String::new()))?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|f| f.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| GraphError::BadHeader(header.to_string()))?;
        let [n, m, s, t] = fields[..] else {
            return Err(GraphError::BadHeader(header.to_string()));
        };
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(|f| f.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| GraphError::BadEdgeLine(line.to_string()))?;
            let [u, v] = fields[..] else {
                return Err(GraphError::BadEdgeLine(line.to_string()));
            };
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::EdgeCountMismatch { expected: m, found: edges.len() });
        }
        Graph::new(n, edges, s, t)
    }

    /// Inverse of [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.n, self.edges.len(), self.s, self.t);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Neighbors of `v` as (neighbor, edge index), ascending by neighbor.
    pub fn adj(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Edges with exactly one endpoint in `side`.
    pub fn cut_edges(&self, side: &VertexSet) -> Result<EdgeSet, GraphError> {
        if side.is_empty() || side.len() >= self.n {
            return Err(GraphError::ImproperCut);
        }
        if let Some(&v) = side.iter().next_back() {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange(v, self.n));
            }
        }
        let mut cut = EdgeSet::empty(self.m());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if side.contains(&u) != side.contains(&v) {
                cut.insert(e);
            }
        }
        Ok(cut)
    }

    /// Edges whose endpoints lie in different blocks of the partition.
    pub fn partition_cut(&self, partition: &Partition) -> EdgeSet {
        let labels = partition.labels();
        let mut cut = EdgeSet::empty(self.m());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if labels[u] != labels[v] {
                cut.insert(e);
            }
        }
        cut
    }

    /// Hop distances from `src` to every vertex.
    pub fn bfs_distances(&self, src: usize) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adj[u] {
                if dist[w] == u64::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS tree from `src`: for each vertex other than `src`, the edge to its
    /// parent. Neighbors are scanned in ascending order, so the tree is the
    /// lexicographically first BFS tree.
    pub fn bfs_tree(&self, src: usize) -> Vec<Option<usize>> {
        let mut parent_edge = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent_edge[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        parent_edge
    }

    /// All-pairs hop distances (the metric completion of the graph).
    pub fn metric_completion(&self) -> CostMatrix {
        let mut d = Vec::with_capacity(self.n * self.n);
        for v in 0..self.n {
            d.extend(self.bfs_distances(v));
        }
        CostMatrix { n: self.n, d }
    }
}

/// Set of edges of a host graph, with multiplicities 0, 1 or 2. Multiplicity 2
/// appears only when a tree and a parity-correction set share an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    mult: Vec<u8>,
}

impl EdgeSet {
    pub fn empty(m: usize) -> EdgeSet {
        EdgeSet { mult: vec![0; m] }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(m: usize, indices: I) -> EdgeSet {
        let mut set = EdgeSet::empty(m);
        for e in indices {
            set.insert(e);
        }
        set
    }

    /// Capacity in edge indices of the host graph.
    pub fn host_size(&self) -> usize {
        self.mult.len()
    }

    /// Plain set insert: multiplicity becomes 1.
    pub fn insert(&mut self, e: usize) {
        self.mult[e] = 1;
    }

    /// Toggle membership (symmetric difference with a single edge).
    pub fn toggle(&mut self, e: usize) {
        self.mult[e] ^= 1;
    }

    pub fn contains(&self, e: usize) -> bool {
        self.mult[e] > 0
    }

    pub fn multiplicity(&self, e: usize) -> u8 {
        self.mult[e]
    }

    /// Total edge count, multiplicities included.
    pub fn size(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    /// Distinct edge indices present, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(e, _)| e)
    }

    /// Multiset union; fails if any multiplicity would exceed 2.
    pub fn disjoint_union(&self, other: &EdgeSet) -> Result<EdgeSet, GraphError> {
        assert_eq!(self.mult.len(), other.mult.len());
        let mut mult = Vec::with_capacity(self.mult.len());
        for (a, b) in self.mult.iter().zip(&other.mult) {
            let sum = a + b;
            if sum > 2 {
                return Err(GraphError::MultiplicityOverflow);
            }
            mult.push(sum);
        }
        Ok(EdgeSet { mult })
    }

    /// Vertices with odd degree in the multigraph this set induces on `g`.
    pub fn odd_vertices(&self, g: &Graph) -> VertexSet {
        let mut deg = vec![0u32; g.n()];
        for (e, &m) in self.mult.iter().enumerate() {
            let (u, v) = g.edge(e);
            deg[u] += m as u32;
            deg[v] += m as u32;
        }
        (0..g.n()).filter(|&v| deg[v] % 2 == 1).collect()
    }
}

/// Partition of `0..n` into nonempty blocks. Blocks are stored sorted by
/// their smallest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<VertexSet>,
}

impl Partition {
    pub fn new(blocks: Vec<VertexSet>, n: usize) -> Result<Partition, GraphError> {
        let mut seen = vec![false; n];
        let mut count = 0;
        for block in &blocks {
            if block.is_empty() {
                return Err(GraphError::InvalidPartition);
            }
            for &v in block {
                if v >= n || seen[v] {
                    return Err(GraphError::InvalidPartition);
                }
                seen[v] = true;
                count += 1;
            }
        }
        if count != n {
            return Err(GraphError::InvalidPartition);
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| *b.iter().next().unwrap());
        Ok(Partition { n, blocks })
    }

    /// Partition from a block label per vertex.
    pub fn from_labels(labels: &[usize]) -> Partition {
        let mut groups: std::collections::BTreeMap<usize, VertexSet> = Default::default();
        for (v, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().insert(v);
        }
        Partition::new(groups.into_values().collect(), labels.len()).unwrap()
    }

    pub fn singletons(n: usize) -> Partition {
        Partition::new((0..n).map(|v| VertexSet::from([v])).collect(), n).unwrap()
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index per vertex.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (i, block) in self.blocks.iter().enumerate() {
            for &v in block {
                labels[v] = i;
            }
        }
        labels
    }
}

/// Non-negative integer distances between all vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    d: Vec<u64>,
}

impl CostMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.d[u * self.n + v]
    }

    /// Total length of a vertex sequence.
    pub fn walk_cost(&self, walk: &[usize]) -> u64 {
        walk.windows(2).map(|w| self.get(w[0], w[1])).sum()
    }
}

/// Walk through a multigraph: `vertices[i]` and `vertices[i+1]` are joined by
/// edge `edges[i]` of the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Eulerian s-t trail of the multigraph `(V, multi)` on host graph `g`,
/// computed with a stack-based edge scan. Requires every vertex covered and
/// odd degrees exactly at `s` and `t`. The result is deterministic: the scan
/// always advances along the lowest-numbered available neighbor.
pub fn eulerian_trail(
    g: &Graph,
    multi: &EdgeSet,
    s: usize,
    t: usize,
) -> Result<Trail, GraphError> {
    let odd = multi.odd_vertices(g);
    if odd != VertexSet::from([s, t]) {
        return Err(GraphError::BadParity);
    }
    // connectivity over all n vertices through edges of the multiset
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(w, e) in g.adj(u) {
            if multi.contains(e) && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    if !seen.iter().all(|&r| r) {
        return Err(GraphError::MultigraphDisconnected);
    }

    // Per vertex, the incident edge instances in ascending neighbor order.
    let mut incidence: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n()]; // (edge, instance)
    for v in 0..g.n() {
        for &(_, e) in g.adj(v) {
            for inst in 0..multi.multiplicity(e) as usize {
                incidence[v].push((e, inst));
            }
        }
    }
    let mut used = vec![[false; 2]; g.m()];
    let mut cursor = vec![0usize; g.n()];
    let mut stack = vec![s];
    let mut order = Vec::with_capacity(multi.size() + 1);
    while let Some(&v) = stack.last() {
        let mut advanced = false;
        while cursor[v] < incidence[v].len() {
            let (e, inst) = incidence[v][cursor[v]];
            if used[e][inst] {
                cursor[v] += 1;
                continue;
            }
            used[e][inst] = true;
            let (a, b) = g.edge(e);
            stack.push(if a == v { b } else { a });
            advanced = true;
            break;
        }
        if !advanced {
            order.push(stack.pop().unwrap());
        }
    }
    order.reverse();
    debug_assert_eq!(order.len(), multi.size() + 1);
    debug_assert_eq!(order[0], s);
    debug_assert_eq!(*order.last().unwrap(), t);

    // Recover the edge sequence from consecutive vertices: each pair consumes
    // one remaining copy of its unique host edge.
    let mut remaining: Vec<u8> = (0..g.m()).map(|e| multi.multiplicity(e)).collect();
    let mut edges = Vec::with_capacity(order.len() - 1);
    for w in order.windows(2) {
        let e = g
            .adj(w[0])
            .iter()
            .find(|&&(nbr, e)| nbr == w[1] && remaining[e] > 0)
            .map(|&(_, e)| e)
            .expect("trail step must correspond to an unused edge");
        remaining[e] -= 1;
        edges.push(e);
    }
    Ok(Trail { vertices: order, edges })
}

/// Shortcut a spanning s-t trail to a spanning path: keep the first occurrence
/// of each vertex, except that `t` keeps its final occurrence so the path
/// still ends at `t`. Returns the path and its length under `costs`.
pub fn shortcut(trail: &Trail, costs: &CostMatrix) -> Result<(Vec<usize>, u64), GraphError> {
    let visited: VertexSet = trail.vertices.iter().copied().collect();
    if visited.len() != costs.n() {
        return Err(GraphError::TrailNotSpanning);
    }
    let t = match (trail.vertices.first(), trail.vertices.last()) {
        (Some(&s), Some(&t)) if s != t => t,
        _ => return Err(GraphError::BadTrailEnds),
    };
    let mut seen = BTreeSet::new();
    let mut path = Vec::with_capacity(costs.n());
    for &v in &trail.vertices {
        if v != t && seen.insert(v) {
            path.push(v);
        }
    }
    path.push(t);
    let cost = costs.walk_cost(&path);
    Ok((path, cost))
}
