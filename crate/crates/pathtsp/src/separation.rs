//! Cutting-plane solver for the path relaxation, with exact separation
//! oracles for its two constraint families.
//!
//! The relaxation over a connected graph with terminals s and t:
//!
//! ```text
//! minimize   sum_e x_e
//! subject to x(crossing edges of W) >= |W| - 1   for every partition W of V
//!            x(cut of S)            >= 2         for every S with |S n {s,t}| even
//!            0 <= x_e <= 2
//! ```
//!
//! Partition constraints are separated by a pruned walk over restricted
//! growth strings (exact, so only viable for small n); the cut constraints
//! are separated by max-flow against the terminals contracted into one node.
//! Each round adds at most one most-violated row per family and re-solves
//! from scratch, so the solve is deterministic end to end.

use crate::graph::{Graph, GraphError, Partition, VertexSet};
use crate::lp::{self, LinearProgram, LpError, LpStatus};
use crate::rat::{rat, Rat};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

/// Partition separation enumerates all vertex partitions, so the solver
/// refuses instances beyond this vertex count.
pub const PARTITION_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum SeparationError {
    #[error(
        "exact partition separation enumerates all vertex partitions and is \
         limited to n <= {limit}; this instance has n = {n}"
    )]
    PartitionLimitExceeded { n: usize, limit: usize },
    #[error("edge value outside [0, 2] at index {0}")]
    ValueOutOfRange(usize),
    #[error("value vector has {found} entries for {expected} edges")]
    ValueWidthMismatch { found: usize, expected: usize },
    #[error("relaxation LP reported {0:?}, which should be impossible here")]
    UnexpectedLpStatus(LpStatus),
    #[error("cutting-plane loop exceeded {0} rounds without converging")]
    RoundLimit(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Edge values of a point in the box `[0, 2]^E`, indexed like the host
/// graph's edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalSolution {
    values: Vec<Rat>,
}

impl FractionalSolution {
    pub fn new(values: Vec<Rat>, m: usize) -> Result<FractionalSolution, SeparationError> {
        if values.len() != m {
            return Err(SeparationError::ValueWidthMismatch { found: values.len(), expected: m });
        }
        let two = rat(2);
        for (e, v) in values.iter().enumerate() {
            if v.is_negative() || *v > two {
                return Err(SeparationError::ValueOutOfRange(e));
            }
        }
        Ok(FractionalSolution { values })
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, e: usize) -> &Rat {
        &self.values[e]
    }

    pub fn total(&self) -> Rat {
        self.values.iter().fold(Rat::zero(), |acc, v| acc + v)
    }

    /// Value of the cut around `side`.
    pub fn cut_value(&self, g: &Graph, side: &VertexSet) -> Result<Rat, GraphError> {
        let cut = g.cut_edges(side)?;
        Ok(cut.indices().fold(Rat::zero(), |acc, e| acc + &self.values[e]))
    }

    /// Numerators over the least common denominator.
    pub fn scaled(&self) -> (Vec<BigInt>, BigInt) {
        let denom = self
            .values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums = self
            .values
            .iter()
            .map(|v| v.numer() * (&denom / v.denom()))
            .collect();
        (nums, denom)
    }
}

/// A constraint of the relaxation violated by some point, together with the
/// point's value on it (the corresponding right-hand sides are 2 and
/// `blocks - 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolatedConstraint {
    EvenCut { side: VertexSet, value: Rat },
    Partition { partition: Partition, value: Rat },
}

/// Scaled edge weights for exact integer comparisons. The i128 variant is a
/// fast path; the arithmetic falls back to big integers when products could
/// leave the safe range.
enum Scaled {
    Small(Vec<i128>, i128),
    Big(Vec<BigInt>, BigInt),
}

fn scale_values(x: &FractionalSolution, m_plus_blocks: usize) -> Scaled {
    let (nums, denom) = x.scaled();
    // every comparison is a sum of at most m numerators against
    // (blocks - 1) * denom; keep a wide margin before falling back
    let limit = i128::MAX / (2 * m_plus_blocks as i128 + 4);
    let small: Option<Vec<i128>> = nums
        .iter()
        .map(|v| i128::try_from(v).ok().filter(|&s| s <= limit))
        .collect();
    match (small, i128::try_from(&denom)) {
        (Some(nums), Ok(d)) if d <= limit => Scaled::Small(nums, d),
        _ => Scaled::Big(nums, denom),
    }
}

/// Integer arithmetic needed by the partition walk.
trait Weight: Clone + Ord {
    fn zero() -> Self;
    fn add_in(&mut self, o: &Self);
    fn sub(&self, o: &Self) -> Self;
    fn times(&self, k: usize) -> Self;
}

impl Weight for i128 {
    fn zero() -> Self {
        0
    }
    fn add_in(&mut self, o: &Self) {
        *self += o;
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, k: usize) -> Self {
        self * k as i128
    }
}

impl Weight for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn add_in(&mut self, o: &Self) {
        *self += o;
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, k: usize) -> Self {
        self * k
    }
}

/// Most violated partition constraint under `x`, if any. Partitions are
/// enumerated as restricted growth strings over the vertices in order; the
/// first partition attaining the maximum violation wins, which pins the
/// result independent of pruning.
pub fn separate_partitions(
    g: &Graph,
    x: &FractionalSolution,
) -> Result<Option<ViolatedConstraint>, SeparationError> {
    let n = g.n();
    if n > PARTITION_LIMIT {
        return Err(SeparationError::PartitionLimitExceeded { n, limit: PARTITION_LIMIT });
    }
    let best = match scale_values(x, g.m() + n) {
        Scaled::Small(nums, denom) => most_violated_partition(g, &nums, &denom),
        Scaled::Big(nums, denom) => most_violated_partition(g, &nums, &denom),
    };
    Ok(best.map(|labels| {
        let partition = Partition::from_labels(&labels);
        let cut = g.partition_cut(&partition);
        let value = cut.indices().fold(Rat::zero(), |acc, e| acc + x.value(e));
        ViolatedConstraint::Partition { partition, value }
    }))
}

fn most_violated_partition<W: Weight>(g: &Graph, nums: &[W], denom: &W) -> Option<Vec<usize>> {
    let n = g.n();
    // dense pair weights for O(1) lookups during the walk
    let mut w = vec![vec![W::zero(); n]; n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        w[u][v].add_in(&nums[e]);
        w[v][u].add_in(&nums[e]);
    }
    struct Walk<'a, W> {
        n: usize,
        w: &'a [Vec<W>],
        denom: &'a W,
        labels: Vec<usize>,
        best: Option<(W, Vec<usize>)>,
    }
    impl<W: Weight> Walk<'_, W> {
        fn go(&mut self, v: usize, blocks: usize, crossing: W) {
            if v == self.n {
                if blocks < 2 {
                    return;
                }
                let target = self.denom.times(blocks - 1);
                if crossing < target {
                    let violation = target.sub(&crossing);
                    if self.best.as_ref().is_none_or(|(b, _)| violation > *b) {
                        self.best = Some((violation, self.labels.clone()));
                    }
                }
                return;
            }
            // upper bound on any completion's violation: every remaining
            // vertex opens a new block and adds no crossing weight
            let cap = self.denom.times(blocks + (self.n - v) - 1);
            if crossing >= cap {
                return;
            }
            let bound = cap.sub(&crossing);
            if self.best.as_ref().is_some_and(|(b, _)| bound <= *b) {
                return;
            }
            for b in 0..=blocks {
                let mut next = crossing.clone();
                for u in 0..v {
                    if self.labels[u] != b {
                        next.add_in(&self.w[u][v]);
                    }
                }
                self.labels[v] = b;
                self.go(v + 1, blocks.max(b + 1), next);
            }
        }
    }
    let mut walk = Walk { n, w: &w, denom, labels: vec![0; n], best: None };
    walk.go(1, 1, W::zero());
    walk.best.map(|(_, labels)| labels)
}

/// Most violated even-terminal cut constraint under `x`, if any: a cut
/// containing both terminals or neither with value below 2. Found by merging
/// the terminals into one node and running max-flow from each remaining
/// vertex; ties prefer the lexicographically smallest cut side.
pub fn separate_even_cuts(g: &Graph, x: &FractionalSolution) -> Option<ViolatedConstraint> {
    let n = g.n();
    if n <= 2 {
        return None;
    }
    let (nums, denom) = x.scaled();
    // contracted ids: non-terminals keep order, merged terminal node last
    let mut id = vec![usize::MAX; n];
    let mut others = Vec::with_capacity(n - 2);
    for v in 0..n {
        if v != g.s() && v != g.t() {
            id[v] = others.len();
            others.push(v);
        }
    }
    let z = others.len();
    let mut edges: Vec<(usize, usize, BigInt)> = Vec::with_capacity(g.m());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let a = if id[u] == usize::MAX { z } else { id[u] };
        let b = if id[v] == usize::MAX { z } else { id[v] };
        if a != b && nums[e].is_positive() {
            edges.push((a.min(b), a.max(b), nums[e].clone()));
        }
    }
    let two = &denom * 2;
    let mut best: Option<(BigInt, VertexSet)> = None;
    for i in 0..others.len() {
        let outcome = crate::flow::max_flow(z + 1, &edges, i, z);
        if outcome.value >= two {
            continue;
        }
        let side: VertexSet = others
            .iter()
            .enumerate()
            .filter(|&(j, _)| outcome.source_side[j])
            .map(|(_, &u)| u)
            .collect();
        let replace = match &best {
            None => true,
            Some((value, s)) => {
                outcome.value < *value || (outcome.value == *value && side < *s)
            }
        };
        if replace {
            best = Some((outcome.value, side));
        }
    }
    best.map(|(value, side)| ViolatedConstraint::EvenCut {
        side,
        value: Rat::new(value, denom.clone()),
    })
}

/// Result of the cutting-plane solve.
#[derive(Debug, Clone)]
pub struct Relaxation {
    pub solution: FractionalSolution,
    pub value: Rat,
    pub rounds: usize,
    pub rows_added: usize,
}

fn constraint_row(g: &Graph, c: &ViolatedConstraint) -> (Vec<Rat>, Rat) {
    let mut coeffs = vec![Rat::zero(); g.m()];
    match c {
        ViolatedConstraint::EvenCut { side, .. } => {
            let cut = g.cut_edges(side).expect("separated cut side is proper");
            for e in cut.indices() {
                coeffs[e] = Rat::one();
            }
            (coeffs, rat(2))
        }
        ViolatedConstraint::Partition { partition, .. } => {
            let cut = g.partition_cut(partition);
            for e in cut.indices() {
                coeffs[e] = Rat::one();
            }
            (coeffs, rat(partition.len() as i64 - 1))
        }
    }
}

/// Solves the relaxation by cutting planes: start from the spanning-count
/// row and the non-terminal degree rows, then repeatedly add the most
/// violated row from each family until both oracles are satisfied.
pub fn solve_relaxation(g: &Graph) -> Result<Relaxation, SeparationError> {
    let m = g.m();
    let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    // x(E) >= n - 1: the all-singletons partition row
    rows.push((vec![Rat::one(); m], rat(g.n() as i64 - 1)));
    // degree rows x(cut({v})) >= 2 for non-terminals: singleton even cuts
    for v in 0..g.n() {
        if v == g.s() || v == g.t() {
            continue;
        }
        let mut coeffs = vec![Rat::zero(); m];
        for &(_, e) in g.adj(v) {
            coeffs[e] = Rat::one();
        }
        rows.push((coeffs, rat(2)));
    }

    const ROUND_LIMIT: usize = 10_000;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > ROUND_LIMIT {
            return Err(SeparationError::RoundLimit(ROUND_LIMIT));
        }
        let lp = LinearProgram {
            objective: vec![Rat::one(); m],
            rows: rows.clone(),
            lower: vec![Rat::zero(); m],
            upper: vec![rat(2); m],
        };
        let sol = lp::solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            // x = 2 everywhere satisfies every valid row, so the LP is
            // always feasible and bounded
            return Err(SeparationError::UnexpectedLpStatus(sol.status));
        }
        let x = FractionalSolution::new(sol.values, m)?;
        let mut added = 0;
        if let Some(c) = separate_even_cuts(g, &x) {
            rows.push(constraint_row(g, &c));
            added += 1;
        }
        if let Some(c) = separate_partitions(g, &x)? {
            rows.push(constraint_row(g, &c));
            added += 1;
        }
        if added == 0 {
            let value = sol.objective;
            return Ok(Relaxation {
                solution: x,
                value,
                rounds,
                rows_added: rows.len() - (g.n() - 1),
            });
        }
    }
}
