//! Brute-force reference implementations.
//!
//! Everything here recomputes an answer the pipeline produces by cleverer
//! means, using exhaustive enumeration plus the bare LP solver. The point is
//! that agreement between the two is evidence: these functions share only
//! the basic graph containers with the pipeline, none of its algorithms.
//! All of them refuse inputs past a fixed desk-scale budget.

use crate::graph::{Graph, GraphError, VertexSet};
use crate::lp::{solve, LinearProgram, LpError, LpStatus};
use crate::rat::{rat, Rat};
use crate::separation::{FractionalSolution, SeparationError};
use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Vertex budget for the optimal-path dynamic program (2^n * n^2 time).
pub const OPT_LIMIT: usize = 18;
/// Vertex budget for exhaustive LP enumeration (every partition scanned).
pub const ENUMERATE_LIMIT: usize = 10;
/// Vertex budget for exhaustive cut listing.
pub const CUT_ENUM_LIMIT: usize = 12;
/// Edge budget for exhaustive join search (2^m subsets).
pub const JOIN_ENUM_LIMIT: usize = 18;
/// Point budget for exhaustive matching search ((p-1)!! pairings).
pub const MATCH_ENUM_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{what} is {size}, above the oracle budget of {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("{count} targets cannot be paired; the target set must be even")]
    OddTargets { count: usize },
    #[error("target vertex {v} is out of range for {n} vertices")]
    TargetOutOfRange { v: usize, n: usize },
    #[error("relaxation must stay solvable while rows are added")]
    UnexpectedLpStatus,
    #[error("constraint activation failed to settle")]
    RoundLimit,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Separation(#[from] SeparationError),
}

const ROUND_LIMIT: usize = 10_000;

/// An optimal spanning s-t path in the metric completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptResult {
    pub cost: u64,
    /// One optimal visiting order, s first and t last.
    pub order: Vec<usize>,
}

/// Exact optimum by dynamic programming over (visited set, last vertex).
pub fn held_karp_opt(g: &Graph) -> Result<OptResult, OracleError> {
    let n = g.n();
    if n > OPT_LIMIT {
        return Err(OracleError::TooLarge { what: "vertex count", size: n, limit: OPT_LIMIT });
    }
    let costs = g.metric_completion();
    let (s, t) = (g.s(), g.t());
    let full = 1usize << n;
    const INF: u32 = u32::MAX;
    let mut best = vec![INF; full * n];
    let mut prev = vec![u8::MAX; full * n];
    best[(1 << s) * n + s] = 0;
    for mask in 1..full {
        if mask & (1 << s) == 0 {
            continue;
        }
        for last in 0..n {
            if mask & (1 << last) == 0 || last == t {
                continue;
            }
            let cur = best[mask * n + last];
            if cur == INF {
                continue;
            }
            for v in 0..n {
                if mask & (1 << v) != 0 {
                    continue;
                }
                // distances fit comfortably in u32 at this budget
                let cand = cur + costs.get(last, v) as u32;
                let idx = (mask | 1 << v) * n + v;
                if cand < best[idx] {
                    best[idx] = cand;
                    prev[idx] = last as u8;
                }
            }
        }
    }
    let cost = best[(full - 1) * n + t];
    assert_ne!(cost, INF, "a connected graph always has a spanning s-t path");
    let mut order = vec![t];
    let mut mask = full - 1;
    let mut v = t;
    while v != s || mask != 1 << s {
        let p = prev[mask * n + v] as usize;
        mask &= !(1 << v);
        v = p;
        order.push(v);
    }
    order.reverse();
    Ok(OptResult { cost: cost as u64, order })
}

/// Scaled copy of an LP point: integer numerators over one denominator,
/// downcast to machine words when they fit with headroom.
enum ScaledPoint {
    Small(Vec<i128>, i128),
    Big(Vec<BigInt>, BigInt),
}

fn scale_point(values: &[Rat]) -> ScaledPoint {
    let mut denom = BigInt::one();
    for v in values {
        denom = denom.lcm(v.denom());
    }
    let nums: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();
    // headroom so row sums and small rhs multiples cannot overflow
    let margin = BigInt::from(i128::MAX / (values.len() as i128 + 4) / 4);
    if denom <= margin && nums.iter().all(|x| x.abs() <= margin) {
        let small = nums.iter().map(|x| x.to_i128().unwrap()).collect();
        return ScaledPoint::Small(small, denom.to_i128().unwrap());
    }
    ScaledPoint::Big(nums, denom)
}

/// Scanner arithmetic over either machine words or big integers.
trait CutNum: Clone + Ord {
    fn zero() -> Self;
    fn add_ref(&mut self, other: &Self);
    fn times(&self, k: usize) -> Self;
}

impl CutNum for i128 {
    fn zero() -> Self {
        0
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn times(&self, k: usize) -> Self {
        self * k as i128
    }
}

impl CutNum for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn times(&self, k: usize) -> Self {
        self * k
    }
}

/// Most violated even-terminal cut row under the scaled point, if any.
/// Scans every subset containing vertex 0 (each cut has exactly one such
/// side). Ties break toward the earliest subset in mask order.
fn worst_even_cut<W: CutNum>(g: &Graph, nums: &[W], denom: &W) -> Option<(Vec<Rat>, Rat)> {
    let n = g.n();
    let (s, t) = (g.s(), g.t());
    let two = denom.times(2);
    let mut best: Option<(W, usize)> = None;
    for mask in (1usize..(1 << n) - 1).step_by(2) {
        let picked = (mask >> s & 1) + (mask >> t & 1);
        if picked == 1 {
            continue;
        }
        let mut val = W::zero();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if (mask >> u & 1) != (mask >> v & 1) {
                val.add_ref(&nums[e]);
            }
        }
        if val < two && best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, mask));
        }
    }
    let (_, mask) = best?;
    let row = g
        .edges()
        .iter()
        .map(|&(u, v)| if (mask >> u & 1) != (mask >> v & 1) { rat(1) } else { rat(0) })
        .collect();
    Some((row, rat(2)))
}

/// Most violated partition row under the scaled point, if any. Walks every
/// restricted growth string, so every partition of the vertices is checked.
/// Ties break toward the earliest partition in that order.
fn worst_partition<W: CutNum>(g: &Graph, nums: &[W], denom: &W) -> Option<(Vec<Rat>, Rat)> {
    let n = g.n();
    let mut labels = vec![0usize; n];
    let mut best: Option<(W, Vec<usize>)> = None;
    loop {
        let blocks = labels.iter().copied().max().unwrap() + 1;
        if blocks >= 2 {
            let mut crossing = W::zero();
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                if labels[u] != labels[v] {
                    crossing.add_ref(&nums[e]);
                }
            }
            let need = denom.times(blocks - 1);
            if crossing < need {
                // largest deficit wins; need - crossing > prev_need - prev
                // is compared as need + prev > prev_need + crossing to stay
                // in nonnegative values
                let better = match &best {
                    None => true,
                    Some((prev, prev_labels)) => {
                        let prev_blocks = prev_labels.iter().copied().max().unwrap() + 1;
                        let mut lhs = denom.times(blocks - 1);
                        lhs.add_ref(prev);
                        let mut rhs = denom.times(prev_blocks - 1);
                        rhs.add_ref(&crossing);
                        lhs > rhs
                    }
                };
                if better {
                    best = Some((crossing, labels.clone()));
                }
            }
        }
        // next restricted growth string
        let mut advanced = false;
        for i in (1..n).rev() {
            let prefix_max = labels[..i].iter().copied().max().unwrap();
            if labels[i] <= prefix_max {
                labels[i] += 1;
                for l in labels[i + 1..].iter_mut() {
                    *l = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    let (_, labels) = best?;
    let blocks = labels.iter().copied().max().unwrap() + 1;
    let row = g
        .edges()
        .iter()
        .map(|&(u, v)| if labels[u] != labels[v] { rat(1) } else { rat(0) })
        .collect();
    Some((row, rat(blocks as i64 - 1)))
}

/// Optimum of the path relaxation with the full constraint families: every
/// partition row and every even-terminal cut row. Rows are activated as the
/// current point violates them; on return the point has been checked against
/// every row of both families, so the value is the fully constrained optimum.
pub fn enumerate_lp(g: &Graph) -> Result<(FractionalSolution, Rat), OracleError> {
    let n = g.n();
    if n > ENUMERATE_LIMIT {
        return Err(OracleError::TooLarge {
            what: "vertex count",
            size: n,
            limit: ENUMERATE_LIMIT,
        });
    }
    let m = g.m();
    let objective = vec![rat(1); m];
    let lower = vec![rat(0); m];
    let upper = vec![rat(2); m];
    // seeds are members of the scanned families, so they change nothing
    // beyond convergence speed
    let mut rows: Vec<(Vec<Rat>, Rat)> = vec![(vec![rat(1); m], rat(n as i64 - 1))];
    for v in 0..n {
        if v == g.s() || v == g.t() {
            continue;
        }
        let row = g
            .edges()
            .iter()
            .map(|&(a, b)| if a == v || b == v { rat(1) } else { rat(0) })
            .collect();
        rows.push((row, rat(2)));
    }
    for _ in 0..ROUND_LIMIT {
        let lp = LinearProgram {
            objective: objective.clone(),
            rows: rows.clone(),
            lower: lower.clone(),
            upper: upper.clone(),
        };
        let sol = solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            return Err(OracleError::UnexpectedLpStatus);
        }
        // cheap family first; the partition walk only runs once cuts settle
        let added = match scale_point(&sol.values) {
            ScaledPoint::Small(nums, denom) => worst_even_cut(g, &nums, &denom)
                .or_else(|| worst_partition(g, &nums, &denom)),
            ScaledPoint::Big(nums, denom) => worst_even_cut(g, &nums, &denom)
                .or_else(|| worst_partition(g, &nums, &denom)),
        };
        match added {
            Some(row) => rows.push(row),
            None => {
                let point = FractionalSolution::new(sol.values, m)?;
                return Ok((point, sol.objective));
            }
        }
    }
    Err(OracleError::RoundLimit)
}

/// Every s-side narrow cut by subset enumeration, sorted by size then
/// contents.
pub fn brute_narrow_cuts(
    g: &Graph,
    x: &FractionalSolution,
) -> Result<Vec<VertexSet>, OracleError> {
    let n = g.n();
    if n > CUT_ENUM_LIMIT {
        return Err(OracleError::TooLarge {
            what: "vertex count",
            size: n,
            limit: CUT_ENUM_LIMIT,
        });
    }
    let (s, t) = (g.s(), g.t());
    let rest: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut found = Vec::new();
    for mask in 0..1usize << rest.len() {
        let mut side = VertexSet::from([s]);
        for (i, &v) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                side.insert(v);
            }
        }
        let mut value = rat(0);
        for e in g.cut_edges(&side)?.indices() {
            value += x.value(e);
        }
        if value < rat(2) {
            found.push(side);
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found)
}

/// Minimum join size by scanning every edge subset.
pub fn brute_tjoin(g: &Graph, targets: &VertexSet) -> Result<usize, OracleError> {
    let m = g.m();
    if m > JOIN_ENUM_LIMIT {
        return Err(OracleError::TooLarge { what: "edge count", size: m, limit: JOIN_ENUM_LIMIT });
    }
    for &v in targets {
        if v >= g.n() {
            return Err(OracleError::TargetOutOfRange { v, n: g.n() });
        }
    }
    if targets.len() % 2 != 0 {
        return Err(OracleError::OddTargets { count: targets.len() });
    }
    let mut want: u32 = 0;
    for &v in targets {
        want |= 1 << v;
    }
    let flips: Vec<u32> = g.edges().iter().map(|&(u, v)| 1 << u | 1 << v).collect();
    let mut best = usize::MAX;
    for mask in 0..1usize << m {
        let mut parity = 0u32;
        for (e, flip) in flips.iter().enumerate() {
            if mask >> e & 1 == 1 {
                parity ^= flip;
            }
        }
        if parity == want {
            best = best.min(mask.count_ones() as usize);
        }
    }
    assert_ne!(best, usize::MAX, "even target sets always have a join in a connected graph");
    Ok(best)
}

/// Minimum pairing cost by scanning every perfect matching.
pub fn brute_matching(d: &[Vec<u64>]) -> Result<u64, OracleError> {
    let p = d.len();
    if p > MATCH_ENUM_LIMIT {
        return Err(OracleError::TooLarge { what: "point count", size: p, limit: MATCH_ENUM_LIMIT });
    }
    if p % 2 != 0 {
        return Err(OracleError::OddTargets { count: p });
    }
    assert!(d.iter().all(|row| row.len() == p), "cost matrix must be square");
    fn go(d: &[Vec<u64>], left: &mut Vec<usize>) -> u64 {
        if left.is_empty() {
            return 0;
        }
        let i = left.remove(0);
        let mut best = u64::MAX;
        for pos in 0..left.len() {
            let j = left.remove(pos);
            best = best.min(d[i][j] + go(d, left));
            left.insert(pos, j);
        }
        left.insert(0, i);
        best
    }
    Ok(go(d, &mut (0..p).collect()))
}

/// Optimum of the join relaxation: minimize the edge total over [0,1] values
/// crossing every target-odd cut at least once. Equals the minimum join size
/// on the nose, which makes it a second independent reference for joins.
pub fn tjoin_cut_lp_value(g: &Graph, targets: &VertexSet) -> Result<Rat, OracleError> {
    let n = g.n();
    if n > ENUMERATE_LIMIT {
        return Err(OracleError::TooLarge {
            what: "vertex count",
            size: n,
            limit: ENUMERATE_LIMIT,
        });
    }
    for &v in targets {
        if v >= n {
            return Err(OracleError::TargetOutOfRange { v, n });
        }
    }
    if targets.len() % 2 != 0 {
        return Err(OracleError::OddTargets { count: targets.len() });
    }
    if targets.is_empty() {
        return Ok(rat(0));
    }
    let m = g.m();
    let objective = vec![rat(1); m];
    let lower = vec![rat(0); m];
    let upper = vec![rat(1); m];
    let odd = |mask: usize| {
        let mut c = 0;
        for &v in targets {
            c += mask >> v & 1;
        }
        c % 2 == 1
    };
    let cut_row = |mask: usize| -> Vec<Rat> {
        g.edges()
            .iter()
            .map(|&(u, v)| if (mask >> u & 1) != (mask >> v & 1) { rat(1) } else { rat(0) })
            .collect()
    };
    // seed with the target singletons; all further rows activate on demand
    let mut rows: Vec<(Vec<Rat>, Rat)> =
        targets.iter().map(|&v| (cut_row(1 << v), rat(1))).collect();
    for _ in 0..ROUND_LIMIT {
        let lp = LinearProgram {
            objective: objective.clone(),
            rows: rows.clone(),
            lower: lower.clone(),
            upper: upper.clone(),
        };
        let sol = solve(&lp)?;
        if sol.status != LpStatus::Optimal {
            return Err(OracleError::UnexpectedLpStatus);
        }
        // scan every target-odd cut, one side each (the one containing 0)
        let mut worst: Option<(Rat, usize)> = None;
        for mask in (1usize..(1 << n) - 1).step_by(2) {
            if !odd(mask) {
                continue;
            }
            let mut val = rat(0);
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                if (mask >> u & 1) != (mask >> v & 1) {
                    val += &sol.values[e];
                }
            }
            if val < rat(1) && worst.as_ref().is_none_or(|(w, _)| val < *w) {
                worst = Some((val, mask));
            }
        }
        match worst {
            Some((_, mask)) => rows.push((cut_row(mask), rat(1))),
            None => return Ok(sol.objective),
        }
    }
    Err(OracleError::RoundLimit)
}
