//! End-to-end solver: relaxation, cut chain, layered tree, parity join,
//! trail, shortcut. Every stage is timed, every error names its stage, and
//! a handful of cheap invariants from the approximation argument are checked
//! on every run; `verify` additionally replays the answer against the
//! brute-force references within their budgets.

use crate::graph::{eulerian_trail, shortcut, Graph, GraphError};
use crate::narrow_cuts::{extract_narrow_cuts, gomory_hu_tree, NarrowCutError};
use crate::oracle::{
    brute_narrow_cuts, brute_tjoin, enumerate_lp, held_karp_opt, tjoin_cut_lp_value,
    CUT_ENUM_LIMIT, ENUMERATE_LIMIT, JOIN_ENUM_LIMIT, OPT_LIMIT,
};
use crate::rat::{parse_rat, rat, rat_str, Rat};
use crate::report::{ratio_strings, BatchReport, BatchSummary, CheckOutcome, InstanceFailure, SolutionReport};
use crate::separation::{solve_relaxation, SeparationError};
use crate::tjoin::{min_tjoin, TJoinError};
use crate::tree_builder::{build_tree, support_graph, wrong_degree_set, TreeError};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("relaxation stage: {0}")]
    Relaxation(#[source] SeparationError),
    #[error("cut analysis stage: {0}")]
    Cuts(#[source] NarrowCutError),
    #[error("tree stage: {0}")]
    Tree(#[source] TreeError),
    #[error("join stage: {0}")]
    Join(#[source] TJoinError),
    #[error("trail stage: {0}")]
    Trail(#[source] GraphError),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("verification failed: {0}")]
    Verify(String),
}

fn invariant(ok: bool, diagnostic: impl FnOnce() -> String) -> Result<(), PipelineError> {
    if ok {
        Ok(())
    } else {
        Err(PipelineError::Invariant(diagnostic()))
    }
}

pub fn run_pipeline(id: &str, g: &Graph, verify: bool) -> Result<SolutionReport, PipelineError> {
    let mut timings_ms: Vec<(String, f64)> = Vec::new();
    let mut timed = |name: &str, start: Instant| {
        timings_ms.push((name.to_string(), start.elapsed().as_secs_f64() * 1e3));
    };

    let clock = Instant::now();
    let relax = solve_relaxation(g).map_err(PipelineError::Relaxation)?;
    let x = relax.solution;
    let lp_value = relax.value;
    timed("relaxation", clock);

    let clock = Instant::now();
    let cut_tree = gomory_hu_tree(g, &x).map_err(PipelineError::Cuts)?;
    let chain = extract_narrow_cuts(g, &x, &cut_tree).map_err(PipelineError::Cuts)?;
    timed("narrow cuts", clock);

    let clock = Instant::now();
    let support = support_graph(g, &x).map_err(PipelineError::Tree)?;
    let tree = build_tree(g, &support, &chain).map_err(PipelineError::Tree)?;
    timed("spanning tree", clock);

    let clock = Instant::now();
    let targets = wrong_degree_set(g, &tree.edges, g.s(), g.t());
    let join = min_tjoin(g, &targets).map_err(PipelineError::Join)?;
    timed("parity join", clock);

    let clock = Instant::now();
    let multi = tree.edges.disjoint_union(&join).map_err(PipelineError::Trail)?;
    let trail = eulerian_trail(g, &multi, g.s(), g.t()).map_err(PipelineError::Trail)?;
    let costs = g.metric_completion();
    let (path, cost) = shortcut(&trail, &costs).map_err(PipelineError::Trail)?;
    timed("trail", clock);

    // bounds from the approximation argument; failures here mean the
    // pipeline is wrong, so they abort rather than get reported as results
    let n = g.n();
    invariant(rat(n as i64 - 1) <= lp_value, || {
        format!("tree needs {} edges but the relaxation value is only {}", n - 1, rat_str(&lp_value))
    })?;
    invariant(rat(2 * join.size() as i64) <= lp_value, || {
        format!(
            "join size {} exceeds half the relaxation value {}",
            join.size(),
            rat_str(&lp_value)
        )
    })?;
    invariant(cost <= (tree.edges.size() + join.size()) as u64, || {
        format!(
            "shortcut cost {} above the trail length {}",
            cost,
            tree.edges.size() + join.size()
        )
    })?;
    for cut in &chain.cuts {
        let crossing = g
            .cut_edges(cut)
            .map_err(PipelineError::Trail)?
            .indices()
            .filter(|&e| tree.edges.contains(e))
            .count();
        invariant(crossing == 1, || {
            format!("tree crosses the narrow cut {cut:?} {crossing} times instead of once")
        })?;
    }

    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    let mut opt = None;
    if verify {
        let clock = Instant::now();
        let failed = |what: &str, detail: String| PipelineError::Verify(format!("{what}: {detail}"));

        if n <= OPT_LIMIT {
            let reference = held_karp_opt(g).map_err(|e| failed("optimal path", e.to_string()))?;
            let best = reference.cost;
            if cost < best {
                return Err(failed("optimal path", format!("cost {cost} beats the optimum {best}")));
            }
            if 2 * cost > 3 * best {
                return Err(failed(
                    "optimal path",
                    format!("cost {cost} above 3/2 of the optimum {best}"),
                ));
            }
            if lp_value > rat(best as i64) {
                return Err(failed(
                    "optimal path",
                    format!("relaxation value {} above the optimum {best}", rat_str(&lp_value)),
                ));
            }
            outcomes.push(CheckOutcome::passed("optimal path", format!("opt={best}")));
            opt = Some(best);
        } else {
            outcomes.push(CheckOutcome::skipped(
                "optimal path",
                format!("n={n} above the budget {OPT_LIMIT}"),
            ));
        }

        if n <= ENUMERATE_LIMIT {
            let (_, value) =
                enumerate_lp(g).map_err(|e| failed("relaxation value", e.to_string()))?;
            if value != lp_value {
                return Err(failed(
                    "relaxation value",
                    format!("enumeration gives {}, cutting planes {}", rat_str(&value), rat_str(&lp_value)),
                ));
            }
            outcomes.push(CheckOutcome::passed("relaxation value", format!("value={}", rat_str(&value))));
        } else {
            outcomes.push(CheckOutcome::skipped(
                "relaxation value",
                format!("n={n} above the budget {ENUMERATE_LIMIT}"),
            ));
        }

        if n <= CUT_ENUM_LIMIT {
            let brute =
                brute_narrow_cuts(g, &x).map_err(|e| failed("narrow cuts", e.to_string()))?;
            if brute != chain.cuts {
                return Err(failed(
                    "narrow cuts",
                    format!("enumeration gives {:?}, the cut tree gave {:?}", brute, chain.cuts),
                ));
            }
            outcomes.push(CheckOutcome::passed("narrow cuts", format!("count={}", brute.len())));
        } else {
            outcomes.push(CheckOutcome::skipped(
                "narrow cuts",
                format!("n={n} above the budget {CUT_ENUM_LIMIT}"),
            ));
        }

        if g.m() <= JOIN_ENUM_LIMIT {
            let best = brute_tjoin(g, &targets).map_err(|e| failed("parity join", e.to_string()))?;
            if best != join.size() {
                return Err(failed(
                    "parity join",
                    format!("enumeration gives {best}, matching construction {}", join.size()),
                ));
            }
            outcomes.push(CheckOutcome::passed("parity join", format!("size={best}")));
        } else {
            outcomes.push(CheckOutcome::skipped(
                "parity join",
                format!("m={} above the budget {JOIN_ENUM_LIMIT}", g.m()),
            ));
        }

        if n <= ENUMERATE_LIMIT {
            let value = tjoin_cut_lp_value(g, &targets)
                .map_err(|e| failed("join relaxation", e.to_string()))?;
            if value != rat(join.size() as i64) {
                return Err(failed(
                    "join relaxation",
                    format!("value {} does not match the join size {}", rat_str(&value), join.size()),
                ));
            }
            if rat(2) * &value > lp_value {
                return Err(failed(
                    "join relaxation",
                    format!("value {} above half the relaxation value {}", rat_str(&value), rat_str(&lp_value)),
                ));
            }
            outcomes.push(CheckOutcome::passed("join relaxation", format!("value={}", rat_str(&value))));
        } else {
            outcomes.push(CheckOutcome::skipped(
                "join relaxation",
                format!("n={n} above the budget {ENUMERATE_LIMIT}"),
            ));
        }
        timed("verify", clock);
    }

    let (lp_exact, lp_decimal) = ratio_strings(&lp_value);
    let ratio_lp = rat(cost as i64) / &lp_value;
    let (ratio_lp_exact, ratio_lp_decimal) = ratio_strings(&ratio_lp);
    let (ratio_opt, ratio_opt_decimal) = match opt {
        Some(best) => {
            let r = Rat::new(cost.into(), best.into());
            let (exact, decimal) = ratio_strings(&r);
            (Some(exact), Some(decimal))
        }
        None => (None, None),
    };

    Ok(SolutionReport {
        id: id.to_string(),
        n,
        m: g.m(),
        s: g.s(),
        t: g.t(),
        lp_value: lp_exact,
        lp_value_decimal: lp_decimal,
        narrow_cut_count: chain.cuts.len(),
        narrow_cuts: chain.cuts.iter().map(|c| c.iter().copied().collect()).collect(),
        tree_size: tree.edges.size(),
        wrong_degree: targets.iter().copied().collect(),
        join_size: join.size(),
        trail: trail.vertices,
        path,
        cost,
        opt,
        ratio_lp: ratio_lp_exact,
        ratio_lp_decimal,
        ratio_opt,
        ratio_opt_decimal,
        verify: outcomes,
        timings_ms,
    })
}

/// Runs every instance, isolating failures: one bad instance never stops
/// the rest. The summary tracks the worst ratios seen.
pub fn run_batch(instances: &[(String, Graph)], verify: bool) -> BatchReport {
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut max_lp: Option<(Rat, String)> = None;
    let mut max_opt: Option<(Rat, String)> = None;
    for (id, g) in instances {
        match run_pipeline(id, g, verify) {
            Ok(report) => {
                let ratio = parse_rat(&report.ratio_lp).expect("reports carry exact ratios");
                if max_lp.as_ref().is_none_or(|(best, _)| ratio > *best) {
                    max_lp = Some((ratio, id.clone()));
                }
                if let Some(text) = &report.ratio_opt {
                    let ratio = parse_rat(text).expect("reports carry exact ratios");
                    if max_opt.as_ref().is_none_or(|(best, _)| ratio > *best) {
                        max_opt = Some((ratio, id.clone()));
                    }
                }
                reports.push(report);
            }
            Err(error) => {
                failures.push(InstanceFailure { id: id.clone(), error: error.to_string() })
            }
        }
    }
    let summary = BatchSummary {
        instances: instances.len(),
        failed: failures.len(),
        max_ratio_lp: max_lp.as_ref().map(|(r, _)| rat_str(r)),
        max_ratio_lp_instance: max_lp.map(|(_, id)| id),
        max_ratio_opt: max_opt.as_ref().map(|(r, _)| rat_str(r)),
        max_ratio_opt_instance: max_opt.map(|(_, id)| id),
    };
    BatchReport { reports, failures, summary }
}
