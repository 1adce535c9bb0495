//! Release gate: one line per criterion, nonzero exit when any fails.
//!
//! The corpus is 500 seeded random instances at 4 <= n <= 10 across mixed
//! densities, plus the three-path family and the named small instances.
//! Every instance is solved once through the library stages; the criteria
//! then compare that single pass against the brute-force references and the
//! exact bounds the approximation argument promises.

use pathtsp::gen::GenSpec;
use pathtsp::graph::{eulerian_trail, shortcut, EdgeSet, Graph, Trail, VertexSet};
use pathtsp::narrow_cuts::{extract_narrow_cuts, gomory_hu_tree, NarrowCutChain};
use pathtsp::oracle::{
    brute_matching, brute_narrow_cuts, brute_tjoin, enumerate_lp, held_karp_opt,
    CUT_ENUM_LIMIT, ENUMERATE_LIMIT, JOIN_ENUM_LIMIT, MATCH_ENUM_LIMIT,
};
use pathtsp::pipeline::run_batch;
use pathtsp::rat::{rat, rat_str, Rat};
use pathtsp::separation::{solve_relaxation, FractionalSolution};
use pathtsp::tjoin::{min_tjoin, min_weight_matching};
use pathtsp::tree_builder::{build_tree, support_graph, wrong_degree_set};
use std::time::Instant;

const RANDOM_COUNT: usize = 500;
const RANDOM_SEED: u64 = 71;
const TIME_BUDGET_SECS: f64 = 300.0;

struct Solved {
    id: String,
    g: Graph,
    x: FractionalSolution,
    lp_value: Rat,
    chain: NarrowCutChain,
    tree_edges: EdgeSet,
    targets: VertexSet,
    join: EdgeSet,
    trail: Trail,
    path: Vec<usize>,
    cost: u64,
    opt: u64,
}

fn solve_instance(id: &str, g: Graph) -> Solved {
    let fail = |stage: &str, err: &dyn std::fmt::Display| -> ! {
        panic!("{id}: {stage}: {err}")
    };
    let relax = solve_relaxation(&g).unwrap_or_else(|e| fail("relaxation", &e));
    let x = relax.solution;
    let cut_tree = gomory_hu_tree(&g, &x).unwrap_or_else(|e| fail("cut tree", &e));
    let chain = extract_narrow_cuts(&g, &x, &cut_tree).unwrap_or_else(|e| fail("cuts", &e));
    let support = support_graph(&g, &x).unwrap_or_else(|e| fail("support", &e));
    let tree = build_tree(&g, &support, &chain).unwrap_or_else(|e| fail("tree", &e));
    let targets = wrong_degree_set(&g, &tree.edges, g.s(), g.t());
    let join = min_tjoin(&g, &targets).unwrap_or_else(|e| fail("join", &e));
    let multi = tree.edges.disjoint_union(&join).unwrap_or_else(|e| fail("union", &e));
    let trail = eulerian_trail(&g, &multi, g.s(), g.t()).unwrap_or_else(|e| fail("trail", &e));
    let costs = g.metric_completion();
    let (path, cost) = shortcut(&trail, &costs).unwrap_or_else(|e| fail("shortcut", &e));
    let opt = held_karp_opt(&g).unwrap_or_else(|e| fail("reference optimum", &e)).cost;
    Solved {
        id: id.to_string(),
        g,
        x,
        lp_value: relax.value,
        chain,
        tree_edges: tree.edges,
        targets,
        join,
        trail,
        path,
        cost,
        opt,
    }
}

struct Gate {
    failures: usize,
}

impl Gate {
    fn check(&mut self, number: usize, name: &str, violations: &[String], detail: String) {
        if violations.is_empty() {
            println!("criterion {number:2} {name}: PASS ({detail})");
        } else {
            self.failures += 1;
            println!(
                "criterion {number:2} {name}: FAIL ({} violations; first: {}; {detail})",
                violations.len(),
                violations[0]
            );
        }
    }
}

fn main() {
    let named = GenSpec::Named(
        ["single", "p4", "star", "k3", "c4", "c5", "k4", "theta", "grid3"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    let random = GenSpec::Random {
        count: RANDOM_COUNT,
        nmin: 4,
        nmax: 10,
        seed: RANDOM_SEED,
    };
    let gaps = GenSpec::Gap { kmin: 2, kmax: 4 };

    // criterion 1 times the ratio corpus end to end: all stages plus the
    // reference optimum per instance
    let ratio_clock = Instant::now();
    let mut solved: Vec<Solved> = random
        .instances()
        .expect("random corpus generates")
        .into_iter()
        .map(|(id, g)| solve_instance(&id, g))
        .collect();
    let ratio_elapsed = ratio_clock.elapsed().as_secs_f64();

    let mut gate = Gate { failures: 0 };
    {
        let mut violations = Vec::new();
        let mut worst: Option<Rat> = None;
        for s in &solved {
            // cost/opt <= 3/2, compared in integers
            if 2 * s.cost > 3 * s.opt {
                violations.push(format!("{}: cost {} vs optimum {}", s.id, s.cost, s.opt));
            }
            let r = Rat::new(s.cost.into(), s.opt.into());
            if worst.as_ref().is_none_or(|w| r > *w) {
                worst = Some(r);
            }
        }
        if solved.len() < 500 {
            violations.push(format!("only {} instances", solved.len()));
        }
        if ratio_elapsed > TIME_BUDGET_SECS {
            violations.push(format!("took {ratio_elapsed:.1}s, budget {TIME_BUDGET_SECS}s"));
        }
        let detail = format!(
            "{} instances, worst cost/optimum {}, {:.1}s",
            solved.len(),
            worst.map(|w| rat_str(&w)).unwrap_or_default(),
            ratio_elapsed
        );
        gate.check(1, "approximation guarantee", &violations, detail);
    }

    // the remaining criteria also cover the structured families
    for spec in [gaps, named] {
        for (id, g) in spec.instances().expect("corpus generates") {
            solved.push(solve_instance(&id, g));
        }
    }
    let total = solved.len();

    {
        let mut violations = Vec::new();
        for s in &solved {
            if s.lp_value > rat(s.opt as i64) {
                violations.push(format!(
                    "{}: relaxation {} above optimum {}",
                    s.id,
                    rat_str(&s.lp_value),
                    s.opt
                ));
            }
        }
        gate.check(
            2,
            "relaxation lower bound",
            &violations,
            format!("{total} instances, exact comparisons"),
        );
    }

    {
        let mut violations = Vec::new();
        for s in &solved {
            if rat(2 * s.join.size() as i64) > s.lp_value {
                violations.push(format!(
                    "{}: join size {} vs relaxation {}",
                    s.id,
                    s.join.size(),
                    rat_str(&s.lp_value)
                ));
            }
        }
        gate.check(
            3,
            "join at most half the relaxation",
            &violations,
            format!("{total} instances"),
        );
    }

    {
        let mut violations = Vec::new();
        for s in &solved {
            let n = s.g.n();
            if s.tree_edges.size() != n - 1 || rat(n as i64 - 1) > s.lp_value {
                violations.push(format!(
                    "{}: tree size {} vs n-1 = {} vs relaxation {}",
                    s.id,
                    s.tree_edges.size(),
                    n - 1,
                    rat_str(&s.lp_value)
                ));
            }
        }
        gate.check(4, "tree bound", &violations, format!("{total} instances"));
    }

    {
        let mut violations = Vec::new();
        let mut compared = 0;
        for s in &solved {
            if s.g.n() > CUT_ENUM_LIMIT {
                continue;
            }
            compared += 1;
            let brute = brute_narrow_cuts(&s.g, &s.x).expect("within budget");
            if brute != s.chain.cuts {
                violations.push(format!("{}: {:?} vs {:?}", s.id, s.chain.cuts, brute));
            }
            for pair in s.chain.cuts.windows(2) {
                if !(pair[0].is_subset(&pair[1]) && pair[0].len() < pair[1].len()) {
                    violations.push(format!("{}: cuts not strictly nested", s.id));
                }
            }
        }
        gate.check(
            5,
            "narrow cuts found exactly",
            &violations,
            format!("{compared} instances against subset enumeration"),
        );
    }

    {
        let mut violations = Vec::new();
        let mut cuts = 0;
        for s in &solved {
            for cut in &s.chain.cuts {
                cuts += 1;
                let crossing = s
                    .g
                    .cut_edges(cut)
                    .expect("chain cuts are proper")
                    .indices()
                    .filter(|&e| s.tree_edges.contains(e))
                    .count();
                if crossing != 1 {
                    violations.push(format!("{}: cut {cut:?} crossed {crossing} times", s.id));
                }
            }
        }
        gate.check(
            6,
            "tree crosses each narrow cut once",
            &violations,
            format!("{cuts} narrow cuts"),
        );
    }

    {
        let mut violations = Vec::new();
        let mut checked = 0;
        for s in &solved {
            let n = s.g.n();
            if n > ENUMERATE_LIMIT {
                continue;
            }
            let (sv, tv) = (s.g.s(), s.g.t());
            let mut target_mask: u32 = 0;
            for &v in &s.targets {
                target_mask |= 1 << v;
            }
            let rest: Vec<usize> = (0..n).filter(|&v| v != sv && v != tv).collect();
            for pick in 0..1usize << rest.len() {
                let mut mask: u32 = 1 << sv;
                for (i, &v) in rest.iter().enumerate() {
                    if pick >> i & 1 == 1 {
                        mask |= 1 << v;
                    }
                }
                if (mask & target_mask).count_ones() % 2 != 1 {
                    continue;
                }
                checked += 1;
                let crossing = s
                    .g
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|&(e, &(u, v))| {
                        s.tree_edges.contains(e) && (mask >> u & 1) != (mask >> v & 1)
                    })
                    .count();
                if crossing % 2 != 0 {
                    violations.push(format!(
                        "{}: target-odd cut {mask:#b} crossed {crossing} times",
                        s.id
                    ));
                }
            }
        }
        gate.check(
            7,
            "tree is even across target-odd cuts",
            &violations,
            format!("{checked} cuts enumerated"),
        );
    }

    {
        let mut violations = Vec::new();
        let mut ranges = 0;
        for s in &solved {
            let support = support_graph(&s.g, &s.x).expect("support built once already");
            let levels = &s.chain.levels;
            for p in 0..levels.len() {
                for q in p..levels.len() {
                    ranges += 1;
                    let mut union = VertexSet::new();
                    for level in &levels[p..=q] {
                        union.extend(level.iter().copied());
                    }
                    let start = *union.iter().next().expect("levels are nonempty");
                    let mut seen = VertexSet::from([start]);
                    let mut queue = vec![start];
                    while let Some(u) = queue.pop() {
                        for &(w, _) in support.graph.adj(u) {
                            if union.contains(&w) && seen.insert(w) {
                                queue.push(w);
                            }
                        }
                    }
                    if seen != union {
                        violations.push(format!(
                            "{}: levels {p}..={q} disconnected in the support graph",
                            s.id
                        ));
                    }
                }
            }
        }
        gate.check(
            8,
            "level ranges connected in the support graph",
            &violations,
            format!("{ranges} ranges"),
        );
    }

    {
        let mut violations = Vec::new();
        let mut compared = 0;
        for s in &solved {
            if s.g.n() > ENUMERATE_LIMIT {
                continue;
            }
            compared += 1;
            let (_, value) = enumerate_lp(&s.g).expect("within budget");
            if value != s.lp_value {
                violations.push(format!(
                    "{}: enumeration {} vs cutting planes {}",
                    s.id,
                    rat_str(&value),
                    rat_str(&s.lp_value)
                ));
            }
        }
        gate.check(
            9,
            "relaxation value matches full enumeration",
            &violations,
            format!("{compared} instances, exact equality"),
        );
    }

    {
        let mut violations = Vec::new();
        let mut joins = 0;
        let mut matchings = 0;
        for s in &solved {
            if s.g.m() <= JOIN_ENUM_LIMIT {
                joins += 1;
                let brute = brute_tjoin(&s.g, &s.targets).expect("within budget");
                if brute != s.join.size() {
                    violations.push(format!(
                        "{}: join size {} vs enumerated {brute}",
                        s.id,
                        s.join.size()
                    ));
                }
            }
            if !s.targets.is_empty() && s.targets.len() <= MATCH_ENUM_LIMIT {
                matchings += 1;
                let points: Vec<usize> = s.targets.iter().copied().collect();
                let d: Vec<Vec<u64>> = points
                    .iter()
                    .map(|&a| {
                        let row = s.g.bfs_distances(a);
                        points.iter().map(|&b| row[b]).collect()
                    })
                    .collect();
                let fast: u64 = min_weight_matching(&d).iter().map(|&(i, j)| d[i][j]).sum();
                let slow = brute_matching(&d).expect("within budget");
                if fast != slow {
                    violations.push(format!("{}: matching {fast} vs enumerated {slow}", s.id));
                }
            }
        }
        gate.check(
            10,
            "join and matching match enumeration",
            &violations,
            format!("{joins} joins, {matchings} matchings"),
        );
    }

    {
        let mut violations = Vec::new();
        for s in &solved {
            let mut bad = |what: String| violations.push(format!("{}: {what}", s.id));
            let multi = s.tree_edges.disjoint_union(&s.join).expect("multiplicities fit");
            if multi.odd_vertices(&s.g) != VertexSet::from([s.g.s(), s.g.t()]) {
                bad("union odd-degree set is not exactly the terminals".to_string());
            }
            let mut used = vec![0usize; s.g.m()];
            for &e in &s.trail.edges {
                used[e] += 1;
            }
            if (0..s.g.m()).any(|e| used[e] != multi.multiplicity(e) as usize) {
                bad("trail edge usage differs from the union multiplicities".to_string());
            }
            if s.trail.vertices.len() != s.trail.edges.len() + 1 {
                bad("trail vertex and edge counts disagree".to_string());
            }
            let mut visited = s.path.clone();
            visited.sort_unstable();
            if visited != (0..s.g.n()).collect::<Vec<_>>() {
                bad("path is not spanning without repeats".to_string());
            }
            if s.path.first() != Some(&s.g.s()) || s.path.last() != Some(&s.g.t()) {
                bad("path endpoints are not the terminals".to_string());
            }
            if s.g.metric_completion().walk_cost(&s.path) != s.cost {
                bad("reported cost differs from the metric walk cost".to_string());
            }
            if s.cost > (s.tree_edges.size() + s.join.size()) as u64 {
                bad(format!(
                    "cost {} above tree plus join size {}",
                    s.cost,
                    s.tree_edges.size() + s.join.size()
                ));
            }
        }
        gate.check(
            11,
            "output is a spanning terminal-to-terminal path",
            &violations,
            format!("{total} instances"),
        );
    }

    {
        let corpus = GenSpec::Random { count: RANDOM_COUNT, nmin: 4, nmax: 10, seed: RANDOM_SEED };
        let run = |_: usize| {
            let instances = corpus.instances().expect("corpus generates");
            serde_json::to_string(&run_batch(&instances, false)).expect("reports serialize")
        };
        let a = run(0);
        let b = run(1);
        let mut violations = Vec::new();
        if a != b {
            violations.push("two generate-and-solve runs differ".to_string());
        }
        gate.check(
            12,
            "reports byte-identical across runs",
            &violations,
            format!("{} JSON bytes compared", a.len()),
        );
    }

    if gate.failures > 0 {
        println!("acceptance: {} criteria failed", gate.failures);
        std::process::exit(1);
    }
    println!("acceptance: all 12 criteria passed");
}
