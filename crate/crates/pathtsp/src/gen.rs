//! Instance generators for test corpora and ratio exploration.
//!
//! Everything here is a pure function of its parameters: the random
//! generator is seeded explicitly and the same seed always reproduces the
//! same graph, byte for byte.

use crate::graph::{Graph, GraphError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("edge count {m} outside [{min}, {max}] for {n} vertices")]
    EdgeCountOutOfRange { m: usize, n: usize, min: usize, max: usize },
    #[error("{n} vertices are too few to pick distinct terminals")]
    TooFewVertices { n: usize },
    #[error("path length {k} is below 2; length-1 paths collapse into parallel edges")]
    PathTooShort { k: usize },
    #[error("unknown named instance {name:?}; known names: {known}")]
    UnknownName { name: String, known: String },
    #[error("bad generator spec {text:?}: {reason}")]
    BadSpec { text: String, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Labeled tree from a Prüfer code; the code being uniform makes the tree
/// uniform over all labeled trees. An empty code gives the single edge on
/// two vertices.
fn prufer_tree(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let l = *leaves.iter().next().unwrap();
        leaves.remove(&l);
        edges.push((l.min(c), l.max(c)));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let mut last = leaves.into_iter();
    let (a, b) = (last.next().unwrap(), last.next().unwrap());
    edges.push((a.min(b), a.max(b)));
    edges
}

/// Connected simple graph: a uniform spanning tree plus `m - (n-1)` distinct
/// extra edges, terminals a uniform distinct pair. Deterministic per seed.
pub fn gen_random(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 2 {
        return Err(GenError::TooFewVertices { n });
    }
    let min = n - 1;
    let max = n * (n - 1) / 2;
    if m < min || m > max {
        return Err(GenError::EdgeCountOutOfRange { m, n, min, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.random_range(0..n))
        .collect();
    let mut edges = prufer_tree(&code, n);
    let tree: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let mut pool: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|pair| !tree.contains(pair))
        .collect();
    for i in 0..m - min {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
        edges.push(pool[i]);
    }
    let s = rng.random_range(0..n);
    let mut t = rng.random_range(0..n - 1);
    if t >= s {
        t += 1;
    }
    Ok(Graph::new(n, edges, s, t)?)
}

/// Theta-family instance: three internally disjoint s-t paths of length `k`
/// each, on 3k-1 vertices. These carry structurally deficient cuts, which
/// makes them useful for measuring how far the path cost can drift above
/// the relaxation value.
pub fn gen_gap(k: usize) -> Result<Graph, GenError> {
    if k < 2 {
        return Err(GenError::PathTooShort { k });
    }
    let n = 3 * k - 1;
    let (s, t) = (0, n - 1);
    let mut edges = Vec::with_capacity(3 * k);
    for p in 0..3 {
        let base = 1 + p * (k - 1);
        edges.push((s, base));
        for i in 0..k - 2 {
            edges.push((base + i, base + i + 1));
        }
        edges.push((base + k - 2, t));
    }
    Ok(Graph::new(n, edges, s, t)?)
}

const NAMED: &[&str] = &["single", "p4", "star", "k3", "c4", "c5", "k4", "theta", "grid3"];

/// Small fixed instances used throughout the tests, by name.
pub fn gen_named(name: &str) -> Result<Graph, GenError> {
    let text = match name {
        "single" => "2 1 0 1\n0 1\n",
        "p4" => "4 3 0 3\n0 1\n1 2\n2 3\n",
        "star" => "4 3 0 2\n1 0\n1 2\n1 3\n",
        "k3" => "3 3 0 1\n0 1\n1 2\n0 2\n",
        "c4" => "4 4 0 2\n0 1\n1 2\n2 3\n3 0\n",
        "c5" => "5 5 0 2\n0 1\n1 2\n2 3\n3 4\n4 0\n",
        "k4" => "4 6 0 1\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n",
        "theta" => return gen_gap(2),
        "grid3" => "9 12 0 8\n0 1\n1 2\n3 4\n4 5\n6 7\n7 8\n0 3\n3 6\n1 4\n4 7\n2 5\n5 8\n",
        _ => {
            return Err(GenError::UnknownName {
                name: name.to_string(),
                known: NAMED.join(", "),
            })
        }
    };
    Ok(Graph::parse(text)?)
}

/// A corpus recipe: either a batch of random instances with sizes drawn
/// from a range, a run of theta instances, or a list of named ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    Random { count: usize, nmin: usize, nmax: usize, seed: u64 },
    Gap { kmin: usize, kmax: usize },
    Named(Vec<String>),
}

impl GenSpec {
    /// Parses specs of the form `random:count=30,nmin=4,nmax=8,seed=7`,
    /// `gap:kmin=2,kmax=5`, or `named:p4,star,k3`.
    pub fn parse(text: &str) -> Result<GenSpec, GenError> {
        let bad = |reason: &str| GenError::BadSpec {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rest) = text.split_once(':').ok_or_else(|| {
            bad("expected kind:arguments, with kind one of random, gap, named")
        })?;
        match kind {
            "named" => {
                let names: Vec<String> =
                    rest.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
                if names.is_empty() {
                    return Err(bad("no instance names listed"));
                }
                Ok(GenSpec::Named(names))
            }
            "random" | "gap" => {
                let mut pairs = std::collections::BTreeMap::new();
                for part in rest.split(',') {
                    let (key, value) = part
                        .split_once('=')
                        .ok_or_else(|| bad(&format!("expected key=value, got {part:?}")))?;
                    let value: u64 = value
                        .trim()
                        .parse()
                        .map_err(|_| bad(&format!("{key} needs an unsigned integer")))?;
                    if pairs.insert(key.trim().to_string(), value).is_some() {
                        return Err(bad(&format!("{key} given twice")));
                    }
                }
                let mut take = |key: &str| {
                    pairs
                        .remove(key)
                        .ok_or_else(|| bad(&format!("missing {key}")))
                };
                let spec = if kind == "random" {
                    GenSpec::Random {
                        count: take("count")? as usize,
                        nmin: take("nmin")? as usize,
                        nmax: take("nmax")? as usize,
                        seed: take("seed")?,
                    }
                } else {
                    GenSpec::Gap {
                        kmin: take("kmin")? as usize,
                        kmax: take("kmax")? as usize,
                    }
                };
                if let Some(key) = pairs.into_keys().next() {
                    return Err(bad(&format!("unknown key {key}")));
                }
                Ok(spec)
            }
            other => Err(bad(&format!(
                "unknown kind {other:?}; expected random, gap, or named"
            ))),
        }
    }

    /// Materializes the recipe as (id, graph) pairs, deterministically.
    pub fn instances(&self) -> Result<Vec<(String, Graph)>, GenError> {
        match self {
            GenSpec::Random { count, nmin, nmax, seed } => {
                if *nmin < 2 || nmin > nmax {
                    return Err(GenError::BadSpec {
                        text: format!("random:count={count},nmin={nmin},nmax={nmax},seed={seed}"),
                        reason: "need 2 <= nmin <= nmax".to_string(),
                    });
                }
                let mut master = ChaCha8Rng::seed_from_u64(*seed);
                let mut out = Vec::with_capacity(*count);
                for i in 0..*count {
                    let n = master.random_range(*nmin..=*nmax);
                    let m = master.random_range(n - 1..=n * (n - 1) / 2);
                    let instance_seed = master.random::<u64>();
                    let g = gen_random(n, m, instance_seed)?;
                    out.push((format!("random-{i:04}-n{n}-m{m}"), g));
                }
                Ok(out)
            }
            GenSpec::Gap { kmin, kmax } => {
                if *kmin < 2 || kmin > kmax {
                    return Err(GenError::BadSpec {
                        text: format!("gap:kmin={kmin},kmax={kmax}"),
                        reason: "need 2 <= kmin <= kmax".to_string(),
                    });
                }
                (*kmin..=*kmax)
                    .map(|k| Ok((format!("gap-k{k}"), gen_gap(k)?)))
                    .collect()
            }
            GenSpec::Named(names) => names
                .iter()
                .map(|name| Ok((name.clone(), gen_named(name)?)))
                .collect(),
        }
    }
}
