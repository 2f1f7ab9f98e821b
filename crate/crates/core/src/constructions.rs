//! Universal hypergraphs from graphs, hitting graphs and `σ(F)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::generators::sample_bounded_degree;
use crate::hypergraph::{Graph, Hypergraph, Vertex};
use crate::par::{self, Execution};
use crate::search::{find_embedding, validate_embedding, SearchOutcome, DEFAULT_BUDGET};
use crate::seed;

/// `H_r(G)`: every `r`-set containing at least one edge of `g`.
pub fn hr_construction(g: &Graph, r: usize) -> Result<Hypergraph> {
    let n = g.n();
    if r < 3 || n < r {
        return Err(Error::param(format!("H_r(G) needs r >= 3 and n >= r (r = {r}, n = {n})")));
    }
    let mut edges = BTreeSet::new();
    for (a, b) in g.edges() {
        let rest: Vec<Vertex> = (1..=n as Vertex).filter(|&v| v != a && v != b).collect();
        for c in Combinations::new(rest.len() as u32, r - 2) {
            let mut e: Vec<Vertex> = c.iter().map(|&i| rest[i as usize - 1]).collect();
            e.push(a);
            e.push(b);
            e.sort_unstable();
            edges.insert(e);
        }
    }
    Hypergraph::from_edge_set(r, n, edges)
}

/// Maximal cliques of `g` by Bron–Kerbosch with pivoting.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let all: Vec<Vertex> = (1..=g.n() as Vertex).collect();
    bron_kerbosch(g, &mut Vec::new(), all, Vec::new(), &mut out);
    out.sort();
    out
}

fn bron_kerbosch(g: &Graph, r: &mut Vec<Vertex>, p: Vec<Vertex>, mut x: Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
    if p.is_empty() && x.is_empty() {
        let mut c = r.clone();
        c.sort_unstable();
        out.push(c);
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.has_edge(u, v)).count())
        .unwrap();
    let mut p = p;
    let branch: Vec<Vertex> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    for v in branch {
        let np = p.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        let nx = x.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        r.push(v);
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

/// `K_r(G)`: one edge per `r`-clique of `g`.
pub fn kr_construction(g: &Graph, r: usize) -> Result<Hypergraph> {
    if r < 3 {
        return Err(Error::param(format!("K_r(G) needs r >= 3, got {r}")));
    }
    let mut edges = BTreeSet::new();
    for clique in maximal_cliques(g) {
        for c in Combinations::new(clique.len() as u32, r) {
            edges.insert(c.iter().map(|&i| clique[i as usize - 1]).collect::<Vec<_>>());
        }
    }
    Hypergraph::from_edge_set(r, g.n().max(r), edges)
}

/// A graph with an edge inside every hyperedge of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingGraph {
    pub graph: Graph,
    /// `certificate[i]` is a graph edge inside the `i`-th hyperedge.
    pub certificate: Vec<(Vertex, Vertex)>,
}

impl HittingGraph {
    pub fn hits(&self, f: &Hypergraph) -> bool {
        self.certificate.len() == f.num_edges()
            && f.edges().zip(&self.certificate).all(|(e, &(a, b))| {
                a < b && e.contains(&a) && e.contains(&b) && self.graph.has_edge(a, b)
            })
    }
}

fn pairs_of(e: &[Vertex]) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
    (0..e.len()).flat_map(move |i| (i + 1..e.len()).map(move |j| (e[i], e[j])))
}

fn certify(f: &Hypergraph, chosen: &BTreeSet<(Vertex, Vertex)>) -> Option<Vec<(Vertex, Vertex)>> {
    f.edges().map(|e| pairs_of(e).find(|p| chosen.contains(p))).collect()
}

/// Builds a hitting graph with `Δ(G) <= Δ(f)`.
///
/// Greedy selection picks, per unhit hyperedge, the pair with the least
/// loaded endpoints. Repair then drops redundant pairs, most loaded first,
/// until the graph is edge-minimal; in an edge-minimal hitting graph every
/// edge `uv` has a private hyperedge through `u`, so `deg(u) <= Δ(f)`. The
/// exhaustive search is a guarded fallback should that ever fail.
pub fn hitting_graph(f: &Hypergraph, budget: u64) -> Result<HittingGraph> {
    let n = f.n();
    let mut load = vec![0usize; n + 1];
    let mut chosen = BTreeSet::new();
    for e in f.edges() {
        if pairs_of(e).any(|p| chosen.contains(&p)) {
            continue;
        }
        let (a, b) = pairs_of(e)
            .min_by_key(|&(a, b)| {
                let (la, lb) = (load[a as usize], load[b as usize]);
                (la.max(lb), la + lb, a, b)
            })
            .ok_or_else(|| Error::param("edges need at least two vertices"))?;
        chosen.insert((a, b));
        load[a as usize] += 1;
        load[b as usize] += 1;
    }

    // repair: remove pairs whose hyperedges are all hit elsewhere
    let mut order: Vec<(Vertex, Vertex)> = chosen.iter().copied().collect();
    order.sort_by_key(|&(a, b)| std::cmp::Reverse((load[a as usize].max(load[b as usize]), a, b)));
    for pair in order {
        chosen.remove(&pair);
        let still_hit = f
            .edges()
            .filter(|e| e.contains(&pair.0) && e.contains(&pair.1))
            .all(|e| pairs_of(e).any(|p| chosen.contains(&p)));
        if still_hit {
            load[pair.0 as usize] -= 1;
            load[pair.1 as usize] -= 1;
        } else {
            chosen.insert(pair);
        }
    }
    let delta = f.max_degree();
    if load.iter().any(|&l| l > delta) {
        chosen = hitting_search(f, delta, budget)?
            .ok_or_else(|| Error::Invariant("no hitting graph within the degree bound".into()))?;
    }
    let certificate = certify(f, &chosen).ok_or_else(|| Error::Invariant("hitting graph misses an edge".into()))?;
    let graph = Graph::new(n, chosen)?;
    if graph.max_degree() > delta {
        return Err(Error::Invariant("hitting graph exceeds the degree bound".into()));
    }
    Ok(HittingGraph { graph, certificate })
}

/// Exhaustive search for a hitting graph of maximum degree at most `cap`.
fn hitting_search(f: &Hypergraph, cap: usize, budget: u64) -> Result<Option<BTreeSet<(Vertex, Vertex)>>> {
    struct State<'a> {
        f: &'a Hypergraph,
        cap: usize,
        load: Vec<usize>,
        chosen: BTreeSet<(Vertex, Vertex)>,
        nodes: u64,
        budget: u64,
    }
    fn rec(s: &mut State, i: usize) -> Result<bool> {
        if i == s.f.num_edges() {
            return Ok(true);
        }
        let e = s.f.edge(i);
        if pairs_of(e).any(|p| s.chosen.contains(&p)) {
            return rec(s, i + 1);
        }
        for (a, b) in pairs_of(e) {
            if s.load[a as usize] >= s.cap || s.load[b as usize] >= s.cap {
                continue;
            }
            s.nodes += 1;
            if s.nodes > s.budget {
                return Err(Error::BudgetExhausted { budget: s.budget });
            }
            s.chosen.insert((a, b));
            s.load[a as usize] += 1;
            s.load[b as usize] += 1;
            if rec(s, i + 1)? {
                return Ok(true);
            }
            s.chosen.remove(&(a, b));
            s.load[a as usize] -= 1;
            s.load[b as usize] -= 1;
        }
        Ok(false)
    }
    let mut s = State {
        f,
        cap,
        load: vec![0; f.n() + 1],
        chosen: BTreeSet::new(),
        nodes: 0,
        budget,
    };
    Ok(rec(&mut s, 0)?.then_some(s.chosen))
}

/// `σ(f)`: the least maximum degree of a graph hitting `f`.
pub fn sigma_exact(f: &Hypergraph, budget: u64) -> Result<usize> {
    if f.num_edges() == 0 {
        return Ok(0);
    }
    for d in 1..=f.max_degree() {
        if hitting_search(f, d, budget)?.is_some() {
            return Ok(d);
        }
    }
    Err(Error::Invariant("no hitting graph with degree at most the maximum degree".into()))
}

/// `n^(r - r/Δ)`, the growth of the edge count any universal hypergraph for
/// `F^(r)(n, Δ)` must have.
pub fn universality_lower_bound(n: f64, r: usize, delta: usize) -> Result<f64> {
    if delta == 0 {
        return Err(Error::param("delta must be at least 1"));
    }
    Ok(n.powf(r as f64 - r as f64 / delta as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchPath {
    ShadowLift,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleResult {
    pub index: usize,
    pub seed: u64,
    pub edges: usize,
    pub path: SearchPath,
    pub outcome: SearchOutcome,
    pub validated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub n: usize,
    pub r: usize,
    pub delta: usize,
    pub samples: usize,
    pub successes: usize,
    pub fraction: f64,
    /// The host equals `K_r` of its shadow, so the lift path was available.
    pub shadow_lift: bool,
    pub results: Vec<SampleResult>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalityOptions {
    pub budget: u64,
    pub exec: Execution,
}

impl Default for UniversalityOptions {
    fn default() -> Self {
        UniversalityOptions { budget: DEFAULT_BUDGET, exec: Execution::default() }
    }
}

/// Samples members of `F^(r)(n, Δ)` and decides whether each embeds into
/// `h_univ`.
///
/// When `h_univ = K_r(G)` for its shadow `G`, a copy of `F` in `h_univ` is
/// the same as a copy of the shadow of `F` in `G`; the graph search runs
/// first and its result is lifted. Budget exhaustion falls back to direct
/// search on the hypergraph.
pub fn verify_universal_sampled(
    h_univ: &Hypergraph,
    n: usize,
    r: usize,
    delta: usize,
    samples: usize,
    seed: u64,
    opts: UniversalityOptions,
) -> Result<UniversalityReport> {
    if h_univ.n() < n {
        return Err(Error::param(format!("host has {} < n = {n} vertices", h_univ.n())));
    }
    if h_univ.r() != r {
        return Err(Error::param("host uniformity differs from r"));
    }
    let shadow = h_univ.shadow();
    let shadow_lift = r >= 3 && kr_construction(&shadow, r)? == *h_univ;
    let spanning = h_univ.n() == n;
    let results = par::map_range(opts.exec, samples, |i| -> Result<SampleResult> {
        let s = seed::derive(seed, &[i as u64]);
        let f = sample_bounded_degree(n, r, delta, s, None)?;
        let mut path = SearchPath::Direct;
        let mut outcome = SearchOutcome::BudgetExhausted;
        if shadow_lift {
            path = SearchPath::ShadowLift;
            let fs = f.shadow();
            outcome = find_embedding(shadow.as_hypergraph(), fs.as_hypergraph(), spanning, opts.budget)?;
        }
        if outcome == SearchOutcome::BudgetExhausted {
            path = SearchPath::Direct;
            outcome = find_embedding(h_univ, &f, spanning, opts.budget)?;
        }
        let validated = outcome.embedding().is_some_and(|e| validate_embedding(h_univ, &f, e));
        if outcome.is_found() && !validated {
            return Err(Error::Invariant(format!("sample {i}: lifted embedding is invalid")));
        }
        Ok(SampleResult { index: i, seed: s, edges: f.num_edges(), path, outcome, validated })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let successes = results.iter().filter(|r| r.validated).count();
    Ok(UniversalityReport {
        n,
        r,
        delta,
        samples,
        successes,
        fraction: if samples == 0 { 1.0 } else { successes as f64 / samples as f64 },
        shadow_lift,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::hamilton_cycle;

    #[test]
    fn hr_examples() {
        let g = Graph::new(4, [(1, 2)]).unwrap();
        assert_eq!(hr_construction(&g, 3).unwrap().edge_list(), vec![vec![1, 2, 3], vec![1, 2, 4]]);
        assert_eq!(hr_construction(&Graph::complete(6).unwrap(), 3).unwrap(), Hypergraph::complete(6, 3).unwrap());
        assert_eq!(hr_construction(&Graph::new(5, []).unwrap(), 3).unwrap().num_edges(), 0);
    }

    #[test]
    fn kr_examples() {
        assert_eq!(kr_construction(&Graph::complete(4).unwrap(), 3).unwrap(), Hypergraph::complete(4, 3).unwrap());
        let c5 = Graph::new(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        assert_eq!(kr_construction(&c5, 3).unwrap().num_edges(), 0);
    }

    #[test]
    fn hitting_examples() {
        let single = Hypergraph::new(3, 3, [vec![1, 2, 3]]).unwrap();
        let hg = hitting_graph(&single, DEFAULT_BUDGET).unwrap();
        assert!(hg.hits(&single) && hg.graph.num_edges() == 1);
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let hg = hitting_graph(&k4, DEFAULT_BUDGET).unwrap();
        assert!(hg.hits(&k4) && hg.graph.max_degree() <= 3);
        let tight = hamilton_cycle(6, 3, 2).unwrap();
        let hg = hitting_graph(&tight, DEFAULT_BUDGET).unwrap();
        assert!(hg.hits(&tight) && hg.graph.max_degree() <= 3);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_exact(&Hypergraph::complete(4, 3).unwrap(), DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(sigma_exact(&Hypergraph::new(3, 3, [vec![1, 2, 3]]).unwrap(), DEFAULT_BUDGET).unwrap(), 1);
        let k5 = Hypergraph::complete(5, 3).unwrap();
        let s = sigma_exact(&k5, DEFAULT_BUDGET).unwrap();
        assert!((1..=6).contains(&s));
        assert_eq!(sigma_exact(&Hypergraph::empty(3, 4).unwrap(), 10).unwrap(), 0);
    }

    #[test]
    fn lower_bound_values() {
        assert!((universality_lower_bound(100.0, 3, 3).unwrap() - 1e4).abs() < 1e-6);
        assert_eq!(universality_lower_bound(50.0, 3, 1).unwrap(), 1.0);
        assert!((universality_lower_bound(1e4, 3, 2).unwrap() - 1e6).abs() < 1e-3);
    }

    #[test]
    fn universal_trivial_cases() {
        let k = Hypergraph::complete(9, 3).unwrap();
        let rep = verify_universal_sampled(&k, 9, 3, 2, 5, 1, UniversalityOptions::default()).unwrap();
        assert_eq!(rep.fraction, 1.0);
        assert!(rep.shadow_lift);
        let e = Hypergraph::empty(3, 9).unwrap();
        let rep = verify_universal_sampled(&e, 9, 3, 2, 5, 1, UniversalityOptions::default()).unwrap();
        assert_eq!(rep.successes, 0);
    }
}
