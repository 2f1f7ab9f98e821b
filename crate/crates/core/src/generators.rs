//! Builders for the spanning families and the random models.
//!
//! Every builder is a pure function of its arguments; random builders draw
//! from a ChaCha stream seeded by the caller's seed.

use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, unrank_lex, Combinations};
use crate::error::{Error, Result};
use crate::hypergraph::{Graph, Hypergraph, Vertex};
use crate::seed;

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

/// The binomial random hypergraph `H^(r)(n, p)`.
///
/// One uniform variate is drawn per potential edge in lexicographic order,
/// so for a fixed seed the hosts for `p1 < p2` are nested.
pub fn gnp(n: usize, r: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    need((0.0..=1.0).contains(&p), || format!("probability {p} outside [0, 1]"))?;
    need(n >= r, || format!("n = {n} must be at least r = {r}"))?;
    let mut rng = seed::rng(seed);
    let edges: BTreeSet<Vec<Vertex>> = Combinations::new(n as u32, r)
        .filter(|_| rng.random::<f64>() < p)
        .collect();
    Hypergraph::from_edge_set(r, n, edges)
}

/// Random graph `G(n, p)`.
pub fn gnp_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    Graph::from_hypergraph(gnp(n, 2, p, seed)?)
}

/// Uniformly random hypergraph with exactly `m` edges.
pub fn gnm(n: usize, r: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    need(n >= r, || format!("n = {n} must be at least r = {r}"))?;
    let total = binomial(n as u64, r as u64)
        .filter(|&t| t <= usize::MAX as u128)
        .ok_or_else(|| Error::param("C(n, r) too large"))? as usize;
    need(m <= total, || format!("m = {m} exceeds C({n}, {r}) = {total}"))?;
    let mut rng = seed::rng(seed);
    let edges: BTreeSet<Vec<Vertex>> = index::sample(&mut rng, total, m)
        .into_iter()
        .map(|i| unrank_lex(n as u32, r, i as u64))
        .collect();
    Hypergraph::from_edge_set(r, n, edges)
}

/// Whether `hamilton_cycle(n, r, ell)` is defined.
///
/// Besides `(r - ell) | n`, the cycle needs `n >= 2r - ell` (or a single
/// edge, `n = r` with `ell = 0`) so that consecutive windows are distinct
/// and overlap in exactly `ell` vertices.
pub fn hamilton_valid(n: usize, r: usize, ell: usize) -> bool {
    r >= 2 && ell < r && n >= r && n.is_multiple_of(r - ell) && (n >= 2 * r - ell || (n == r && ell == 0))
}

/// The `ell`-overlapping Hamilton cycle `C^(r, ell)` on `1..=n`.
pub fn hamilton_cycle(n: usize, r: usize, ell: usize) -> Result<Hypergraph> {
    need(r >= 2, || "r must be at least 2".into())?;
    need(ell < r, || format!("overlap {ell} must be below r = {r}"))?;
    need(n >= r, || format!("n = {n} must be at least r = {r}"))?;
    need(n.is_multiple_of(r - ell), || {
        format!("r - ell = {} does not divide n = {n}", r - ell)
    })?;
    need(hamilton_valid(n, r, ell), || {
        format!("n = {n} too small for distinct {ell}-overlapping windows of size {r}")
    })?;
    let step = r - ell;
    let edges = (0..n / step).map(|k| {
        (0..r)
            .map(|j| ((k * step + j) % n) as Vertex + 1)
            .collect::<Vec<_>>()
    });
    Hypergraph::new(r, n, edges)
}

/// Cube-hypergraph `Q^(r)(d)` on `[r]^d`; edges are the axis-parallel lines.
pub fn cube_hypergraph(r: usize, d: usize) -> Result<Hypergraph> {
    need(r >= 2 && d >= 1, || "cube needs r >= 2 and d >= 1".into())?;
    let n = (r as u64)
        .checked_pow(d as u32)
        .filter(|&n| n <= Vertex::MAX as u64 / 2)
        .ok_or_else(|| Error::param("r^d too large"))? as usize;
    let mut edges = Vec::with_capacity(d * n / r);
    let mut stride = 1usize;
    for _ in 0..d {
        for v in 0..n {
            if (v / stride).is_multiple_of(r) {
                edges.push((0..r).map(|t| (v + t * stride) as Vertex + 1).collect());
            }
        }
        stride *= r;
    }
    Hypergraph::new(r, n, edges)
}

/// The `(r-1)`-overlapping hyperlattice: all horizontal and vertical runs of
/// `r` consecutive cells in an `m x m` grid, `m = k - 2 + r`.
pub fn lattice(r: usize, k: usize) -> Result<Hypergraph> {
    need(r >= 2 && k >= 2, || "lattice needs r >= 2 and k >= 2".into())?;
    let m = k - 2 + r;
    let id = |i: usize, j: usize| (i * m + j) as Vertex + 1;
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..=m - r {
            edges.push((0..r).map(|t| id(i, j + t)).collect());
            edges.push((0..r).map(|t| id(j + t, i)).collect());
        }
    }
    Hypergraph::new(r, m * m, edges)
}

/// Random stacked triangulation of the sphere with `n` vertices (`r = 3`).
pub fn sphere_apollonian(n: usize, seed: u64) -> Result<Hypergraph> {
    need(n >= 4, || format!("a sphere needs n >= 4, got {n}"))?;
    let mut faces: Vec<[Vertex; 3]> = vec![[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];
    let mut rng = seed::rng(seed);
    for v in 5..=n as Vertex {
        let i = rng.random_range(0..faces.len());
        let [a, b, c] = faces[i];
        faces[i] = [a, b, v];
        faces.push([a, c, v]);
        faces.push([b, c, v]);
    }
    Hypergraph::new(3, n, faces.into_iter().map(|f| f.to_vec()))
}

/// Necessary conditions for a sphere: Euler's relation
/// `2 v - 4 = (r - 2) e` and every shadow pair covered by exactly two edges.
pub fn validate_sphere(h: &Hypergraph) -> bool {
    let r = h.r();
    if r < 3 || 2 * h.n() < 4 || 2 * h.n() - 4 != (r - 2) * h.num_edges() {
        return false;
    }
    let mut cover: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for e in h.edges() {
        for i in 0..r {
            for j in i + 1..r {
                *cover.entry((e[i], e[j])).or_default() += 1;
            }
        }
    }
    cover.values().all(|&c| c == 2)
}

/// Whether `power_hamilton_cycle(n, r, i)` is defined.
pub fn power_valid(n: usize, r: usize, i: usize) -> bool {
    r >= 2 && i >= 1 && n > 2 * (r + i - 2)
}

/// The `i`-th power of the tight Hamilton cycle: every `r`-set whose
/// smallest covering cyclic arc spans at most `r + i - 2` steps.
pub fn power_hamilton_cycle(n: usize, r: usize, i: usize) -> Result<Hypergraph> {
    need(power_valid(n, r, i), || {
        format!(
            "power cycle needs r >= 2, i >= 1 and n > 2(r + i - 2) = {}",
            2 * (r + i).saturating_sub(2)
        )
    })?;
    let span = r + i - 2;
    let mut edges = BTreeSet::new();
    for a in 0..n {
        // leftmost vertex a, the other r - 1 within the next `span` steps
        for offs in Combinations::new(span as u32, r - 1) {
            let mut e: Vec<Vertex> = std::iter::once(a)
                .chain(offs.iter().map(|&o| (a + o as usize) % n))
                .map(|x| x as Vertex + 1)
                .collect();
            e.sort_unstable();
            edges.insert(e);
        }
    }
    Hypergraph::from_edge_set(r, n, edges)
}

/// `n / t` vertex-disjoint copies of `K^(r)_t` on consecutive blocks.
pub fn kfactor(n: usize, r: usize, t: usize) -> Result<Hypergraph> {
    need(t >= r, || format!("block size t = {t} must be at least r = {r}"))?;
    need(n.is_multiple_of(t), || format!("t = {t} does not divide n = {n}"))?;
    let mut edges = Vec::new();
    for b in 0..n / t {
        let base = (b * t) as Vertex;
        for c in Combinations::new(t as u32, r) {
            edges.push(c.into_iter().map(|x| x + base).collect());
        }
    }
    Hypergraph::new(r, n, edges)
}

/// Default proposal budget for [`sample_bounded_degree`].
pub fn default_proposals(n: usize, delta: usize) -> u64 {
    50 * n as u64 * delta as u64
}

/// A random member of `F^(r)(n, delta)` by degree-capped rejection.
///
/// Uniform `r`-sets are proposed `proposals` times (default
/// `50 n delta`); a proposal is accepted iff it is new and all its vertices
/// still have degree below `delta`.
pub fn sample_bounded_degree(
    n: usize,
    r: usize,
    delta: usize,
    seed: u64,
    proposals: Option<u64>,
) -> Result<Hypergraph> {
    need(delta >= 1, || "delta must be at least 1".into())?;
    let budget = proposals.unwrap_or_else(|| default_proposals(n, delta));
    let mut edges = BTreeSet::new();
    if n >= r {
        let mut rng = seed::rng(seed);
        let mut load = vec![0usize; n + 1];
        for _ in 0..budget {
            let mut e: Vec<Vertex> = index::sample(&mut rng, n, r)
                .into_iter()
                .map(|x| x as Vertex + 1)
                .collect();
            if e.iter().any(|&v| load[v as usize] >= delta) {
                continue;
            }
            e.sort_unstable();
            if edges.insert(e.clone()) {
                for v in e {
                    load[v as usize] += 1;
                }
            }
        }
    }
    Hypergraph::from_edge_set(r, n, edges)
}

/// Named structure families, used by threshold curves and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    TightHamilton,
    LooseHamilton,
    PerfectMatching,
    Hamilton { ell: usize },
    Power { i: usize },
    KFactor { t: usize },
    Complete,
}

impl Family {
    /// Builds the `n`-vertex, `r`-uniform member of the family.
    pub fn build(&self, n: usize, r: usize) -> Result<Hypergraph> {
        match *self {
            Family::TightHamilton => hamilton_cycle(n, r, r - 1),
            Family::LooseHamilton => hamilton_cycle(n, r, 1),
            Family::PerfectMatching => hamilton_cycle(n, r, 0),
            Family::Hamilton { ell } => hamilton_cycle(n, r, ell),
            Family::Power { i } => power_hamilton_cycle(n, r, i),
            Family::KFactor { t } => kfactor(n, r, t),
            Family::Complete => Hypergraph::complete(n, r),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::TightHamilton => "tight-hamilton".into(),
            Family::LooseHamilton => "loose-hamilton".into(),
            Family::PerfectMatching => "perfect-matching".into(),
            Family::Hamilton { ell } => format!("hamilton:{ell}"),
            Family::Power { i } => format!("power:{i}"),
            Family::KFactor { t } => format!("kfactor:{t}"),
            Family::Complete => "complete".into(),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = || -> Result<usize> {
            arg.ok_or_else(|| Error::param(format!("family `{head}` needs a `:<int>` argument")))?
                .parse()
                .map_err(|_| Error::param(format!("bad family argument in `{s}`")))
        };
        Ok(match head {
            "tight-hamilton" => Family::TightHamilton,
            "loose-hamilton" => Family::LooseHamilton,
            "perfect-matching" => Family::PerfectMatching,
            "complete" => Family::Complete,
            "hamilton" => Family::Hamilton { ell: num()? },
            "power" => Family::Power { i: num()? },
            "kfactor" => Family::KFactor { t: num()? },
            _ => return Err(Error::param(format!("unknown family `{s}`"))),
        })
    }
}
