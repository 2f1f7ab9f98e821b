//! Exact second-moment diagnostics in the uniform `m`-edge model.
//!
//! All quantities are computed by enumeration on tiny instances: the copies
//! of a pattern in `K^(r)_n` are listed explicitly, `E(X)` and `E(X^2)` come
//! from a pair sum grouped by union size, and an independent oracle walks
//! every host with `m` edges.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    binomial, binomial_big, falling_big, next_same_popcount, rank_lex,
    unrank_colex_mask,
};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::par::{self, Execution};
use crate::rational;

/// Size limits for the enumeration oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleCaps {
    pub max_pattern_vertices: usize,
    /// Cap on `N = C(n, r)`.
    pub max_edge_slots: u64,
    pub max_copies: u64,
    /// Cap on the number of injective maps tried while listing copies.
    pub max_maps: u64,
    /// Cap on `C(N, m)` for host enumeration.
    pub max_hosts: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_pattern_vertices: 12,
            max_edge_slots: 25,
            max_copies: 500,
            max_maps: 20_000_000,
            max_hosts: 50_000_000,
        }
    }
}

fn cap(what: &'static str, value: u128, limit: u64) -> Result<()> {
    if value > limit as u128 {
        Err(Error::CapExceeded { what, value, cap: limit as u128 })
    } else {
        Ok(())
    }
}

/// Number of automorphisms of `f`, by backtracking over vertex images.
pub fn automorphisms(f: &Hypergraph) -> u64 {
    let n = f.n();
    let mut image: Vec<Vertex> = vec![0; n + 1];
    let mut used = vec![false; n + 1];
    let mut count = 0;
    aut_rec(f, 1, &mut image, &mut used, &mut count);
    count
}

fn aut_rec(f: &Hypergraph, x: usize, image: &mut [Vertex], used: &mut [bool], count: &mut u64) {
    let n = f.n();
    if x > n {
        *count += 1;
        return;
    }
    for y in 1..=n {
        if used[y] || f.deg(y as Vertex) != f.deg(x as Vertex) {
            continue;
        }
        image[x] = y as Vertex;
        // edges whose largest vertex is x are now fully mapped
        let ok = f.incident(x as Vertex).iter().all(|&ei| {
            let e = f.edge(ei);
            if *e.last().unwrap() as usize != x {
                return true;
            }
            let mut img: Vec<Vertex> = e.iter().map(|&u| image[u as usize]).collect();
            img.sort_unstable();
            f.contains_edge(&img)
        });
        if ok {
            used[y] = true;
            aut_rec(f, x + 1, image, used, count);
            used[y] = false;
        }
    }
}

fn check_pattern(pattern: &Hypergraph, n: usize, caps: &OracleCaps) -> Result<()> {
    if pattern.n() > n {
        return Err(Error::param(format!(
            "pattern has {} vertices, more than n = {n}",
            pattern.n()
        )));
    }
    cap("pattern vertices", pattern.n() as u128, caps.max_pattern_vertices as u64)
}

/// `X_F(K^(r)_n)`: unlabelled copies of `pattern` in the complete hypergraph,
/// `n! / ((n - v)! aut(F))`.
pub fn count_copies(pattern: &Hypergraph, n: usize, caps: &OracleCaps) -> Result<BigUint> {
    check_pattern(pattern, n, caps)?;
    let labelled = falling_big(n as u64, pattern.n() as u64);
    Ok(labelled / automorphisms(pattern))
}

/// One copy: the image vertex set and the image edge set, as bit masks over
/// vertices `0..n` and over the lexicographic ranks of the `r`-sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Copy {
    pub vertices: u64,
    pub edges: u128,
}

/// Lists all copies of `pattern` in `K^(r)_n`, sorted.
pub fn enumerate_copies(pattern: &Hypergraph, n: usize, caps: &OracleCaps) -> Result<Vec<Copy>> {
    check_pattern(pattern, n, caps)?;
    let slots = binomial(n as u64, pattern.r() as u64).unwrap_or(u128::MAX);
    cap("edge slots C(n, r)", slots, caps.max_edge_slots.min(128))?;
    let maps = falling_big(n as u64, pattern.n() as u64);
    cap("injective maps", maps.to_u128().unwrap_or(u128::MAX), caps.max_maps)?;
    let expected = count_copies(pattern, n, caps)?;
    cap("copies", expected.to_u128().unwrap_or(u128::MAX), caps.max_copies)?;

    let mut seen = HashSet::new();
    let mut image = vec![0 as Vertex; pattern.n() + 1];
    let mut used = vec![false; n + 1];
    copies_rec(pattern, n, 1, &mut image, &mut used, &mut seen);
    let mut out: Vec<Copy> = seen.into_iter().collect();
    out.sort_unstable();
    if BigUint::from(out.len()) != expected {
        return Err(Error::Invariant(format!(
            "enumerated {} copies, expected {expected}",
            out.len()
        )));
    }
    Ok(out)
}

fn copies_rec(
    f: &Hypergraph,
    n: usize,
    x: usize,
    image: &mut Vec<Vertex>,
    used: &mut Vec<bool>,
    seen: &mut HashSet<Copy>,
) {
    if x > f.n() {
        let vertices = image[1..].iter().fold(0u64, |m, &y| m | 1 << (y - 1));
        let edges = f.edges().fold(0u128, |m, e| {
            let mut img: Vec<Vertex> = e.iter().map(|&u| image[u as usize]).collect();
            img.sort_unstable();
            m | 1 << rank_lex(n as u32, &img)
        });
        seen.insert(Copy { vertices, edges });
        return;
    }
    for y in 1..=n {
        if !used[y] {
            used[y] = true;
            image[x] = y as Vertex;
            copies_rec(f, n, x + 1, image, used, seen);
            used[y] = false;
        }
    }
}

/// `h(u) = C(N - u, m - u) / C(N, m)`: probability that `u` given edges are
/// all present in a uniform `m`-edge host.
pub fn presence_probability(slots: u64, m: u64, u: u64) -> BigRational {
    if u > m {
        return BigRational::zero();
    }
    BigRational::new(
        binomial_big(slots - u, m - u).into(),
        binomial_big(slots, m).into(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondMomentReport {
    pub n: usize,
    pub r: usize,
    pub m: u64,
    pub slots: u64,
    pub pattern_edges: usize,
    pub copies: u64,
    #[serde(with = "rational::serde_str")]
    pub ex: BigRational,
    #[serde(with = "rational::serde_str")]
    pub ex2: BigRational,
    /// `E(X^2) / E(X)^2`; `None` when `E(X) = 0`.
    #[serde(with = "rational::serde_opt_str")]
    pub f: Option<BigRational>,
    /// `f - 1`, the Chebyshev bound on `P(X = 0)`.
    #[serde(with = "rational::serde_opt_str")]
    pub chebyshev_bound: Option<BigRational>,
    /// Ordered pairs of copies grouped by the size of their edge union.
    pub union_histogram: BTreeMap<u32, u64>,
}

/// Pair-sum computation of `E(X)` and `E(X^2)` in `H(n, m)`.
pub fn second_moment_ratio(
    pattern: &Hypergraph,
    n: usize,
    m: u64,
    caps: &OracleCaps,
    exec: Execution,
) -> Result<SecondMomentReport> {
    let r = pattern.r();
    let copies = enumerate_copies(pattern, n, caps)?;
    let slots = binomial(n as u64, r as u64).unwrap() as u64;
    if m > slots {
        return Err(Error::param(format!("m = {m} exceeds C({n}, {r}) = {slots}")));
    }
    let rows = par::map_slice(exec, &copies, |a| {
        let mut row = BTreeMap::<u32, u64>::new();
        for b in &copies {
            *row.entry((a.edges | b.edges).count_ones()).or_default() += 1;
        }
        row
    });
    let mut hist = BTreeMap::<u32, u64>::new();
    for row in rows {
        for (u, c) in row {
            *hist.entry(u).or_default() += c;
        }
    }
    let e = pattern.num_edges() as u64;
    let ex = presence_probability(slots, m, e) * BigRational::from_integer(copies.len().into());
    let ex2 = hist.iter().fold(BigRational::zero(), |acc, (&u, &c)| {
        acc + presence_probability(slots, m, u as u64) * BigRational::from_integer(c.into())
    });
    let f = (!ex.is_zero()).then(|| &ex2 / (&ex * &ex));
    Ok(SecondMomentReport {
        n,
        r,
        m,
        slots,
        pattern_edges: pattern.num_edges(),
        copies: copies.len() as u64,
        chebyshev_bound: f.as_ref().map(|f| f - BigRational::one()),
        f,
        ex,
        ex2,
        union_histogram: hist,
    })
}

/// Exact moments of `X` obtained by walking every host with `m` edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostEnumeration {
    pub hosts: u64,
    pub zero_hosts: u64,
    #[serde(with = "rational::serde_str")]
    pub ex: BigRational,
    #[serde(with = "rational::serde_str")]
    pub ex2: BigRational,
    #[serde(with = "rational::serde_str")]
    pub p_zero: BigRational,
}

/// Full-host oracle: iterates all `C(N, m)` edge sets as colex bit masks,
/// split into contiguous rank chunks for parallel execution.
pub fn enumerate_hosts(
    pattern: &Hypergraph,
    n: usize,
    m: u64,
    caps: &OracleCaps,
    exec: Execution,
) -> Result<HostEnumeration> {
    let copies = enumerate_copies(pattern, n, caps)?;
    let slots = binomial(n as u64, pattern.r() as u64).unwrap() as u64;
    if m > slots {
        return Err(Error::param(format!("m = {m} exceeds N = {slots}")));
    }
    let total = binomial(slots, m).unwrap();
    cap("hosts C(N, m)", total, caps.max_hosts)?;
    let total = total as u64;
    let chunks = total.div_ceil(4096).clamp(1, 256);
    let per = total.div_ceil(chunks);
    let parts = par::map_range(exec, chunks as usize, |c| {
        let start = c as u64 * per;
        let end = (start + per).min(total);
        let (mut zero, mut sx, mut sx2) = (0u64, 0u128, 0u128);
        if start < end {
            let mut host = unrank_colex_mask(m as u32, start as u128);
            for rank in start..end {
                let x = copies.iter().filter(|c| c.edges & !host == 0).count() as u128;
                zero += (x == 0) as u64;
                sx += x;
                sx2 += x * x;
                if rank + 1 < end {
                    host = next_same_popcount(host, slots as u32).expect("rank in range");
                }
            }
        }
        (zero, sx, sx2)
    });
    let (zero, sx, sx2) = parts
        .into_iter()
        .fold((0, 0u128, 0u128), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let over = |x: u128| BigRational::new(x.into(), total.into());
    Ok(HostEnumeration {
        hosts: total,
        zero_hosts: zero,
        ex: over(sx),
        ex2: over(sx2),
        p_zero: over(zero as u128),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebyshevReport {
    #[serde(with = "rational::serde_str")]
    pub p_zero: BigRational,
    #[serde(with = "rational::serde_opt_str")]
    pub bound: Option<BigRational>,
    /// `P(X = 0) <= f - 1`; `None` when `f` is undefined.
    pub holds: Option<bool>,
    /// The pair-sum moments equal the host-enumeration moments.
    pub moments_match: bool,
    pub hosts: u64,
}

/// Computes `P(X = 0)` exactly by host enumeration and compares it with the
/// Chebyshev bound `f - 1` of `report`.
pub fn chebyshev_check(
    pattern: &Hypergraph,
    report: &SecondMomentReport,
    caps: &OracleCaps,
    exec: Execution,
) -> Result<ChebyshevReport> {
    let hosts = enumerate_hosts(pattern, report.n, report.m, caps, exec)?;
    Ok(ChebyshevReport {
        holds: report.chebyshev_bound.as_ref().map(|b| hosts.p_zero <= *b),
        bound: report.chebyshev_bound.clone(),
        moments_match: hosts.ex == report.ex && hosts.ex2 == report.ex2,
        p_zero: hosts.p_zero,
        hosts: hosts.hosts,
    })
}
