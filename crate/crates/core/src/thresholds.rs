//! Densities and threshold formulas.
//!
//! `e_H(v)` is computed exactly by branch-and-bound; every density is an
//! exact rational so that ties at small `n` are resolved correctly.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, binomial_big};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::par::{self, Execution};
use crate::rational::{self, from_ratio};

/// Unlimited node budget for [`e_sub_budgeted`].
pub const UNLIMITED: u64 = u64::MAX;

/// Maximum number of edges spanned by a `v`-subset of the vertices.
pub fn e_sub(h: &Hypergraph, v: usize) -> Result<usize> {
    e_sub_budgeted(h, v, UNLIMITED)
}

/// [`e_sub`] with a cap on branch-and-bound nodes.
pub fn e_sub_budgeted(h: &Hypergraph, v: usize, budget: u64) -> Result<usize> {
    let (r, n) = (h.r(), h.n());
    if v < r || v > n {
        return Err(Error::InvalidParameter(format!(
            "subset size {v} outside [{r}, {n}]"
        )));
    }
    if v == n {
        return Ok(h.num_edges());
    }
    let lower = peeling_bounds(h)[v];
    let mut order: Vec<Vertex> = h.vertices().collect();
    order.sort_by_key(|&x| (std::cmp::Reverse(h.deg(x)), x));
    let mut pos = vec![0usize; n + 1];
    for (i, &x) in order.iter().enumerate() {
        pos[x as usize] = i;
    }
    let cap = binomial(v as u64, r as u64).map_or(usize::MAX, |c| c.min(usize::MAX as u128) as usize);
    let mut s = DenseSearch {
        h,
        order,
        pos,
        chosen: vec![false; n + 1],
        target: v,
        cap,
        best: lower,
        nodes: 0,
        budget,
        owners: vec![0; n],
    };
    s.dfs(0, 0, 0)?;
    Ok(s.best)
}

/// Greedy min-degree peeling; entry `v` is the edge count of the surviving
/// `v`-set, a lower bound on `e_H(v)`.
fn peeling_bounds(h: &Hypergraph) -> Vec<usize> {
    let n = h.n();
    let mut alive_edge = vec![true; h.num_edges()];
    let mut alive = vec![true; n + 1];
    let mut deg: Vec<usize> = (0..=n).map(|x| if x == 0 { 0 } else { h.deg(x as Vertex) }).collect();
    let mut edges = h.num_edges();
    let mut out = vec![0; n + 1];
    out[n] = edges;
    for size in (1..n).rev() {
        let x = (1..=n)
            .filter(|&x| alive[x])
            .min_by_key(|&x| (deg[x], x))
            .expect("non-empty");
        alive[x] = false;
        for &ei in h.incident(x as Vertex) {
            if alive_edge[ei] {
                alive_edge[ei] = false;
                edges -= 1;
                for &y in h.edge(ei) {
                    deg[y as usize] -= 1;
                }
            }
        }
        out[size] = edges;
    }
    out
}

struct DenseSearch<'a> {
    h: &'a Hypergraph,
    order: Vec<Vertex>,
    pos: Vec<usize>,
    chosen: Vec<bool>,
    target: usize,
    cap: usize,
    best: usize,
    nodes: u64,
    budget: u64,
    owners: Vec<usize>,
}

impl DenseSearch<'_> {
    /// Upper bound on edges gained from `s` more picks among `order[i..]`.
    ///
    /// Each still-possible edge is charged to its earliest undecided vertex;
    /// a completed edge needs that vertex picked, so the top-`s` charges
    /// bound the gain.
    fn gain_bound(&mut self, i: usize, s: usize) -> usize {
        let n = self.order.len();
        self.owners[i..n].iter_mut().for_each(|c| *c = 0);
        for j in i..n {
            let w = self.order[j];
            'edges: for &ei in self.h.incident(w) {
                for &y in self.h.edge(ei) {
                    let py = self.pos[y as usize];
                    if py < i && !self.chosen[y as usize] {
                        continue 'edges;
                    }
                    if py >= i && py < j {
                        continue 'edges;
                    }
                }
                self.owners[j] += 1;
            }
        }
        let mut tail = self.owners[i..n].to_vec();
        tail.sort_unstable_by(|a, b| b.cmp(a));
        tail.iter().take(s).sum()
    }

    fn dfs(&mut self, i: usize, picked: usize, cur: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        if picked == self.target {
            self.best = self.best.max(cur);
            return Ok(());
        }
        let s = self.target - picked;
        if self.order.len() - i < s {
            return Ok(());
        }
        let ub = (cur + self.gain_bound(i, s)).min(self.cap);
        if ub <= self.best {
            return Ok(());
        }
        let w = self.order[i];
        let gain = self
            .h
            .incident(w)
            .iter()
            .filter(|&&ei| self.h.edge(ei).iter().all(|&y| y == w || self.chosen[y as usize]))
            .count();
        self.chosen[w as usize] = true;
        self.dfs(i + 1, picked + 1, cur + gain)?;
        self.chosen[w as usize] = false;
        self.dfs(i + 1, picked, cur)
    }
}

/// `γ(H)` with the full `e_H(v)` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(with = "rational::serde_str")]
    pub gamma: BigRational,
    pub argmax_v: usize,
    pub e_sub_table: BTreeMap<usize, usize>,
    #[serde(with = "rational::serde_str")]
    pub alpha: BigRational,
}

pub fn gamma(h: &Hypergraph) -> Result<DensityReport> {
    gamma_with(h, Execution::default(), UNLIMITED)
}

/// [`gamma`] with an explicit execution mode and per-`v` node budget.
pub fn gamma_with(h: &Hypergraph, exec: Execution, budget: u64) -> Result<DensityReport> {
    let (r, n) = (h.r(), h.n());
    if n <= r {
        return Err(Error::InvalidParameter(format!(
            "gamma needs n >= r + 1 (n = {n}, r = {r})"
        )));
    }
    let values = par::map_range(exec, n - r, |i| e_sub_budgeted(h, r + 1 + i, budget));
    let mut table = BTreeMap::new();
    let mut best: Option<(BigRational, usize)> = None;
    for (i, e) in values.into_iter().enumerate() {
        let v = r + 1 + i;
        let e = e?;
        table.insert(v, e);
        let q = from_ratio(e as u64, (v - 2) as u64);
        if best.as_ref().is_none_or(|(b, _)| q > *b) {
            best = Some((q, v));
        }
    }
    let (gamma, argmax_v) = best.expect("non-empty range");
    let alpha = BigRational::new(h.num_edges().into(), binomial_big(n as u64, r as u64).into());
    Ok(DensityReport { gamma, argmax_v, e_sub_table: table, alpha })
}

/// Families with a known value of `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GammaFamily {
    Hamilton { n: usize, r: usize, ell: usize },
    Lattice { r: usize, k: usize },
    Sphere { r: usize, n: usize },
    Power { n: usize, r: usize, i: usize },
    Complete { n: usize, r: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    /// The value is `γ` itself.
    Exact,
    /// `γ` is at most the value.
    UpperBound,
    /// The value is the leading term; `γ` differs by `O(1/n)`.
    LeadingTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    #[serde(with = "rational::serde_str")]
    pub value: BigRational,
    pub kind: FormKind,
}

/// Closed-form value of `γ` for a family.
///
/// For Hamilton cycles the whole cycle gives `n / ((r - ell)(n - 2))`, which
/// is the maximum when `ell >= 2`. With `ell = 1` and more than four edges
/// two consecutive edges do better (`2 / (2r - 3)`); with `ell = 0` a single
/// edge plus one more vertex gives `1 / (r - 1)`.
pub fn gamma_closed_form(family: GammaFamily) -> Result<ClosedForm> {
    use crate::generators::{hamilton_valid, power_valid};
    let exact = |value| Ok(ClosedForm { value, kind: FormKind::Exact });
    match family {
        GammaFamily::Hamilton { n, r, ell } => {
            if !hamilton_valid(n, r, ell) || n <= r {
                return Err(Error::param(format!("no Hamilton cycle with gamma for n={n} r={r} ell={ell}")));
            }
            let edges = n / (r - ell);
            let whole = from_ratio(n as u64, ((r - ell) * (n - 2)) as u64);
            match ell {
                0 => exact(from_ratio(1, (r - 1) as u64)),
                1 if edges > 4 => exact(from_ratio(2, (2 * r - 3) as u64)),
                _ => exact(whole),
            }
        }
        GammaFamily::Lattice { r, k } => {
            if r < 2 || k < 2 {
                return Err(Error::param("lattice needs r >= 2 and k >= 2"));
            }
            Ok(ClosedForm { value: from_ratio(2, 1), kind: FormKind::UpperBound })
        }
        GammaFamily::Sphere { r, n } => {
            if r < 3 || n < r + 1 {
                return Err(Error::param("sphere needs r >= 3 and n >= r + 1"));
            }
            exact(from_ratio(2, (r - 2) as u64))
        }
        GammaFamily::Power { n, r, i } => {
            if !power_valid(n, r, i) {
                return Err(Error::param(format!("invalid power cycle n={n} r={r} i={i}")));
            }
            let lead = binomial((r + i - 2) as u64, (r - 1) as u64).unwrap_or(0);
            Ok(ClosedForm {
                value: BigRational::from_integer(lead.into()),
                kind: FormKind::LeadingTerm,
            })
        }
        GammaFamily::Complete { n, r } => {
            if r < 2 || n <= r {
                return Err(Error::param("complete hypergraph needs n > r >= 2"));
            }
            // C(v, r) / (v - 2) increases in v
            exact(BigRational::new(
                binomial_big(n as u64, r as u64).into(),
                (n as u64 - 2).into(),
            ))
        }
    }
}

/// `n^(-1/γ)`, the expectation threshold for containment.
pub fn expectation_threshold(gamma: &BigRational, n: f64) -> Result<f64> {
    if gamma <= &BigRational::zero() {
        return Err(Error::param("gamma must be positive"));
    }
    Ok(n.powf(-1.0 / rational::to_f64(gamma)))
}

/// `n^(-r/Δ)`, the sharp threshold for spanning `Δ`-regular structures.
pub fn sharp_threshold_regular(n: f64, r: usize, delta: usize) -> Result<f64> {
    if delta == 0 {
        return Err(Error::param("delta must be at least 1"));
    }
    Ok(n.powf(-(r as f64) / delta as f64))
}

/// Plug-in evaluation of the two hypotheses of the containment theorem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionsReport {
    pub n: usize,
    pub r: usize,
    pub p: f64,
    pub edges: usize,
    #[serde(with = "rational::serde_str")]
    pub alpha: BigRational,
    /// `α C(n, r) > n / r`
    pub edge_condition: bool,
    /// `α C(n, r) - n / r`
    pub edge_slack: f64,
    #[serde(with = "rational::serde_str")]
    pub gamma: BigRational,
    pub max_degree: usize,
    /// `n p^γ Δ^(-4)`; the hypothesis asks for this to diverge.
    pub growth: f64,
}

/// Evaluates both hypotheses at `(n, p)`. `gamma` is computed when `None`.
pub fn check_riordan_conditions(
    h: &Hypergraph,
    p: f64,
    gamma_value: Option<BigRational>,
) -> Result<ConditionsReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("probability {p} outside [0, 1]")));
    }
    let (n, r) = (h.n(), h.r());
    let gamma_value = match gamma_value {
        Some(g) => g,
        None => gamma(h)?.gamma,
    };
    let e = h.num_edges();
    let rhs = n as f64 / r as f64;
    let delta = h.max_degree();
    let growth = if delta == 0 {
        f64::INFINITY
    } else {
        n as f64 * p.powf(rational::to_f64(&gamma_value)) / (delta as f64).powi(4)
    };
    Ok(ConditionsReport {
        n,
        r,
        p,
        edges: e,
        alpha: BigRational::new(e.into(), binomial_big(n as u64, r as u64).into()),
        edge_condition: (e * r) > n,
        edge_slack: e as f64 - rhs,
        gamma: gamma_value,
        max_degree: delta,
        growth,
    })
}

/// `m^(1)(H) = max e(F') / (v(F') - 1)` over subhypergraphs on at least `r`
/// vertices; zero when there are none.
pub fn fractional_density_m1(h: &Hypergraph) -> Result<BigRational> {
    let mut best = BigRational::zero();
    for v in h.r()..=h.n() {
        let q = from_ratio(e_sub(h, v)? as u64, (v - 1) as u64);
        if q > best {
            best = q;
        }
    }
    Ok(best)
}

/// Component statistics of a subhypergraph spanning all `n` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphStats {
    pub k1: usize,
    pub kr: usize,
    pub rweight: usize,
    pub ecount: usize,
}

impl SubgraphStats {
    pub fn of(h: &Hypergraph) -> Self {
        let comps = h.components();
        let k1 = comps.iter().filter(|c| c.len() == 1 && h.deg(c[0]) == 0).count();
        let kr = comps.len() - k1;
        SubgraphStats {
            k1,
            kr,
            rweight: h.n() - k1 - (h.r() - 1) * kr,
            ecount: h.num_edges(),
        }
    }
}

/// `Δ/r ≤ γ ≤ (Δ/r)(Δ^(1/(r-1)) + 1)/(Δ^(1/(r-1)) - 1)` for `Δ`-regular `H`,
/// evaluated in floating point; `None` when the upper bound is undefined.
pub fn regular_gamma_bounds(r: usize, delta: usize) -> Option<(f64, f64)> {
    let d = delta as f64;
    let root = d.powf(1.0 / (r as f64 - 1.0));
    (delta >= 2 && r >= 2).then(|| (d / r as f64, d / r as f64 * (root + 1.0) / (root - 1.0)))
}

/// `2 / (2r - 3)`, the lower bound on `γ` whenever `e(H) > n / r`.
pub fn dense_gamma_floor(r: usize) -> BigRational {
    from_ratio(2, (2 * r - 3) as u64)
}

impl DensityReport {
    /// `true` iff `gamma` equals the table maximum (report self-consistency).
    pub fn is_consistent(&self) -> bool {
        self.e_sub_table
            .iter()
            .map(|(&v, &e)| from_ratio(e as u64, (v - 2) as u64))
            .max()
            .is_some_and(|m| m == self.gamma)
            && self.alpha >= BigRational::zero()
            && self.alpha <= BigRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cube_hypergraph, hamilton_cycle};

    #[test]
    fn e_sub_examples() {
        let tight = hamilton_cycle(6, 3, 2).unwrap();
        assert_eq!(e_sub(&tight, 4).unwrap(), 2);
        assert_eq!(e_sub(&Hypergraph::complete(5, 3).unwrap(), 5).unwrap(), 10);
        assert_eq!(e_sub(&cube_hypergraph(3, 2).unwrap(), 9).unwrap(), 6);
        assert!(e_sub(&tight, 2).is_err());
        assert!(e_sub(&tight, 7).is_err());
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&hamilton_cycle(6, 3, 2).unwrap()).unwrap();
        assert_eq!(g.gamma, from_ratio(3, 2));
        assert!(g.is_consistent());
        assert_eq!(gamma(&Hypergraph::complete(4, 3).unwrap()).unwrap().gamma, from_ratio(2, 1));
        let q = gamma(&cube_hypergraph(3, 2).unwrap()).unwrap();
        assert_eq!((q.gamma.clone(), q.argmax_v), (from_ratio(6, 7), 9));
        assert!(gamma(&Hypergraph::complete(3, 3).unwrap()).is_err());
    }

    #[test]
    fn budget_is_reported() {
        let h = hamilton_cycle(12, 3, 2).unwrap();
        assert!(matches!(e_sub_budgeted(&h, 6, 3), Err(Error::BudgetExhausted { budget: 3 })));
    }

    #[test]
    fn closed_form_examples() {
        let h = gamma_closed_form(GammaFamily::Hamilton { n: 6, r: 3, ell: 2 }).unwrap();
        assert_eq!((h.value, h.kind), (from_ratio(3, 2), FormKind::Exact));
        let s = gamma_closed_form(GammaFamily::Sphere { r: 3, n: 10 }).unwrap();
        assert_eq!(s.value, from_ratio(2, 1));
        let p = gamma_closed_form(GammaFamily::Power { n: 8, r: 3, i: 2 }).unwrap();
        assert_eq!((p.value, p.kind), (from_ratio(3, 1), FormKind::LeadingTerm));
        let l = gamma_closed_form(GammaFamily::Lattice { r: 3, k: 3 }).unwrap();
        assert_eq!(l.kind, FormKind::UpperBound);
    }

    #[test]
    fn threshold_formulas() {
        let t = expectation_threshold(&from_ratio(2, 1), 1e4).unwrap();
        assert!((t - 0.01).abs() < 1e-12);
        let t = expectation_threshold(&from_ratio(3, 2), 64.0).unwrap();
        assert!((t - 1.0 / 16.0).abs() < 1e-12);
        assert!(expectation_threshold(&BigRational::zero(), 10.0).is_err());
        assert!((sharp_threshold_regular(100.0, 2, 2).unwrap() - 0.01).abs() < 1e-12);
        assert!((sharp_threshold_regular(50.0, 3, 3).unwrap() - 0.02).abs() < 1e-12);
        // cube: n = r^d, Δ = d gives r^-r
        let c = sharp_threshold_regular(3f64.powi(7), 3, 7).unwrap();
        assert!((c - 3f64.powi(-3)).abs() < 1e-12);
    }

    #[test]
    fn conditions_examples() {
        let h = hamilton_cycle(100, 3, 2).unwrap();
        let c = check_riordan_conditions(&h, 0.5, Some(from_ratio(100, 98))).unwrap();
        assert!(c.edge_condition);
        assert!((c.edge_slack - (100.0 - 100.0 / 3.0)).abs() < 1e-9);
        let expected = 100.0 * 0.5f64.powf(100.0 / 98.0) / 81.0;
        assert!((c.growth - expected).abs() < 1e-12);
        let empty = Hypergraph::empty(3, 6).unwrap();
        assert!(!check_riordan_conditions(&empty, 0.5, None).unwrap().edge_condition);
    }

    #[test]
    fn m1_examples() {
        let single = Hypergraph::new(3, 3, [vec![1, 2, 3]]).unwrap();
        assert_eq!(fractional_density_m1(&single).unwrap(), from_ratio(1, 2));
        let k4 = Hypergraph::complete(4, 3).unwrap();
        assert_eq!(fractional_density_m1(&k4).unwrap(), from_ratio(4, 3));
        assert!(fractional_density_m1(&Hypergraph::empty(3, 5).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn subgraph_stats() {
        let h = Hypergraph::new(3, 8, [vec![1, 2, 3], vec![3, 4, 5]]).unwrap();
        let s = SubgraphStats::of(&h);
        assert_eq!((s.k1, s.kr, s.rweight, s.ecount), (3, 1, 3, 2));
    }
}
