//! Finite-instance checks of the three goodness properties of a host.
//!
//! (1) for every profile, `⌊εn⌋` disjoint neighbourhood copies fit in `V_0`
//!     and their link family expands: `|N(W)| >= (p/2)^Δ |W| εn / 4` for
//!     `|W| <= (p/2)^(-Δ) / 2`;
//! (2) families of `k`-sets of `(r-1)`-sets expand into each `V_i`:
//!     `|N(L) ∩ V_i| >= (p/2)^k |L| |V_i| / 4` for `|L| <= (p/2)^(-k) / 2`;
//! (3) any `L` and `W` of size `C' (p/2)^(-k) ln n`, `C' = k(r-1) + 2`,
//!     span at least one edge of the auxiliary graph.

use num_rational::BigRational;
use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::matching::aux_row;
use super::partition::HostPartition;
use crate::combinatorics::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::par::{self, Execution};
use crate::profile::{enumerate_profiles, CanonicalProfile};
use crate::rational;
use crate::search::{Matcher, SearchOutcome};
use crate::seed;

type Visitor<'a> = dyn FnMut(&[Vec<Vec<Vertex>>]) -> Vec<Option<GoodnessWitness>> + 'a;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum GoodnessMode {
    Exhaustive,
    Sampled { samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodnessOptions {
    pub mode: GoodnessMode,
    pub seed: u64,
    /// Largest number of configurations exhaustive mode may visit.
    pub exhaustive_cap: u64,
    pub profile_cap: u64,
    /// Node budget of each neighbourhood-placement search.
    pub budget: u64,
    pub exec: Execution,
}

impl Default for GoodnessOptions {
    fn default() -> Self {
        GoodnessOptions {
            mode: GoodnessMode::Sampled { samples: 200 },
            seed: 0,
            exhaustive_cap: 2_000_000,
            profile_cap: 2_000_000,
            budget: 1_000_000,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessWitness {
    pub description: String,
    pub family: Vec<Vec<Vec<Vertex>>>,
    pub w: Vec<Vertex>,
    pub neighbours: usize,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: u8,
    pub passed: bool,
    pub checked: u64,
    /// No configuration of the required size exists.
    pub vacuous: bool,
    pub witness: Option<GoodnessWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessReport {
    pub p: f64,
    pub delta: usize,
    pub t: usize,
    #[serde(with = "rational::serde_str")]
    pub epsilon: BigRational,
    pub mode: GoodnessMode,
    pub profiles: usize,
    pub properties: Vec<PropertyReport>,
}

impl GoodnessReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }
}

struct Tally {
    checked: u64,
    vacuous: bool,
    witness: Option<GoodnessWitness>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, vacuous: true, witness: None }
    }

    fn into_report(self, property: u8) -> PropertyReport {
        PropertyReport {
            property,
            passed: self.witness.is_none(),
            checked: self.checked,
            vacuous: self.vacuous && self.checked == 0,
            witness: self.witness,
        }
    }

    /// Merges per-sample outcomes, keeping the first failure in sample order.
    fn absorb(&mut self, outcomes: Vec<Option<GoodnessWitness>>) {
        self.vacuous = false;
        self.checked += outcomes.len() as u64;
        if self.witness.is_none() {
            self.witness = outcomes.into_iter().flatten().next();
        }
    }
}

/// Checks properties (1)-(3) on `h` with partition `hp`.
pub fn check_goodness(
    h: &Hypergraph,
    hp: &HostPartition,
    p: f64,
    delta: usize,
    opts: &GoodnessOptions,
) -> Result<GoodnessReport> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!("p = {p} outside (0, 1]")));
    }
    if hp.n() != h.n() {
        return Err(Error::Partition("host partition does not cover the host".into()));
    }
    if delta == 0 {
        return Err(Error::param("delta must be at least 1"));
    }
    if opts.mode == GoodnessMode::Exhaustive && h.n() > 64 {
        return Err(Error::Unsupported(format!(
            "exhaustive goodness needs n <= 64, got {}",
            h.n()
        )));
    }
    let profiles = enumerate_profiles(h.r(), delta, opts.profile_cap)?;
    let ctx = Ctx { h, hp, half_p: p / 2.0, delta, opts };
    let properties = vec![ctx.property_one(&profiles)?, ctx.property_two()?, ctx.property_three()?];
    Ok(GoodnessReport {
        p,
        delta,
        t: hp.t,
        epsilon: hp.epsilon.clone(),
        mode: opts.mode,
        profiles: profiles.len(),
        properties,
    })
}

struct Ctx<'a> {
    h: &'a Hypergraph,
    hp: &'a HostPartition,
    half_p: f64,
    delta: usize,
    opts: &'a GoodnessOptions,
}

fn size_cap(half_p: f64, k: usize) -> usize {
    ((half_p.powi(-(k as i32)) / 2.0).floor() as usize).max(1)
}

fn guard(count: Option<u128>, cap: u64) -> Result<()> {
    match count {
        Some(c) if c <= cap as u128 => Ok(()),
        _ => Err(Error::Unsupported(format!(
            "exhaustive mode infeasible: more than {cap} configurations"
        ))),
    }
}

impl Ctx<'_> {
    fn sample_seed(&self, path: &[u64]) -> u64 {
        seed::derive(self.opts.seed, path)
    }

    fn property_one(&self, profiles: &[CanonicalProfile]) -> Result<PropertyReport> {
        let h = self.h;
        let copies = rational::floor_mul(&self.hp.epsilon, h.n());
        let v0 = self.hp.prefix_mask(0);
        let wcap = size_cap(self.half_p, self.delta);
        let mut tally = Tally::new();
        for (pi, prof) in profiles.iter().enumerate() {
            let fail = |desc: String| GoodnessWitness {
                description: desc,
                family: Vec::new(),
                w: Vec::new(),
                neighbours: 0,
                required: copies as f64,
            };
            if copies == 0 {
                continue;
            }
            let Some(links) = self.place_profile(prof, copies, &v0, pi as u64)? else {
                tally.vacuous = false;
                tally.checked += 1;
                tally.witness.get_or_insert(fail(format!(
                    "no {copies} disjoint copies of profile {prof} inside V_0"
                )));
                continue;
            };
            let mut in_links = vec![false; h.n() + 1];
            for s in links.iter().flatten().flatten() {
                in_links[*s as usize] = true;
            }
            let pool: Vec<Vertex> = h.vertices().filter(|&v| !in_links[v as usize]).collect();
            // right-to-left adjacency of B(h, links, pool)
            let mut adj_w = vec![Vec::new(); pool.len()];
            for (j, fam) in links.iter().enumerate() {
                for w in aux_row(h, fam, &pool) {
                    adj_w[w].push(j);
                }
            }
            let smax = wcap.min(pool.len());
            let required = |s: usize| self.half_p.powi(self.delta as i32) * s as f64 * copies as f64 / 4.0;
            let check = |ws: &[usize]| -> Option<GoodnessWitness> {
                let mut hit = vec![false; links.len()];
                for &w in ws {
                    for &j in &adj_w[w] {
                        hit[j] = true;
                    }
                }
                let got = hit.iter().filter(|&&b| b).count();
                let need = required(ws.len());
                (got as f64 + 1e-9 < need).then(|| GoodnessWitness {
                    description: format!("profile {prof}: |N(W)| = {got} < {need:.3}"),
                    family: links.clone(),
                    w: ws.iter().map(|&i| pool[i]).collect(),
                    neighbours: got,
                    required: need,
                })
            };
            match self.opts.mode {
                GoodnessMode::Exhaustive => {
                    let total = (1..=smax).try_fold(0u128, |acc, s| {
                        binomial(pool.len() as u64, s as u64).and_then(|c| acc.checked_add(c))
                    });
                    guard(total, self.opts.exhaustive_cap)?;
                    let mut out = Vec::new();
                    for s in 1..=smax {
                        for ws in Combinations::new(pool.len() as u32, s) {
                            let ws: Vec<usize> = ws.iter().map(|&x| x as usize - 1).collect();
                            out.push(check(&ws));
                        }
                    }
                    tally.absorb(out);
                }
                GoodnessMode::Sampled { samples } => {
                    if smax == 0 {
                        continue;
                    }
                    let out = par::map_range(self.opts.exec, samples, |i| {
                        let mut rng = seed::rng(self.sample_seed(&[1, pi as u64, i as u64]));
                        let s = rng.random_range(1..=smax);
                        let ws = index::sample(&mut rng, pool.len(), s).into_vec();
                        check(&ws)
                    });
                    tally.absorb(out);
                }
            }
        }
        Ok(tally.into_report(1))
    }

    /// Places `copies` disjoint copies of the closed structure of `prof`
    /// with non-centre vertices in `V_0`; returns the link image families.
    fn place_profile(
        &self,
        prof: &CanonicalProfile,
        copies: usize,
        v0: &[bool],
        tag: u64,
    ) -> Result<Option<Vec<Vec<Vec<Vertex>>>>> {
        let (r, k) = (self.h.r(), prof.k());
        let block = k + 1;
        if copies * block > self.h.n() {
            return Ok(None);
        }
        // copy j: centre j*block + 1, local z at j*block + 2 + z
        let mut edges = Vec::new();
        for j in 0..copies {
            let base = (j * block) as Vertex;
            let lift = |s: &Vec<usize>| s.iter().map(|&z| base + 2 + z as Vertex).collect::<Vec<_>>();
            for s in prof.e2() {
                let mut e = lift(&s);
                e.push(base + 1);
                edges.push(e);
            }
            for s in prof.e1() {
                edges.push(lift(&s));
            }
        }
        let star = Hypergraph::new(r, copies * block, edges)?;
        let mut m = Matcher::new(self.h, &star)?;
        m.budget = self.opts.budget;
        m.shuffle = Some(self.sample_seed(&[0, tag]));
        for j in 0..copies {
            for z in 0..k {
                m.allow((j * block + 2 + z) as Vertex, v0.to_vec());
            }
        }
        match m.run() {
            SearchOutcome::Found(emb) => Ok(Some(
                (0..copies)
                    .map(|j| {
                        let base = (j * block) as Vertex;
                        prof.e2()
                            .iter()
                            .map(|s| {
                                let mut img: Vec<Vertex> =
                                    s.iter().map(|&z| emb.image(base + 2 + z as Vertex)).collect();
                                img.sort_unstable();
                                img
                            })
                            .collect()
                    })
                    .collect(),
            )),
            _ => Ok(None),
        }
    }

    fn property_two(&self) -> Result<PropertyReport> {
        let (h, r) = (self.h, self.h.r());
        let mut tally = Tally::new();
        for i in 1..=self.hp.t {
            let vi = &self.hp.classes[i];
            if vi.is_empty() {
                continue;
            }
            for k in 1..=self.delta {
                let lcap = size_cap(self.half_p, k).min(h.n() / (k * (r - 1)));
                if lcap == 0 {
                    continue;
                }
                let check = |fam: &[Vec<Vec<Vertex>>]| -> Option<GoodnessWitness> {
                    let mut in_fam = vec![false; h.n() + 1];
                    for v in fam.iter().flatten().flatten() {
                        in_fam[*v as usize] = true;
                    }
                    let w: Vec<Vertex> = vi.iter().copied().filter(|&v| !in_fam[v as usize]).collect();
                    let mut hit = vec![false; w.len()];
                    for l in fam {
                        for j in aux_row(h, l, &w) {
                            hit[j] = true;
                        }
                    }
                    let got = hit.iter().filter(|&&b| b).count();
                    let need = self.half_p.powi(k as i32) * fam.len() as f64 * vi.len() as f64 / 4.0;
                    (got as f64 + 1e-9 < need).then(|| GoodnessWitness {
                        description: format!("V_{i}, k = {k}: |N(L) ∩ V_i| = {got} < {need:.3}"),
                        family: fam.to_vec(),
                        w: Vec::new(),
                        neighbours: got,
                        required: need,
                    })
                };
                match self.opts.mode {
                    GoodnessMode::Exhaustive => {
                        let out = self.exhaustive_families(k, lcap, &mut |fam| vec![check(fam)])?;
                        tally.absorb(out);
                    }
                    GoodnessMode::Sampled { samples } => {
                        let out = par::map_range(self.opts.exec, samples, |s| {
                            let mut rng = seed::rng(self.sample_seed(&[2, i as u64, k as u64, s as u64]));
                            let size = rng.random_range(1..=lcap);
                            check(&random_family(&mut rng, h.n(), r, k, size))
                        });
                        tally.absorb(out);
                    }
                }
            }
        }
        Ok(tally.into_report(2))
    }

    fn property_three(&self) -> Result<PropertyReport> {
        let (h, r, n) = (self.h, self.h.r(), self.h.n());
        let mut tally = Tally::new();
        for k in 1..=self.delta {
            let c_prime = (k * (r - 1) + 2) as f64;
            let s = (c_prime * self.half_p.powi(-(k as i32)) * (n as f64).ln()).ceil() as usize;
            let s = s.max(1);
            if s * k * (r - 1) + s > n {
                continue;
            }
            let check = |fam: &[Vec<Vec<Vertex>>], w: &[Vertex]| -> Option<GoodnessWitness> {
                fam.iter().all(|l| aux_row(h, l, w).is_empty()).then(|| GoodnessWitness {
                    description: format!("k = {k}: no edge between |L| = {s} and |W| = {s}"),
                    family: fam.to_vec(),
                    w: w.to_vec(),
                    neighbours: 0,
                    required: 1.0,
                })
            };
            match self.opts.mode {
                GoodnessMode::Exhaustive => {
                    let out = self.exhaustive_families(k, s, &mut |fam| {
                        if fam.len() != s {
                            return Vec::new();
                        }
                        let mut in_fam = vec![false; n + 1];
                        for v in fam.iter().flatten().flatten() {
                            in_fam[*v as usize] = true;
                        }
                        let rest: Vec<Vertex> = h.vertices().filter(|&v| !in_fam[v as usize]).collect();
                        Combinations::new(rest.len() as u32, s)
                            .map(|ws| {
                                let w: Vec<Vertex> = ws.iter().map(|&x| rest[x as usize - 1]).collect();
                                check(fam, &w)
                            })
                            .collect()
                    })?;
                    tally.absorb(out);
                }
                GoodnessMode::Sampled { samples } => {
                    let out = par::map_range(self.opts.exec, samples, |i| {
                        let mut rng = seed::rng(self.sample_seed(&[3, k as u64, i as u64]));
                        let picks = index::sample(&mut rng, n, s * k * (r - 1) + s).into_vec();
                        let verts: Vec<Vertex> = picks.iter().map(|&x| x as Vertex + 1).collect();
                        let (fam_part, w) = verts.split_at(s * k * (r - 1));
                        check(&chunk_family(fam_part, r, k), w)
                    });
                    tally.absorb(out);
                }
            }
        }
        Ok(tally.into_report(3))
    }

    /// Visits every family of up to `max_size` vertex-disjoint members, each
    /// member being `k` vertex-disjoint `(r-1)`-sets.
    fn exhaustive_families(
        &self,
        k: usize,
        max_size: usize,
        visit: &mut Visitor<'_>,
    ) -> Result<Vec<Option<GoodnessWitness>>> {
        let (n, r) = (self.h.n(), self.h.r());
        let sets: Vec<(u64, Vec<Vertex>)> = Combinations::new(n as u32, r - 1)
            .map(|s| (s.iter().fold(0u64, |m, &v| m | 1 << (v - 1)), s))
            .collect();
        let mut members: Vec<(u64, Vec<Vec<Vertex>>)> = Vec::new();
        let mut stack = Vec::new();
        grow_members(&sets, k, 0, 0, &mut stack, &mut members);
        let estimate = (1..=max_size).try_fold(0u128, |acc, s| {
            binomial(members.len() as u64, s as u64).and_then(|c| acc.checked_add(c))
        });
        guard(estimate, self.opts.exhaustive_cap)?;
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        walk_families(&members, max_size, 0, 0, &mut chosen, visit, &mut out);
        Ok(out)
    }
}

fn grow_members(
    sets: &[(u64, Vec<Vertex>)],
    k: usize,
    from: usize,
    mask: u64,
    stack: &mut Vec<usize>,
    out: &mut Vec<(u64, Vec<Vec<Vertex>>)>,
) {
    if stack.len() == k {
        out.push((mask, stack.iter().map(|&i| sets[i].1.clone()).collect()));
        return;
    }
    for i in from..sets.len() {
        if sets[i].0 & mask == 0 {
            stack.push(i);
            grow_members(sets, k, i + 1, mask | sets[i].0, stack, out);
            stack.pop();
        }
    }
}

fn walk_families(
    members: &[(u64, Vec<Vec<Vertex>>)],
    max_size: usize,
    from: usize,
    mask: u64,
    chosen: &mut Vec<Vec<Vec<Vertex>>>,
    visit: &mut Visitor<'_>,
    out: &mut Vec<Option<GoodnessWitness>>,
) {
    if !chosen.is_empty() {
        out.extend(visit(chosen));
    }
    if chosen.len() == max_size {
        return;
    }
    for i in from..members.len() {
        if members[i].0 & mask == 0 {
            chosen.push(members[i].1.clone());
            walk_families(members, max_size, i + 1, mask | members[i].0, chosen, visit, out);
            chosen.pop();
        }
    }
}

fn chunk_family(verts: &[Vertex], r: usize, k: usize) -> Vec<Vec<Vec<Vertex>>> {
    verts
        .chunks(k * (r - 1))
        .map(|member| {
            member
                .chunks(r - 1)
                .map(|s| {
                    let mut s = s.to_vec();
                    s.sort_unstable();
                    s
                })
                .collect()
        })
        .collect()
}

fn random_family(rng: &mut seed::Rng, n: usize, r: usize, k: usize, size: usize) -> Vec<Vec<Vec<Vertex>>> {
    let picks = index::sample(rng, n, size * k * (r - 1)).into_vec();
    let verts: Vec<Vertex> = picks.iter().map(|&x| x as Vertex + 1).collect();
    chunk_family(&verts, r, k)
}
