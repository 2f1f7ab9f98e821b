//! Vertex profiles and their canonical forms.
//!
//! The profile of `v` is its neighbourhood `N(v)`, the edges induced on that
//! neighbourhood, and the link of `v`, all re-indexed into local coordinates
//! `0..k`. Two profiles are equivalent when one relabelling of the local
//! vertices maps both edge families onto the other profile's families at
//! once. Canonical forms decide this exactly: equivalent profiles have
//! byte-identical forms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Refinement signature: own colour and the sorted colour pattern around it.
type Signature = (usize, Vec<(u8, Vec<usize>)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub center: Vertex,
    pub r: usize,
    /// `N(center)` in ascending order; local index `i` is `zvertices[i]`.
    pub zvertices: Vec<Vertex>,
    /// Edges of `H[N(center)]` in local coordinates.
    pub e1: Vec<Vec<usize>>,
    /// The link of the center in local coordinates.
    pub e2: Vec<Vec<usize>>,
}

pub fn profile(h: &Hypergraph, v: Vertex) -> Result<Profile> {
    h.check_vertex(v)?;
    let zvertices = h.neighborhood(v);
    let local = |w: Vertex| zvertices.binary_search(&w).expect("neighbour in N(v)");
    let members = h.mask(&zvertices);
    let mut e1: Vec<Vec<usize>> = h
        .induced_edges(&members)
        .into_iter()
        .map(|i| h.edge(i).iter().map(|&w| local(w)).collect())
        .collect();
    let mut e2: Vec<Vec<usize>> = h
        .link_unchecked(v)
        .into_iter()
        .map(|s| s.into_iter().map(local).collect())
        .collect();
    e1.sort();
    e2.sort();
    Ok(Profile {
        center: v,
        r: h.r(),
        zvertices,
        e1,
        e2,
    })
}

impl Profile {
    pub fn local_size(&self) -> usize {
        self.zvertices.len()
    }

    pub fn canonical(&self) -> CanonicalProfile {
        CanonicalProfile::from_parts(self.r, self.zvertices.len(), &self.e1, &self.e2)
    }
}

pub fn canonical_profile(p: &Profile) -> CanonicalProfile {
    p.canonical()
}

/// Canonical encoding of a local structure `(k, e1, e2)`.
///
/// The code is `[r, k, |e2|, e2..., |e1|, e1...]` with every set relabelled
/// and sorted; it is the lexicographic minimum over all relabellings that
/// respect the colour-refinement cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalProfile {
    code: Vec<u32>,
}

impl CanonicalProfile {
    pub fn from_parts(r: usize, k: usize, e1: &[Vec<usize>], e2: &[Vec<usize>]) -> Self {
        let cells = refine_cells(k, e1, e2);
        let mut best: Option<Vec<u32>> = None;
        let mut order: Vec<usize> = Vec::with_capacity(k);
        let mut used = vec![false; k];
        search_cells(&cells, 0, &mut order, &mut used, &mut |order| {
            let code = encode(r, k, e1, e2, order);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        });
        CanonicalProfile {
            code: best.unwrap_or_else(|| encode(r, k, e1, e2, &[])),
        }
    }

    pub fn r(&self) -> usize {
        self.code[0] as usize
    }

    /// Number of local vertices.
    pub fn k(&self) -> usize {
        self.code[1] as usize
    }

    pub fn e2(&self) -> Vec<Vec<usize>> {
        let m = self.code[2] as usize;
        let w = self.r() - 1;
        self.code[3..3 + m * w]
            .chunks(w.max(1))
            .take(m)
            .map(|c| c.iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub fn e1(&self) -> Vec<Vec<usize>> {
        let w2 = self.r() - 1;
        let base = 3 + self.code[2] as usize * w2;
        let m = self.code[base] as usize;
        let r = self.r();
        self.code[base + 1..base + 1 + m * r]
            .chunks(r)
            .map(|c| c.iter().map(|&x| x as usize).collect())
            .collect()
    }

    /// Canonicalising a canonical form returns it unchanged.
    pub fn recanonicalize(&self) -> Self {
        CanonicalProfile::from_parts(self.r(), self.k(), &self.e1(), &self.e2())
    }

    pub fn code(&self) -> &[u32] {
        &self.code
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.code.iter().flat_map(|x| x.to_le_bytes()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.k() == 0
    }
}

impl std::fmt::Display for CanonicalProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "k={} link={:?} inner={:?}", self.k(), self.e2(), self.e1())
    }
}

fn encode(r: usize, k: usize, e1: &[Vec<usize>], e2: &[Vec<usize>], order: &[usize]) -> Vec<u32> {
    // order[pos] = local vertex placed at position pos
    let mut label = vec![0u32; k];
    for (pos, &z) in order.iter().enumerate() {
        label[z] = pos as u32;
    }
    let relabel = |sets: &[Vec<usize>]| {
        let mut out: Vec<Vec<u32>> = sets
            .iter()
            .map(|s| {
                let mut t: Vec<u32> = s.iter().map(|&z| label[z]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        out.sort_unstable();
        out
    };
    let a = relabel(e2);
    let b = relabel(e1);
    let mut code = vec![r as u32, k as u32, a.len() as u32];
    code.extend(a.into_iter().flatten());
    code.push(b.len() as u32);
    code.extend(b.into_iter().flatten());
    code
}

/// Colour refinement; returns cells in canonical colour order.
fn refine_cells(k: usize, e1: &[Vec<usize>], e2: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut colour: Vec<usize> = {
        let sig: Vec<(usize, usize)> = (0..k)
            .map(|z| {
                (
                    e2.iter().filter(|s| s.contains(&z)).count(),
                    e1.iter().filter(|s| s.contains(&z)).count(),
                )
            })
            .collect();
        rank(&sig)
    };
    loop {
        let classes_before = colour.iter().collect::<BTreeSet<_>>().len();
        let sig: Vec<Signature> = (0..k)
            .map(|z| {
                let mut around: Vec<(u8, Vec<usize>)> = Vec::new();
                for (kind, family) in [(2u8, e2), (1u8, e1)] {
                    for s in family.iter().filter(|s| s.contains(&z)) {
                        let mut cs: Vec<usize> =
                            s.iter().filter(|&&w| w != z).map(|&w| colour[w]).collect();
                        cs.sort_unstable();
                        around.push((kind, cs));
                    }
                }
                around.sort();
                (colour[z], around)
            })
            .collect();
        let next = rank(&sig);
        let classes_after = next.iter().collect::<BTreeSet<_>>().len();
        colour = next;
        if classes_after == classes_before {
            break;
        }
    }
    let ncol = colour.iter().max().map_or(0, |m| m + 1);
    let mut cells = vec![Vec::new(); ncol];
    for z in 0..k {
        cells[colour[z]].push(z);
    }
    cells
}

fn rank<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let distinct: Vec<T> = sig.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    sig.iter()
        .map(|s| distinct.binary_search(s).expect("present"))
        .collect()
}

/// Backtracks over orderings that list cell 0 first, then cell 1, ...
fn search_cells(
    cells: &[Vec<usize>],
    cell: usize,
    order: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]),
) {
    let Some(members) = cells.get(cell) else {
        visit(order);
        return;
    };
    let placed_in_cell = members.iter().filter(|&&z| used[z]).count();
    if placed_in_cell == members.len() {
        search_cells(cells, cell + 1, order, used, visit);
        return;
    }
    for &z in members {
        if used[z] {
            continue;
        }
        used[z] = true;
        order.push(z);
        search_cells(cells, cell, order, used, visit);
        order.pop();
        used[z] = false;
    }
}

/// All profiles occurring in `r`-uniform hypergraphs with maximum degree at
/// most `delta`, up to equivalence, in canonical order.
///
/// A local structure `(k, e1, e2)` occurs iff `e2` is a set of at most
/// `delta` distinct `(r-1)`-sets covering all `k` local vertices and every
/// local vertex lies in at most `delta` members of `e1` and `e2` together.
pub fn enumerate_profiles(r: usize, delta: usize, cap: u64) -> Result<Vec<CanonicalProfile>> {
    if r < 2 {
        return Err(Error::param("r must be at least 2"));
    }
    let mut found = BTreeSet::new();
    let mut visited: u64 = 0;
    for k in 0..=(r - 1) * delta {
        let link_sets: Vec<Vec<usize>> = Combinations::new(k as u32, r - 1)
            .map(|c| c.into_iter().map(|x| x as usize - 1).collect())
            .collect();
        let inner_sets: Vec<Vec<usize>> = Combinations::new(k as u32, r)
            .map(|c| c.into_iter().map(|x| x as usize - 1).collect())
            .collect();
        for size in 0..=delta.min(link_sets.len()) {
            for pick in Combinations::new(link_sets.len() as u32, size) {
                let e2: Vec<Vec<usize>> =
                    pick.iter().map(|&i| link_sets[i as usize - 1].clone()).collect();
                let mut load = vec![0usize; k];
                for s in &e2 {
                    for &z in s {
                        load[z] += 1;
                    }
                }
                if load.contains(&0) {
                    continue;
                }
                let mut e1 = Vec::new();
                let mut err = None;
                extend_inner(&inner_sets, 0, delta, &mut load, &mut e1, &mut |e1| {
                    visited += 1;
                    if visited > cap {
                        err = Some(Error::CapExceeded {
                            what: "profile enumeration",
                            value: visited as u128,
                            cap: cap as u128,
                        });
                        return false;
                    }
                    found.insert(CanonicalProfile::from_parts(r, k, e1, &e2));
                    true
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn extend_inner(
    sets: &[Vec<usize>],
    from: usize,
    delta: usize,
    load: &mut [usize],
    chosen: &mut Vec<Vec<usize>>,
    visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    if !visit(chosen) {
        return false;
    }
    for i in from..sets.len() {
        let s = &sets[i];
        if s.iter().all(|&z| load[z] < delta) {
            for &z in s {
                load[z] += 1;
            }
            chosen.push(s.clone());
            let go_on = extend_inner(sets, i + 1, delta, load, chosen, visit);
            chosen.pop();
            for &z in s {
                load[z] -= 1;
            }
            if !go_on {
                return false;
            }
        }
    }
    true
}
