//! Bipartite matching with Hall-violator certificates, and the auxiliary
//! graphs `B(H, L, W)` the embedding stages match in.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Bipartite graph with left vertices `0..left`, right vertices `0..right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartite {
    pub left: usize,
    pub right: usize,
    pub adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new(right: usize, adj: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(&bad) = adj.iter().flatten().find(|&&w| w >= right) {
            return Err(Error::param(format!("right index {bad} out of range {right}")));
        }
        Ok(Bipartite { left: adj.len(), right, adj })
    }

    /// Right vertices adjacent to some member of `u`, sorted.
    pub fn neighbourhood(&self, u: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = u.iter().flat_map(|&l| self.adj[l].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Matching {
    /// `pairs[l]` is the right partner of left vertex `l`.
    Saturating { pairs: Vec<usize> },
    /// `|N(left)| < |left|`; `neighbours` is `N(left)`.
    HallViolator { left: Vec<usize>, neighbours: Vec<usize> },
}

/// Maximum matching by Hopcroft–Karp; `mate[l]` is the partner of `l`.
pub fn maximum_matching(b: &Bipartite) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let mut mate_l: Vec<Option<usize>> = vec![None; b.left];
    let mut mate_r: Vec<Option<usize>> = vec![None; b.right];
    let mut dist = vec![INF; b.left];
    loop {
        // layer the free left vertices
        let mut queue = VecDeque::new();
        for l in 0..b.left {
            if mate_l[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &w in &b.adj[l] {
                match mate_r[w] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..b.left {
            if mate_l[l].is_none() {
                augment(b, l, &mut dist, &mut mate_l, &mut mate_r);
            }
        }
    }
    mate_l
}

fn augment(
    b: &Bipartite,
    l: usize,
    dist: &mut [usize],
    mate_l: &mut [Option<usize>],
    mate_r: &mut [Option<usize>],
) -> bool {
    for i in 0..b.adj[l].len() {
        let w = b.adj[l][i];
        let ok = match mate_r[w] {
            None => true,
            Some(l2) => dist[l2] == dist[l] + 1 && augment(b, l2, dist, mate_l, mate_r),
        };
        if ok {
            mate_l[l] = Some(w);
            mate_r[w] = Some(l);
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

/// A left-saturating matching, or a Hall violator.
///
/// The violator is the set of left vertices reachable by alternating paths
/// from one unmatched left vertex; by maximality its neighbourhood is
/// exactly the partners of the other members, one short of its size.
pub fn max_bipartite_matching(b: &Bipartite) -> Matching {
    let mate = maximum_matching(b);
    let Some(root) = mate.iter().position(Option::is_none) else {
        return Matching::Saturating { pairs: mate.into_iter().map(Option::unwrap).collect() };
    };
    let mut mate_r = vec![None; b.right];
    for (l, m) in mate.iter().enumerate() {
        if let Some(w) = *m {
            mate_r[w] = Some(l);
        }
    }
    let mut seen_l = vec![false; b.left];
    let mut seen_r = vec![false; b.right];
    let mut queue = VecDeque::from([root]);
    seen_l[root] = true;
    while let Some(l) = queue.pop_front() {
        for &w in &b.adj[l] {
            if !seen_r[w] {
                seen_r[w] = true;
                let l2 = mate_r[w].expect("maximum matching leaves no augmenting path");
                if !seen_l[l2] {
                    seen_l[l2] = true;
                    queue.push_back(l2);
                }
            }
        }
    }
    Matching::HallViolator {
        left: (0..b.left).filter(|&l| seen_l[l]).collect(),
        neighbours: (0..b.right).filter(|&w| seen_r[w]).collect(),
    }
}

/// `B(H, L, W)`: a left vertex is a family of `(r-1)`-sets, adjacent to
/// `w ∈ W` iff every member of the family lies in `link_H(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxBipartite {
    pub left: Vec<Vec<Vec<Vertex>>>,
    pub right: Vec<Vertex>,
    pub graph: Bipartite,
}

pub fn build_aux(h: &Hypergraph, lfamily: Vec<Vec<Vec<Vertex>>>, w: Vec<Vertex>) -> Result<AuxBipartite> {
    let r = h.r();
    let mut seen = HashSet::new();
    let mut covered = vec![false; h.n() + 1];
    for fam in &lfamily {
        for s in fam {
            if s.len() != r - 1 || s.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::Partition(format!("{s:?} is not a sorted {}-set", r - 1)));
            }
            for &v in s {
                h.check_vertex(v)?;
                covered[v as usize] = true;
            }
            if !seen.insert(s.clone()) {
                return Err(Error::Partition(format!("{s:?} appears in two left families")));
            }
        }
    }
    for &x in &w {
        h.check_vertex(x)?;
        if covered[x as usize] {
            return Err(Error::Partition(format!("right vertex {x} lies in V(L)")));
        }
    }
    let adj = lfamily.iter().map(|fam| aux_row(h, fam, &w)).collect();
    let graph = Bipartite::new(w.len(), adj)?;
    Ok(AuxBipartite { left: lfamily, right: w, graph })
}

/// Indices of the members of `w` whose link contains every set of `fam`.
pub(crate) fn aux_row(h: &Hypergraph, fam: &[Vec<Vertex>], w: &[Vertex]) -> Vec<usize> {
    let mut buf = Vec::with_capacity(h.r());
    (0..w.len())
        .filter(|&j| {
            fam.iter().all(|s| {
                buf.clear();
                buf.extend_from_slice(s);
                buf.push(w[j]);
                buf.sort_unstable();
                h.contains_edge(&buf)
            })
        })
        .collect()
}
