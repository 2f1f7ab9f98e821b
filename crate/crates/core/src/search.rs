//! Exact containment by backtracking.
//!
//! Pattern vertices are placed in a connected, max-degree-first order. A
//! candidate image must have large enough degree, close every pattern edge
//! whose last vertex it is, and leave each partially placed edge completable
//! by some host edge avoiding used vertices.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::seed;

/// Default node budget of a search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Injective map from pattern vertices to host vertices; `mapping[x - 1]` is
/// the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub mapping: Vec<Vertex>,
}

impl Embedding {
    pub fn image(&self, x: Vertex) -> Vertex {
        self.mapping[x as usize - 1]
    }

    pub fn image_of_set(&self, set: &[Vertex]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = set.iter().map(|&x| self.image(x)).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "embedding", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found(Embedding),
    /// The search space was exhausted: no embedding exists.
    NotFound,
    /// The node budget ran out first; containment is unknown.
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn embedding(&self) -> Option<&Embedding> {
        match self {
            SearchOutcome::Found(e) => Some(e),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub spanning: bool,
    pub budget: u64,
    /// Shuffles candidate order; `None` keeps vertex order.
    pub shuffle_seed: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { spanning: false, budget: DEFAULT_BUDGET, shuffle_seed: None }
    }
}

/// Searches for a copy of `pattern` in `host`.
pub fn find_embedding(
    host: &Hypergraph,
    pattern: &Hypergraph,
    spanning: bool,
    budget: u64,
) -> Result<SearchOutcome> {
    find_embedding_with(host, pattern, &SearchOptions { spanning, budget, shuffle_seed: None })
}

pub fn find_embedding_with(
    host: &Hypergraph,
    pattern: &Hypergraph,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    if pattern.n() > host.n() {
        return Err(Error::param(format!(
            "pattern has {} vertices, host only {}",
            pattern.n(),
            host.n()
        )));
    }
    if opts.spanning && pattern.n() != host.n() {
        return Err(Error::param("spanning search needs equal vertex counts"));
    }
    let mut m = Matcher::new(host, pattern)?;
    m.budget = opts.budget;
    m.shuffle = opts.shuffle_seed;
    Ok(m.run())
}

/// `true` iff `emb` is injective into `V(host)` and maps every pattern edge
/// onto a host edge.
pub fn validate_embedding(host: &Hypergraph, pattern: &Hypergraph, emb: &Embedding) -> bool {
    if emb.mapping.len() != pattern.n() || host.r() != pattern.r() {
        return false;
    }
    let mut seen = vec![false; host.n() + 1];
    for &y in &emb.mapping {
        if y == 0 || y as usize > host.n() || seen[y as usize] {
            return false;
        }
        seen[y as usize] = true;
    }
    pattern.edges().all(|e| host.contains_edge(&emb.image_of_set(e)))
}

/// Backtracking matcher with optional per-vertex restrictions.
pub(crate) struct Matcher<'a> {
    host: &'a Hypergraph,
    pattern: &'a Hypergraph,
    host_adj: Vec<Vec<Vertex>>,
    /// `allowed[x][y]`: pattern vertex `x` may map to host vertex `y`.
    allowed: Vec<Option<Vec<bool>>>,
    pub budget: u64,
    pub shuffle: Option<u64>,
    pub nodes: u64,
}

struct Plan {
    order: Vec<Vertex>,
    anchor: Vec<Option<Vertex>>,
    /// Edges whose last placed vertex is `x`.
    closing: Vec<Vec<usize>>,
    /// Edges through `x` that still have unplaced vertices after `x`.
    open: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

impl<'a> Matcher<'a> {
    pub fn new(host: &'a Hypergraph, pattern: &'a Hypergraph) -> Result<Self> {
        if host.r() != pattern.r() {
            return Err(Error::param(format!(
                "uniformity mismatch: host r = {}, pattern r = {}",
                host.r(),
                pattern.r()
            )));
        }
        let shadow = host.shadow();
        let host_adj = (0..=host.n())
            .map(|y| if y == 0 { Vec::new() } else { shadow.neighbors(y as Vertex).to_vec() })
            .collect();
        Ok(Matcher {
            host,
            pattern,
            host_adj,
            allowed: vec![None; pattern.n() + 1],
            budget: DEFAULT_BUDGET,
            shuffle: None,
            nodes: 0,
        })
    }

    pub fn allow(&mut self, x: Vertex, mask: Vec<bool>) {
        self.allowed[x as usize] = Some(mask);
    }

    fn plan(&self) -> Plan {
        let p = self.pattern;
        let pn = p.n();
        let shadow = p.shadow();
        let mut placed = vec![false; pn + 1];
        let mut score = vec![0usize; pn + 1];
        let mut order = Vec::with_capacity(pn);
        let mut anchor = vec![None; pn + 1];
        let mut pos = vec![0; pn + 1];
        while order.len() < pn {
            let x = (1..=pn)
                .filter(|&x| !placed[x])
                .max_by_key(|&x| (score[x] > 0, score[x], p.deg(x as Vertex), std::cmp::Reverse(x)))
                .unwrap();
            placed[x] = true;
            pos[x] = order.len();
            order.push(x as Vertex);
            for &u in shadow.neighbors(x as Vertex) {
                if placed[u as usize] {
                    anchor[x].get_or_insert(u);
                } else {
                    score[u as usize] += 1;
                }
            }
        }
        let mut closing = vec![Vec::new(); pn + 1];
        let mut open = vec![Vec::new(); pn + 1];
        for (ei, e) in p.edges().enumerate() {
            let last = *e.iter().max_by_key(|&&u| pos[u as usize]).unwrap();
            closing[last as usize].push(ei);
            for &u in e {
                if u != last {
                    open[u as usize].push(ei);
                }
            }
        }
        Plan { order, anchor, closing, open, pos }
    }

    pub fn run(&mut self) -> SearchOutcome {
        if self.pattern.num_edges() > self.host.num_edges() {
            return SearchOutcome::NotFound;
        }
        let plan = self.plan();
        let mut rng = self.shuffle.map(seed::rng);
        let mut image = vec![0 as Vertex; self.pattern.n() + 1];
        let mut used = vec![false; self.host.n() + 1];
        match self.rec(&plan, 0, &mut image, &mut used, &mut rng) {
            Some(true) => SearchOutcome::Found(Embedding { mapping: image[1..].to_vec() }),
            Some(false) => SearchOutcome::NotFound,
            None => SearchOutcome::BudgetExhausted,
        }
    }

    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn rec(
        &mut self,
        plan: &Plan,
        k: usize,
        image: &mut [Vertex],
        used: &mut [bool],
        rng: &mut Option<seed::Rng>,
    ) -> Option<bool> {
        if k == plan.order.len() {
            return Some(true);
        }
        let x = plan.order[k];
        let mut cands: Vec<Vertex> = match plan.anchor[x as usize] {
            Some(a) => self.host_adj[image[a as usize] as usize].clone(),
            None => self.host.vertices().collect(),
        };
        if let Some(rng) = rng.as_mut() {
            cands.shuffle(rng);
        }
        let need = self.pattern.deg(x);
        for y in cands {
            if used[y as usize] || self.host.deg(y) < need {
                continue;
            }
            if let Some(mask) = &self.allowed[x as usize] {
                if !mask[y as usize] {
                    continue;
                }
            }
            image[x as usize] = y;
            if !self.closes(plan, x, image) || !self.open_ok(plan, k, x, image, used) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            used[y as usize] = true;
            let res = self.rec(plan, k + 1, image, used, rng);
            used[y as usize] = false;
            match res {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }

    fn closes(&self, plan: &Plan, x: Vertex, image: &[Vertex]) -> bool {
        plan.closing[x as usize].iter().all(|&ei| {
            let mut img: Vec<Vertex> = self.pattern.edge(ei).iter().map(|&u| image[u as usize]).collect();
            img.sort_unstable();
            self.host.contains_edge(&img)
        })
    }

    /// Every partially placed edge through `x` extends to a host edge whose
    /// remaining vertices are unused.
    fn open_ok(&self, plan: &Plan, k: usize, x: Vertex, image: &[Vertex], used: &[bool]) -> bool {
        let y = image[x as usize];
        plan.open[x as usize].iter().all(|&ei| {
            let placed: Vec<Vertex> = self
                .pattern
                .edge(ei)
                .iter()
                .filter(|&&u| plan.pos[u as usize] <= k)
                .map(|&u| image[u as usize])
                .collect();
            self.host.incident(y).iter().any(|&hi| {
                let he = self.host.edge(hi);
                placed.iter().all(|v| he.contains(v))
                    && he.iter().all(|v| placed.contains(v) || !used[*v as usize])
            })
        })
    }
}
