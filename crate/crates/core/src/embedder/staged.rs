//! The staged embedding: disjoint neighbourhood copies first, then one
//! Hall matching per class.

use serde::{Deserialize, Serialize};

use super::matching::{aux_row, build_aux, max_bipartite_matching, Bipartite, Matching};
use super::partition::{EmbedPartition, HostPartition};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::search::{validate_embedding, Embedding, Matcher, SearchOutcome};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedOptions {
    /// Independent attempts, each with its own derived seed.
    pub attempts: usize,
    /// Node budget of the stage-0 placement search.
    pub budget: u64,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions { attempts: 32, budget: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallWitness {
    /// Pattern vertices whose link families violate Hall's condition.
    pub pattern_vertices: Vec<Vertex>,
    /// Their common neighbourhood in the host, smaller than the set.
    pub neighbours: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub x_size: usize,
    /// `|V_i*|`, host vertices available at this stage.
    pub available: usize,
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violator: Option<HallWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptTrace {
    pub attempt: usize,
    pub seed: u64,
    pub stages: Vec<StageRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedTrace {
    pub success: bool,
    pub attempts: Vec<AttemptTrace>,
    pub embedding: Option<Embedding>,
}

/// Embeds the spanning pattern `f` into `host` along the partitions.
///
/// Stage 0 places the closed neighbourhoods of `X_t` as disjoint copies,
/// neighbourhoods inside `V_0`, and keeps only the neighbourhood images.
/// Stage `i` matches `X_i` into `V_i* = (V_0 ∪ .. ∪ V_i) \ Im` through
/// `B(host, L_i, V_i*)`; for `i < t` the match is computed jointly with
/// `X_t` so that the final stage stays feasible, and only `X_i` is kept.
/// Stage `t` matches `X_t` into every remaining vertex.
pub fn embed_universal(
    host: &Hypergraph,
    f: &Hypergraph,
    hp: &HostPartition,
    ep: &EmbedPartition,
    seed: u64,
    opts: EmbedOptions,
) -> Result<EmbedTrace> {
    if host.n() != f.n() || host.r() != f.r() {
        return Err(Error::param("host and pattern must share n and r"));
    }
    if hp.n() != host.n() || hp.t != ep.t {
        return Err(Error::Partition(format!(
            "host partition (n = {}, t = {}) does not fit (n = {}, t = {})",
            hp.n(),
            hp.t,
            host.n(),
            ep.t
        )));
    }
    ep.validate(f)?;
    let mut attempts = Vec::new();
    for a in 0..opts.attempts.max(1) {
        let s = seed::derive(seed, &[a as u64]);
        let (stages, mapping) = attempt(host, f, hp, ep, s, opts.budget)?;
        attempts.push(AttemptTrace { attempt: a, seed: s, stages });
        if let Some(mapping) = mapping {
            let emb = Embedding { mapping };
            if !validate_embedding(host, f, &emb) {
                return Err(Error::Invariant("staged embedding failed validation".into()));
            }
            return Ok(EmbedTrace { success: true, attempts, embedding: Some(emb) });
        }
    }
    Ok(EmbedTrace { success: false, attempts, embedding: None })
}

type StageRun = (Vec<StageRecord>, Option<Vec<Vertex>>);

fn attempt(
    host: &Hypergraph,
    f: &Hypergraph,
    hp: &HostPartition,
    ep: &EmbedPartition,
    seed: u64,
    budget: u64,
) -> Result<StageRun> {
    let n = f.n();
    let t = ep.t;
    let mut phi = vec![0 as Vertex; n + 1];
    let mut used = vec![false; n + 1];
    let mut stages = Vec::new();

    // stage 0
    let v0 = hp.prefix_mask(0);
    let (ok, note) = place_neighbourhoods(host, f, ep, &v0, seed, budget, &mut phi);
    stages.push(StageRecord {
        stage: 0,
        x_size: ep.classes[0].len(),
        available: hp.classes[0].len(),
        matched: ok,
        violator: None,
        note,
    });
    if !ok {
        return Ok((stages, None));
    }
    for &x in &ep.classes[0] {
        used[phi[x as usize] as usize] = true;
    }

    for i in 1..=t {
        let xi = &ep.classes[i];
        if i < t && xi.is_empty() {
            continue;
        }
        let window = if i == t { hp.prefix_mask(t) } else { hp.prefix_mask(i) };
        let avail: Vec<Vertex> = (1..=n as Vertex)
            .filter(|&y| window[y as usize] && !used[y as usize])
            .collect();
        let placed = |x: Vertex| x != 0 && phi[x as usize] != 0;
        let families: Vec<Vec<Vec<Vertex>>> =
            xi.iter().map(|&x| link_images(f, x, &phi, &placed)).collect();
        let aux = build_aux(host, families, avail.clone())?;
        let mut adj = aux.graph.adj;
        if i < t {
            for &y in ep.last() {
                adj.push(aux_row(host, &link_images(f, y, &phi, &placed), &avail));
            }
        }
        let rows: Vec<Vertex> = if i < t {
            xi.iter().chain(ep.last()).copied().collect()
        } else {
            xi.clone()
        };
        let b = Bipartite::new(avail.len(), adj)?;
        let mut record = StageRecord {
            stage: i,
            x_size: xi.len(),
            available: avail.len(),
            matched: false,
            violator: None,
            note: (i < t).then(|| format!("matched jointly with {} vertices of X_t", ep.last().len())),
        };
        match max_bipartite_matching(&b) {
            Matching::Saturating { pairs } => {
                for (row, &w) in pairs.iter().enumerate().take(xi.len()) {
                    let y = avail[w];
                    phi[rows[row] as usize] = y;
                    used[y as usize] = true;
                }
                record.matched = true;
                stages.push(record);
            }
            Matching::HallViolator { left, neighbours } => {
                record.violator = Some(HallWitness {
                    pattern_vertices: left.iter().map(|&l| rows[l]).collect(),
                    neighbours: neighbours.iter().map(|&w| avail[w]).collect(),
                });
                stages.push(record);
                return Ok((stages, None));
            }
        }
    }
    Ok((stages, Some(phi[1..].to_vec())))
}

/// `L(x)`: images of the parts `e \ {x}` of edges through `x` whose other
/// vertices are all embedded.
fn link_images(
    f: &Hypergraph,
    x: Vertex,
    phi: &[Vertex],
    placed: &dyn Fn(Vertex) -> bool,
) -> Vec<Vec<Vertex>> {
    f.incident(x)
        .iter()
        .filter_map(|&ei| {
            let rest: Vec<Vertex> = f.edge(ei).iter().copied().filter(|&u| u != x).collect();
            rest.iter().all(|&u| placed(u)).then(|| {
                let mut img: Vec<Vertex> = rest.iter().map(|&u| phi[u as usize]).collect();
                img.sort_unstable();
                img
            })
        })
        .collect()
}

/// Places the closed neighbourhoods of `X_t` disjointly, neighbourhoods in
/// `V_0`, by one randomized backtracking search over their union.
fn place_neighbourhoods(
    host: &Hypergraph,
    f: &Hypergraph,
    ep: &EmbedPartition,
    v0: &[bool],
    seed: u64,
    budget: u64,
    phi: &mut [Vertex],
) -> (bool, Option<String>) {
    let last = ep.last();
    if ep.classes[0].is_empty() {
        return (true, None);
    }
    // local ids: members of N[X_t] in ascending order
    let mut members: Vec<Vertex> = ep.classes[0].iter().chain(last).copied().collect();
    members.sort_unstable();
    let mut local = vec![0 as Vertex; f.n() + 1];
    for (i, &v) in members.iter().enumerate() {
        local[v as usize] = i as Vertex + 1;
    }
    let inside = f.mask(&members);
    let edges = f
        .induced_edges(&inside)
        .into_iter()
        .map(|ei| f.edge(ei).iter().map(|&u| local[u as usize]).collect::<Vec<_>>());
    let star = match Hypergraph::new(f.r(), members.len(), edges) {
        Ok(s) => s,
        Err(e) => return (false, Some(e.to_string())),
    };
    let mut matcher = match Matcher::new(host, &star) {
        Ok(m) => m,
        Err(e) => return (false, Some(e.to_string())),
    };
    matcher.budget = budget;
    matcher.shuffle = Some(seed);
    for &x in &ep.classes[0] {
        matcher.allow(local[x as usize], v0.to_vec());
    }
    match matcher.run() {
        SearchOutcome::Found(emb) => {
            for &x in &ep.classes[0] {
                phi[x as usize] = emb.image(local[x as usize]);
            }
            (true, None)
        }
        SearchOutcome::NotFound => (false, Some("no disjoint neighbourhood copies in V_0".into())),
        SearchOutcome::BudgetExhausted => (false, Some(format!("placement budget {budget} exhausted"))),
    }
}
