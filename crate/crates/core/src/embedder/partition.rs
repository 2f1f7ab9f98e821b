//! Partitions of the pattern (`X_0 .. X_t`) and of the host (`V_0 .. V_t`).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::profile::{enumerate_profiles, profile, CanonicalProfile};
use crate::rational;

/// Cap on profile enumeration when certifying the bound on `ε`.
pub const PROFILE_CAP: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedPartition {
    pub t: usize,
    #[serde(with = "rational::serde_str")]
    pub epsilon: BigRational,
    /// `classes[i]` is `X_i`, sorted.
    pub classes: Vec<Vec<Vertex>>,
    /// Common canonical profile of the members of `X_t`.
    pub profile: CanonicalProfile,
    /// Colours used on the cube of the shadow.
    pub colours: usize,
}

impl EmbedPartition {
    pub fn last(&self) -> &[Vertex] {
        &self.classes[self.t]
    }

    /// Checks every structural invariant against `f`.
    pub fn validate(&self, f: &Hypergraph) -> Result<()> {
        let bad = |m: String| Err(Error::Partition(m));
        if self.classes.len() != self.t + 1 {
            return bad(format!("{} classes for t = {}", self.classes.len(), self.t));
        }
        let mut owner = vec![usize::MAX; f.n() + 1];
        for (i, class) in self.classes.iter().enumerate() {
            for &v in class {
                f.check_vertex(v)?;
                if owner[v as usize] != usize::MAX {
                    return bad(format!("vertex {v} lies in two classes"));
                }
                owner[v as usize] = i;
            }
        }
        if let Some(v) = (1..=f.n()).find(|&v| owner[v] == usize::MAX) {
            return bad(format!("vertex {v} lies in no class"));
        }
        let size = rational::floor_mul(&self.epsilon, f.n());
        if self.last().len() != size {
            return bad(format!("|X_t| = {}, expected floor(eps n) = {size}", self.last().len()));
        }
        if f.neighborhood_of_set(self.last()) != self.classes[0] {
            return bad("X_0 differs from N(X_t)".into());
        }
        for &x in self.last() {
            if profile(f, x)?.canonical() != self.profile {
                return bad(format!("vertex {x} of X_t has a different profile"));
            }
        }
        for (i, class) in self.classes.iter().enumerate().skip(1) {
            if !f.is_t_independent(class, 3)? {
                return bad(format!("X_{i} is not 3-independent"));
            }
        }
        for e in f.edges() {
            let mut hits = vec![0usize; self.t + 1];
            for &v in e {
                hits[owner[v as usize]] += 1;
            }
            if hits[1..].iter().any(|&c| c > 1) {
                return bad(format!("edge {e:?} meets a class twice"));
            }
        }
        Ok(())
    }
}

/// Greedy colouring of the cube of the shadow: vertices within distance 3
/// get different colours. `colour[v]` for `v` in `1..=n`; slot 0 unused.
pub fn colour_cube(f: &Hypergraph) -> (Vec<usize>, usize) {
    let n = f.n();
    let mut colour = vec![usize::MAX; n + 1];
    let mut count = 0;
    for v in 1..=n {
        let dist = f.distances_from(v as Vertex, Some(3));
        let mut taken = vec![false; count + 1];
        for u in 1..=n {
            if u != v && dist[u].is_some() && colour[u] != usize::MAX {
                taken[colour[u]] = true;
            }
        }
        let c = taken.iter().position(|&t| !t).unwrap();
        colour[v] = c;
        count = count.max(c + 1);
    }
    (colour, count)
}

/// Splits `f` into `X_0 .. X_t`.
///
/// Without `t_override` `t = r^3 Δ^3` is used and `ε` must not
/// exceed `1 / (|P| (t - 1))`. The effective `t` is raised to one more than
/// the number of colours if the greedy colouring needs more.
pub fn partition_pattern(
    f: &Hypergraph,
    delta: usize,
    epsilon: &BigRational,
    t_override: Option<usize>,
) -> Result<EmbedPartition> {
    if f.max_degree() > delta {
        return Err(Error::param(format!(
            "pattern has maximum degree {} > delta = {delta}",
            f.max_degree()
        )));
    }
    if *epsilon <= BigRational::zero() || *epsilon > BigRational::one() {
        return Err(Error::param(format!("epsilon {epsilon} outside (0, 1]")));
    }
    let r = f.r();
    let t_base = match t_override {
        Some(t) if t >= 2 => t,
        Some(t) => return Err(Error::param(format!("t = {t} must be at least 2"))),
        None => {
            let t = r.pow(3) * delta.pow(3);
            let profiles = enumerate_profiles(r, delta, PROFILE_CAP)?.len();
            let bound = BigRational::new(1.into(), ((profiles * (t - 1)) as u64).into());
            if *epsilon > bound {
                return Err(Error::param(format!(
                    "epsilon {epsilon} exceeds the partition bound {bound} (|P| = {profiles}, t = {t}); pass t_override for desk-scale runs"
                )));
            }
            t
        }
    };
    let (colour, colours) = colour_cube(f);
    let t = t_base.max(colours + 1);
    let size = rational::floor_mul(epsilon, f.n());

    let mut by_colour = vec![Vec::new(); colours];
    for v in 1..=f.n() {
        by_colour[colour[v]].push(v as Vertex);
    }
    let mut scan: Vec<usize> = (0..colours).collect();
    scan.sort_by_key(|&c| (std::cmp::Reverse(by_colour[c].len()), c));

    let mut report = Vec::new();
    let mut pick = None;
    for &c in &scan {
        let mut groups: BTreeMap<CanonicalProfile, Vec<Vertex>> = BTreeMap::new();
        for &v in &by_colour[c] {
            groups.entry(profile(f, v)?.canonical()).or_default().push(v);
        }
        let best = groups
            .iter()
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)));
        if let Some((p, members)) = best {
            report.push(format!("colour {c}: {} of {} vertices share one profile", members.len(), by_colour[c].len()));
            if members.len() >= size {
                pick = Some((p.clone(), members[..size].to_vec()));
                break;
            }
        }
    }
    let Some((prof, last)) = pick else {
        return Err(Error::Partition(format!(
            "no colour class holds {size} vertices of one profile ({})",
            report.join("; ")
        )));
    };
    let x0 = f.neighborhood_of_set(&last);
    let mut taken = f.mask(&x0);
    for &x in &last {
        taken[x as usize] = true;
    }
    let mut classes = vec![x0];
    for members in &by_colour {
        classes.push(members.iter().copied().filter(|&v| !taken[v as usize]).collect());
    }
    classes.resize(t, Vec::new());
    classes.push(last);
    let ep = EmbedPartition { t, epsilon: epsilon.clone(), classes, profile: prof, colours };
    ep.validate(f)?;
    Ok(ep)
}

/// Host classes `V_0 .. V_t`: `|V_i| = floor(ε n / (10 t))` for `i >= 1`,
/// taken from the highest ids, and `V_0` holds the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostPartition {
    pub t: usize,
    #[serde(with = "rational::serde_str")]
    pub epsilon: BigRational,
    pub classes: Vec<Vec<Vertex>>,
}

impl HostPartition {
    pub fn new(n: usize, t: usize, epsilon: &BigRational) -> Result<Self> {
        if t < 1 || *epsilon <= BigRational::zero() || *epsilon > BigRational::one() {
            return Err(Error::param("host partition needs t >= 1 and 0 < epsilon <= 1"));
        }
        let block = rational::floor_mul(&(epsilon / BigRational::from_integer((10 * t).into())), n);
        let v0 = n - block * t;
        let mut classes = vec![(1..=v0 as Vertex).collect::<Vec<_>>()];
        for i in 0..t {
            let start = v0 + i * block;
            classes.push(((start + 1) as Vertex..=(start + block) as Vertex).collect());
        }
        Ok(HostPartition { t, epsilon: epsilon.clone(), classes })
    }

    pub fn n(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// Membership mask of `V_0 ∪ .. ∪ V_i`, indexed by vertex id.
    pub fn prefix_mask(&self, i: usize) -> Vec<bool> {
        let mut m = vec![false; self.n() + 1];
        for class in &self.classes[..=i.min(self.t)] {
            for &v in class {
                m[v as usize] = true;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::hamilton_cycle;
    use crate::rational::from_ratio;

    #[test]
    fn edgeless_pattern() {
        let f = Hypergraph::empty(3, 10).unwrap();
        let ep = partition_pattern(&f, 1, &from_ratio(1, 5), Some(3)).unwrap();
        assert!(ep.classes[0].is_empty());
        assert_eq!(ep.last().len(), 2);
        assert!(ep.profile.is_empty());
    }

    #[test]
    fn loose_cycle_desk_scale() {
        let f = hamilton_cycle(60, 3, 1).unwrap();
        let ep = partition_pattern(&f, 2, &from_ratio(1, 30), Some(8)).unwrap();
        ep.validate(&f).unwrap();
        assert_eq!(ep.last().len(), 2);
        for class in &ep.classes[1..] {
            assert!(f.is_t_independent(class, 3).unwrap());
        }
    }

    #[test]
    fn epsilon_bound_without_override() {
        let f = hamilton_cycle(12, 3, 1).unwrap();
        assert!(matches!(
            partition_pattern(&f, 2, &from_ratio(1, 30), None),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn host_partition_sizes() {
        let hp = HostPartition::new(100, 2, &from_ratio(1, 2)).unwrap();
        assert_eq!(hp.classes.iter().map(Vec::len).collect::<Vec<_>>(), vec![96, 2, 2]);
        assert_eq!(hp.classes[2], vec![99, 100]);
        let hp = HostPartition::new(60, 8, &from_ratio(1, 30)).unwrap();
        assert_eq!(hp.classes[0].len(), 60);
    }
}
