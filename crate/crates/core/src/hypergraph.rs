//! Uniform hypergraphs over the vertex set `1..=n`.
//!
//! Edges are stored sorted ascending and the edge list is kept in
//! lexicographic order, which makes the `.hg` text format and every
//! derived ordering canonical.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::combinatorics::Combinations;
use crate::error::{Error, Result};

/// Vertex id, 1-based.
pub type Vertex = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    /// Flattened edge list, `r` entries per edge.
    edges: Vec<Vertex>,
    /// `incidence[v - 1]` lists the indices of edges containing `v`.
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary-order edges. Each edge is sorted;
    /// duplicates and malformed edges are rejected.
    pub fn new<I>(r: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Vertex>>,
    {
        Self::check_shape(r, n)?;
        let mut list: Vec<Vec<Vertex>> = Vec::new();
        for mut e in edges {
            e.sort_unstable();
            Self::check_edge(r, n, &e)?;
            list.push(e);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].clone()));
        }
        Ok(Self::from_sorted_unique(r, n, list))
    }

    /// Builds from a set of already-sorted edges (no duplicates possible).
    pub fn from_edge_set(r: usize, n: usize, edges: BTreeSet<Vec<Vertex>>) -> Result<Self> {
        Self::check_shape(r, n)?;
        for e in &edges {
            if !e.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidEdge {
                    edge: e.iter().map(|&v| v as u64).collect(),
                    reason: "edge vertices not strictly increasing".into(),
                });
            }
            Self::check_edge(r, n, e)?;
        }
        Ok(Self::from_sorted_unique(r, n, edges.into_iter().collect()))
    }

    pub fn empty(r: usize, n: usize) -> Result<Self> {
        Self::new(r, n, std::iter::empty())
    }

    /// The complete hypergraph `K^(r)_n`.
    pub fn complete(n: usize, r: usize) -> Result<Self> {
        Self::check_shape(r, n)?;
        Ok(Self::from_sorted_unique(r, n, Combinations::new(n as u32, r).collect()))
    }

    fn check_shape(r: usize, n: usize) -> Result<()> {
        if r < 2 {
            return Err(Error::param(format!("uniformity r = {r} must be at least 2")));
        }
        if n == 0 {
            return Err(Error::param("vertex count n must be at least 1"));
        }
        if n > Vertex::MAX as usize {
            return Err(Error::param("vertex count too large"));
        }
        Ok(())
    }

    fn check_edge(r: usize, n: usize, e: &[Vertex]) -> Result<()> {
        let as_u64 = || e.iter().map(|&v| v as u64).collect::<Vec<_>>();
        if e.len() != r {
            return Err(Error::InvalidEdge {
                edge: as_u64(),
                reason: format!("expected {r} vertices"),
            });
        }
        if let Some(&v) = e.iter().find(|&&v| v == 0 || v as usize > n) {
            return Err(Error::VertexOutOfRange { vertex: v as u64, n });
        }
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge {
                edge: as_u64(),
                reason: "repeated vertex".into(),
            });
        }
        Ok(())
    }

    fn from_sorted_unique(r: usize, n: usize, list: Vec<Vec<Vertex>>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(list.len() * r);
        for (i, e) in list.iter().enumerate() {
            for &v in e {
                incidence[v as usize - 1].push(i);
            }
            edges.extend_from_slice(e);
        }
        Hypergraph {
            r,
            n,
            edges,
            incidence,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len() / self.r
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.edges[i * self.r..(i + 1) * self.r]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        self.edges.chunks_exact(self.r)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    pub fn edge_list(&self) -> Vec<Vec<Vertex>> {
        self.edges().map(<[Vertex]>::to_vec).collect()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v as usize > self.n {
            Err(Error::VertexOutOfRange {
                vertex: v as u64,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Edge indices containing `v`. Panics if `v` is out of range.
    pub fn incident(&self, v: Vertex) -> &[usize] {
        &self.incidence[v as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.incident(v).len())
    }

    /// Unchecked degree for in-range vertices.
    pub fn deg(&self, v: Vertex) -> usize {
        self.incident(v).len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence.iter().map(Vec::len).collect()
    }

    /// Index of a sorted edge, if present.
    pub fn edge_index(&self, sorted: &[Vertex]) -> Option<usize> {
        if sorted.len() != self.r {
            return None;
        }
        let m = self.num_edges();
        let (mut lo, mut hi) = (0usize, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(sorted) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains_edge(&self, sorted: &[Vertex]) -> bool {
        self.edge_index(sorted).is_some()
    }

    /// Like [`contains_edge`](Self::contains_edge) but sorts a copy first.
    pub fn contains_vertex_set(&self, set: &[Vertex]) -> bool {
        let mut e = set.to_vec();
        e.sort_unstable();
        self.contains_edge(&e)
    }

    /// `N_H(v)`: vertices sharing an edge with `v`, sorted.
    pub fn neighborhood(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .incident(v)
            .iter()
            .flat_map(|&i| self.edge(i).iter().copied())
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `N_H(W)`: union of the neighbourhoods of members of `w`, sorted.
    pub fn neighborhood_of_set(&self, w: &[Vertex]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = w.iter().flat_map(|&v| self.neighborhood(v)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `link_H(v)`: the `(r-1)`-sets completing an edge with `v`, sorted.
    pub fn link(&self, v: Vertex) -> Result<Vec<Vec<Vertex>>> {
        self.check_vertex(v)?;
        Ok(self.link_unchecked(v))
    }

    pub(crate) fn link_unchecked(&self, v: Vertex) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = self
            .incident(v)
            .iter()
            .map(|&i| self.edge(i).iter().copied().filter(|&w| w != v).collect())
            .collect();
        out.sort_unstable();
        out
    }

    /// Edge indices of `H[W]`. `members` is indexed by vertex id.
    pub fn induced_edges(&self, members: &[bool]) -> Vec<usize> {
        (0..self.num_edges())
            .filter(|&i| self.edge(i).iter().all(|&v| members[v as usize]))
            .collect()
    }

    /// Membership mask (indexed by vertex id, slot 0 unused).
    pub fn mask(&self, set: &[Vertex]) -> Vec<bool> {
        let mut m = vec![false; self.n + 1];
        for &v in set {
            m[v as usize] = true;
        }
        m
    }

    /// Shadow graph: every edge replaced by all its vertex pairs.
    pub fn shadow(&self) -> Graph {
        let mut pairs = BTreeSet::new();
        for e in self.edges() {
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    pairs.insert(vec![e[i], e[j]]);
                }
            }
        }
        let inner = Hypergraph::from_sorted_unique(2, self.n, pairs.into_iter().collect());
        Graph::wrap(inner)
    }

    /// Path-connectivity classes, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.edges() {
            for &v in &e[1..] {
                let a = find(&mut parent, e[0] as usize);
                let b = find(&mut parent, v as usize);
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi] = lo;
                }
            }
        }
        let mut classes: Vec<Vec<Vertex>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n + 1];
        for v in 1..=self.n {
            let root = find(&mut parent, v);
            if slot[root] == usize::MAX {
                slot[root] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[root]].push(v as Vertex);
        }
        classes
    }

    /// BFS distances from `source`, stopping at `max_depth` when given.
    /// `None` marks unreachable (or beyond the depth limit).
    pub fn distances_from(&self, source: Vertex, max_depth: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n + 1];
        dist[source as usize] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].unwrap();
            if max_depth.is_some_and(|m| du >= m) {
                continue;
            }
            for &i in self.incident(u) {
                for &w in self.edge(i) {
                    if dist[w as usize].is_none() {
                        dist[w as usize] = Some(du + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// Length of a shortest vertex-edge path; `None` means infinity.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances_from(u, None)[v as usize])
    }

    /// True iff distinct members of `w` are pairwise at distance `>= t + 1`.
    pub fn is_t_independent(&self, w: &[Vertex], t: usize) -> Result<bool> {
        if t < 1 {
            return Err(Error::param("t must be at least 1"));
        }
        for &v in w {
            self.check_vertex(v)?;
        }
        let members = self.mask(w);
        for &v in w {
            let dist = self.distances_from(v, Some(t));
            let close = dist
                .iter()
                .enumerate()
                .skip(1)
                .any(|(u, d)| u != v as usize && members[u] && d.is_some());
            if close {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies a vertex relabelling: `perm[v - 1]` is the new id of `v`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::param("permutation length differs from n"));
        }
        let mut seen = vec![false; self.n + 1];
        for &p in perm {
            if p == 0 || p as usize > self.n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::param("not a permutation of 1..=n"));
            }
        }
        Hypergraph::new(
            self.r,
            self.n,
            self.edges()
                .map(|e| e.iter().map(|&v| perm[v as usize - 1]).collect::<Vec<_>>()),
        )
    }

    /// Rebuilds the incidence index from the edge list and compares.
    pub fn check_invariants(&self) -> Result<()> {
        let rebuilt = Hypergraph::new(self.r, self.n, self.edge_list())?;
        if rebuilt != *self {
            return Err(Error::Invariant("edge order or incidence index inconsistent".into()));
        }
        Ok(())
    }

    /// Parses the `.hg` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize, usize, usize)> = None;
        let mut edges: Vec<Vec<Vertex>> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let Some((r, n, m, _)) = header else {
                if fields.len() != 3 {
                    return Err(parse_err(line_no, "header must be `r n m`"));
                }
                let nums: Vec<usize> = fields
                    .iter()
                    .map(|f| f.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(line_no, &format!("bad header number: {e}")))?;
                let (r, n, m) = (nums[0], nums[1], nums[2]);
                if n == 0 {
                    return Err(parse_err(line_no, "n = 0 is not a valid hypergraph"));
                }
                if r < 2 {
                    return Err(parse_err(line_no, "r must be at least 2"));
                }
                header = Some((r, n, m, line_no));
                continue;
            };
            if edges.len() == m {
                return Err(parse_err(line_no, &format!("more than the declared {m} edges")));
            }
            if fields.len() != r {
                return Err(parse_err(
                    line_no,
                    &format!("expected {r} vertex ids, found {}", fields.len()),
                ));
            }
            let mut e = Vec::with_capacity(r);
            for f in fields {
                let v: u64 = f
                    .parse()
                    .map_err(|_| parse_err(line_no, &format!("bad vertex id `{f}`")))?;
                if v == 0 || v > n as u64 {
                    return Err(parse_err(line_no, &format!("vertex {v} out of range 1..={n}")));
                }
                e.push(v as Vertex);
            }
            if !e.windows(2).all(|w| w[0] < w[1]) {
                return Err(parse_err(line_no, "vertex ids must be strictly increasing"));
            }
            if !seen.insert(e.clone()) {
                return Err(parse_err(line_no, "duplicate edge"));
            }
            edges.push(e);
        }
        let Some((r, n, m, _)) = header else {
            return Err(parse_err(last_line.max(1), "missing `r n m` header"));
        };
        if edges.len() != m {
            return Err(parse_err(
                last_line.max(1),
                &format!("declared {m} edges, found {}", edges.len()),
            ));
        }
        Hypergraph::from_edge_set(r, n, seen)
    }

    /// Serialises to the `.hg` text format.
    pub fn to_hg_string(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 4);
        let _ = writeln!(out, "{} {} {}", self.r, self.n, self.num_edges());
        for e in self.edges() {
            let mut first = true;
            for v in e {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

/// A simple graph: a 2-uniform hypergraph plus sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    inner: Hypergraph,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let inner = Hypergraph::new(2, n, edges.into_iter().map(|(a, b)| vec![a, b]))?;
        Ok(Graph::wrap(inner))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Ok(Graph::wrap(Hypergraph::complete(n, 2)?))
    }

    pub fn from_hypergraph(h: Hypergraph) -> Result<Self> {
        if h.r() != 2 {
            return Err(Error::param(format!("a graph must be 2-uniform, got r = {}", h.r())));
        }
        Ok(Graph::wrap(h))
    }

    fn wrap(inner: Hypergraph) -> Self {
        let adj = (1..=inner.n() as Vertex).map(|v| inner.neighborhood(v)).collect();
        Graph { inner, adj }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Graph::from_hypergraph(Hypergraph::parse(text)?)
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.inner.edges().map(|e| (e[0], e[1]))
    }

    pub fn as_hypergraph(&self) -> &Hypergraph {
        &self.inner
    }

    pub fn into_hypergraph(self) -> Hypergraph {
        self.inner
    }

    pub fn to_hg_string(&self) -> String {
        self.inner.to_hg_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: usize, n: usize, edges: &[&[Vertex]]) -> Hypergraph {
        Hypergraph::new(r, n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn degree_examples() {
        let k34 = Hypergraph::complete(4, 3).unwrap();
        assert!((1..=4).all(|v| k34.degree(v).unwrap() == 3));
        let empty = Hypergraph::empty(3, 5).unwrap();
        assert!((1..=5).all(|v| empty.degree(v).unwrap() == 0));
        assert!(matches!(k34.degree(5), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(k34.degree(0), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            Hypergraph::new(3, 4, vec![vec![1, 2, 3], vec![3, 2, 1]]),
            Err(Error::DuplicateEdge(_))
        ));
        assert!(Hypergraph::new(3, 4, vec![vec![1, 2]]).is_err());
        assert!(Hypergraph::new(3, 4, vec![vec![1, 2, 5]]).is_err());
        assert!(Hypergraph::new(3, 4, vec![vec![1, 1, 2]]).is_err());
        assert!(Hypergraph::empty(3, 0).is_err());
        assert!(Hypergraph::empty(3, 1).is_ok());
    }

    #[test]
    fn shadow_examples() {
        let single = h(3, 3, &[&[1, 2, 3]]);
        assert_eq!(single.shadow().num_edges(), 3);
        assert_eq!(Hypergraph::complete(4, 3).unwrap().shadow().num_edges(), 6);
        let loose = h(3, 6, &[&[1, 2, 3], &[3, 4, 5], &[1, 5, 6]]);
        assert_eq!(loose.shadow().num_edges(), 9);
    }

    #[test]
    fn components_examples() {
        let two = h(3, 6, &[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(two.components(), vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let none = Hypergraph::empty(3, 5).unwrap();
        assert_eq!(none.components().len(), 5);
        let chain = h(3, 6, &[&[1, 2, 3], &[3, 4, 5]]);
        assert_eq!(chain.components(), vec![vec![1, 2, 3, 4, 5], vec![6]]);
    }

    #[test]
    fn distance_examples() {
        let chain = h(3, 6, &[&[1, 2, 3], &[3, 4, 5]]);
        assert_eq!(chain.distance(1, 5).unwrap(), Some(2));
        assert_eq!(chain.distance(1, 1).unwrap(), Some(0));
        let two = h(3, 6, &[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(two.distance(1, 4).unwrap(), None);
    }

    #[test]
    fn independence_examples() {
        let chain = h(3, 6, &[&[1, 2, 3], &[3, 4, 5]]);
        assert!(chain.is_t_independent(&[1, 5], 1).unwrap());
        assert!(!chain.is_t_independent(&[1, 5], 2).unwrap());
        assert!(chain.is_t_independent(&[3], 7).unwrap());
        assert!(chain.is_t_independent(&[1, 6], 100).unwrap());
    }

    #[test]
    fn link_examples() {
        let single = h(3, 3, &[&[1, 2, 3]]);
        assert_eq!(single.link(1).unwrap(), vec![vec![2, 3]]);
        let k34 = Hypergraph::complete(4, 3).unwrap();
        assert_eq!(k34.link(1).unwrap(), vec![vec![2, 3], vec![2, 4], vec![3, 4]]);
        let iso = h(3, 4, &[&[1, 2, 3]]);
        assert!(iso.link(4).unwrap().is_empty());
    }

    #[test]
    fn parse_format() {
        let text = "# a comment\n3 5 2\n1 2 3\n# mid comment\n\n2 4 5\n";
        let g = Hypergraph::parse(text).unwrap();
        assert_eq!((g.r(), g.n(), g.num_edges()), (3, 5, 2));
        assert_eq!(Hypergraph::parse(&g.to_hg_string()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("3 5 2\n1 2 3\n1 2 3\n", 3),
            ("3 5 1\n3 2 1\n", 2),
            ("3 5 1\n1 2 9\n", 2),
            ("3 0 0\n", 1),
            ("3 5 2\n1 2 3\n", 2),
            ("#c\n3 5 1\n1 2 3\n2 3 4\n", 4),
            ("3 5\n", 1),
            ("3 5 1\n1 2\n", 2),
        ];
        for (text, line) in cases {
            match Hypergraph::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn graph_wrapper() {
        let g = Graph::new(4, [(1, 2), (3, 2), (4, 1)]).unwrap();
        assert_eq!(g.neighbors(2), &[1, 3]);
        assert!(g.has_edge(1, 4) && !g.has_edge(3, 4));
        assert_eq!(g.max_degree(), 2);
        assert!(Graph::parse("3 3 1\n1 2 3\n").is_err());
    }
}
