//! Library results against brute-force oracles written independently here.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spanhyper_core::constructions::{kr_construction, sigma_exact};
use spanhyper_core::embedder::{max_bipartite_matching, Bipartite, Matching};
use spanhyper_core::generators::{gnp, gnp_graph, hamilton_cycle, hamilton_valid, kfactor};
use spanhyper_core::search::{find_embedding, validate_embedding, SearchOutcome, DEFAULT_BUDGET};
use spanhyper_core::second_moment::{count_copies, OracleCaps};
use spanhyper_core::thresholds::{
    dense_gamma_floor, e_sub, gamma, gamma_closed_form, regular_gamma_bounds, FormKind, GammaFamily,
};
use spanhyper_core::{Graph, Hypergraph};

type Vertex = u32;

fn subsets(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    fn go(start: Vertex, n: Vertex, k: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n as Vertex, k, &mut Vec::new(), &mut out);
    out
}

/// All injections `[k] -> [n]`, as image vectors.
fn injections(k: usize, n: usize) -> Vec<Vec<Vertex>> {
    fn go(k: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v as Vertex);
                go(k, n, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut vec![false; n + 1], &mut Vec::new(), &mut out);
    out
}

fn image_edges(f: &Hypergraph, map: &[Vertex]) -> BTreeSet<Vec<Vertex>> {
    f.edges()
        .map(|e| {
            let mut img: Vec<Vertex> = e.iter().map(|&x| map[x as usize - 1]).collect();
            img.sort_unstable();
            img
        })
        .collect()
}

fn brute_contains(host: &Hypergraph, f: &Hypergraph) -> bool {
    let edges: BTreeSet<Vec<Vertex>> = host.edges().map(|e| e.to_vec()).collect();
    injections(f.n(), host.n())
        .iter()
        .any(|m| image_edges(f, m).is_subset(&edges))
}

fn brute_e_sub(h: &Hypergraph, v: usize) -> usize {
    subsets(h.n(), v)
        .iter()
        .map(|s| h.edges().filter(|e| e.iter().all(|x| s.binary_search(x).is_ok())).count())
        .max()
        .unwrap_or(0)
}

fn brute_gamma(h: &Hypergraph) -> BigRational {
    (h.r() + 1..=h.n())
        .map(|v| BigRational::new(brute_e_sub(h, v).into(), (v - 2).into()))
        .max()
        .unwrap()
}

#[test]
fn containment_matches_permutation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..60 {
        let n = rng.random_range(4..=7);
        let r = rng.random_range(2..=3);
        let host = gnp(n, r, rng.random_range(0.2..0.9), case).unwrap();
        let k = rng.random_range(r..=n);
        let f = gnp(k, r, 0.4, 1000 + case).unwrap();
        let spanning = k == n;
        let got = find_embedding(&host, &f, spanning, DEFAULT_BUDGET).unwrap();
        assert_eq!(got.is_found(), brute_contains(&host, &f), "case {case}");
        if let SearchOutcome::Found(e) = &got {
            assert!(validate_embedding(&host, &f, e));
        }
    }
}

#[test]
fn e_sub_matches_subset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..40 {
        let n = rng.random_range(5..=9);
        let r = rng.random_range(2..=4).min(n - 1);
        let h = gnp(n, r, rng.random_range(0.1..0.8), case).unwrap();
        for v in r..=n {
            assert_eq!(e_sub(&h, v).unwrap(), brute_e_sub(&h, v), "case {case}, v = {v}");
        }
        let rep = gamma(&h).unwrap();
        assert_eq!(rep.gamma, brute_gamma(&h));
        assert!(rep.is_consistent());
    }
}

#[test]
fn hamilton_gamma_matches_closed_form() {
    for r in 2..=4 {
        for ell in 0..r {
            for n in r + 1..=12 {
                if !hamilton_valid(n, r, ell) {
                    continue;
                }
                let h = hamilton_cycle(n, r, ell).unwrap();
                let cf = gamma_closed_form(GammaFamily::Hamilton { n, r, ell }).unwrap();
                assert_eq!(cf.kind, FormKind::Exact);
                assert_eq!(gamma(&h).unwrap().gamma, cf.value, "n = {n}, r = {r}, ell = {ell}");
                assert_eq!(brute_gamma(&h), cf.value);
            }
        }
    }
}

#[test]
fn complete_gamma_closed_form() {
    for (n, r) in [(4, 3), (5, 3), (6, 4), (7, 3)] {
        let cf = gamma_closed_form(GammaFamily::Complete { n, r }).unwrap();
        assert_eq!(gamma(&Hypergraph::complete(n, r).unwrap()).unwrap().gamma, cf.value);
    }
}

#[test]
fn dense_floor_holds_when_edges_exceed_n_over_r() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    for case in 0..80 {
        let n = rng.random_range(5..=9);
        let r = rng.random_range(3..=4);
        let h = gnp(n, r, rng.random_range(0.02..0.3), case).unwrap();
        if h.num_edges() * r > n {
            assert!(gamma(&h).unwrap().gamma >= dense_gamma_floor(r), "case {case}");
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn regular_gamma_within_bounds() {
    // tight cycles are r-regular; K_t-factors are C(t-1, r-1)-regular
    let cases = [
        hamilton_cycle(8, 3, 2).unwrap(),
        hamilton_cycle(10, 3, 2).unwrap(),
        hamilton_cycle(9, 4, 3).unwrap(),
        kfactor(8, 3, 4).unwrap(),
        kfactor(10, 3, 5).unwrap(),
    ];
    for h in cases {
        let d = h.max_degree();
        assert!(h.degrees()[1..].iter().all(|&x| x == d));
        let (lo, hi) = regular_gamma_bounds(h.r(), d).unwrap();
        let g = spanhyper_core::rational::to_f64(&gamma(&h).unwrap().gamma);
        assert!(lo - 1e-12 <= g && g <= hi + 1e-12, "{lo} <= {g} <= {hi}");
    }
}

#[test]
fn copy_count_matches_injection_oracle() {
    let patterns = [
        hamilton_cycle(6, 3, 0).unwrap(),
        hamilton_cycle(6, 3, 2).unwrap(),
        hamilton_cycle(4, 2, 1).unwrap(),
        Hypergraph::new(3, 4, [vec![1, 2, 3], vec![2, 3, 4]]).unwrap(),
    ];
    for f in patterns {
        for n in f.n()..=f.n() + 1 {
            let mut copies = BTreeSet::new();
            for m in injections(f.n(), n) {
                copies.insert(image_edges(&f, &m));
            }
            let got = count_copies(&f, n, &OracleCaps::default()).unwrap();
            assert_eq!(got, BigUint::from(copies.len()), "n = {n}");
        }
    }
}

fn brute_matching(adj: &[Vec<usize>], right: usize) -> usize {
    fn go(l: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
        if l == adj.len() {
            return 0;
        }
        let mut best = go(l + 1, adj, used);
        for &w in &adj[l] {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(l + 1, adj, used));
                used[w] = false;
            }
        }
        best
    }
    go(0, adj, &mut vec![false; right])
}

#[test]
fn matching_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let left = rng.random_range(1..=8);
        let right = rng.random_range(1..=8);
        let density = rng.random_range(0.05..0.6);
        let adj: Vec<Vec<usize>> = (0..left)
            .map(|_| (0..right).filter(|_| rng.random::<f64>() < density).collect())
            .collect();
        let b = Bipartite::new(right, adj.clone()).unwrap();
        let best = brute_matching(&adj, right);
        match max_bipartite_matching(&b) {
            Matching::Saturating { pairs } => {
                assert_eq!(best, left);
                let distinct: BTreeSet<_> = pairs.iter().collect();
                assert_eq!(distinct.len(), left);
                assert!(pairs.iter().enumerate().all(|(l, w)| adj[l].contains(w)));
            }
            Matching::HallViolator { left: u, neighbours } => {
                assert!(best < left);
                assert_eq!(neighbours, b.neighbourhood(&u));
                assert!(neighbours.len() < u.len());
            }
        }
    }
}

fn brute_sigma(f: &Hypergraph) -> usize {
    let pairs: Vec<Vec<(Vertex, Vertex)>> = f
        .edges()
        .map(|e| {
            let mut ps = Vec::new();
            for i in 0..e.len() {
                for j in i + 1..e.len() {
                    ps.push((e[i], e[j]));
                }
            }
            ps
        })
        .collect();
    fn go(i: usize, pairs: &[Vec<(Vertex, Vertex)>], chosen: &mut BTreeSet<(Vertex, Vertex)>, n: usize) -> usize {
        if i == pairs.len() {
            let mut deg = vec![0; n + 1];
            for &(a, b) in chosen.iter() {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
            }
            return deg.into_iter().max().unwrap();
        }
        let mut best = usize::MAX;
        for &p in &pairs[i] {
            let fresh = chosen.insert(p);
            best = best.min(go(i + 1, pairs, chosen, n));
            if fresh {
                chosen.remove(&p);
            }
        }
        best
    }
    go(0, &pairs, &mut BTreeSet::new(), f.n())
}

#[test]
fn sigma_matches_pair_choice_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..40 {
        let n = rng.random_range(4..=7);
        let h = gnp(n, 3, 0.25, case).unwrap();
        if h.num_edges() == 0 || h.num_edges() > 7 {
            continue;
        }
        assert_eq!(sigma_exact(&h, DEFAULT_BUDGET).unwrap(), brute_sigma(&h), "case {case}");
    }
}

#[test]
fn kr_matches_clique_oracle() {
    for seed in 0..20 {
        let g = gnp_graph(8, 0.6, seed).unwrap();
        for r in 3..=4 {
            let expect: Vec<Vec<Vertex>> = subsets(8, r)
                .into_iter()
                .filter(|s| s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| g.has_edge(a, b))))
                .collect();
            assert_eq!(kr_construction(&g, r).unwrap().edge_list(), expect);
        }
    }
    assert_eq!(kr_construction(&Graph::complete(6).unwrap(), 3).unwrap(), Hypergraph::complete(6, 3).unwrap());
}
