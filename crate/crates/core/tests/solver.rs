mod common;

use common::{brute_f5_free, brute_max_crossing, exhaustive_max, max_composition_product, random_hypergraph, rng};
use f5lab::hypergraph::{balanced_tripartite, f5};
use f5lab::motif::is_f5_free;
use f5lab::solver::{
    is_tripartite, max_f5_free, t_of_g, verify_max_and_tripartite, PartitionMode, SolveOptions,
    DEFAULT_NODE_BUDGET,
};
use f5lab::{Error, Hypergraph3, Vertex};
use proptest::prelude::*;

fn small_host() -> impl Strategy<Value = Hypergraph3> {
    (4usize..=7, any::<u64>(), 0.1f64..0.6)
        .prop_map(|(n, seed, p)| random_hypergraph(&mut rng(seed), n, p))
        .prop_filter("exhaustive oracle is limited to 18 edges", |h| h.len() <= 18)
}

/// Every vertex class is a set of interchangeable vertices: a triple is an
/// edge iff its multiset of classes is kept.
fn blow_up() -> impl Strategy<Value = Hypergraph3> {
    (proptest::collection::vec(1usize..=3, 2..=4), any::<u64>())
        .prop_map(|(sizes, seed)| {
            let class: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &k)| std::iter::repeat(c).take(k)).collect();
            let n = class.len();
            let mut keep = std::collections::HashMap::new();
            let mut r = rng(seed);
            let mut triples = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        let mut key = [class[a], class[b], class[c]];
                        key.sort_unstable();
                        if *keep.entry(key).or_insert_with(|| rand::Rng::gen_bool(&mut r, 0.6)) {
                            triples.push((a as Vertex, b as Vertex, c as Vertex));
                        }
                    }
                }
            }
            Hypergraph3::build(n, &triples).unwrap()
        })
        .prop_filter("exhaustive oracle is limited to 18 edges", |h| h.len() <= 18)
}

fn exact(h: &Hypergraph3) -> usize {
    max_f5_free(h, &SolveOptions::exact()).unwrap().optimum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_matches_exhaustive(h in small_host()) {
        let r = max_f5_free(&h, &SolveOptions::enumerating()).unwrap();
        let (best, count) = exhaustive_max(&h);
        prop_assert_eq!(r.optimum, best);
        prop_assert_eq!(r.all_optima.unwrap().len(), count);
        prop_assert!(r.witness.is_subhypergraph_of(&h));
        prop_assert!(brute_f5_free(r.witness.edges()));
    }

    #[test]
    fn symmetric_hosts_match_exhaustive(h in blow_up()) {
        let r = max_f5_free(&h, &SolveOptions::enumerating()).unwrap();
        let (best, count) = exhaustive_max(&h);
        prop_assert_eq!(r.optimum, best);
        let optima = r.all_optima.unwrap();
        prop_assert_eq!(optima.len(), count);
        let distinct: std::collections::HashSet<Vec<_>> = optima.iter().map(|o| o.edges().to_vec()).collect();
        prop_assert_eq!(distinct.len(), count);
        prop_assert!(optima.iter().all(|o| o.len() == best && brute_f5_free(o.edges()) && o.is_subhypergraph_of(&h)));
    }

    #[test]
    fn greedy_is_feasible_and_below_exact(h in small_host()) {
        let g = max_f5_free(&h, &SolveOptions::greedy()).unwrap();
        prop_assert!(g.witness.is_subhypergraph_of(&h));
        prop_assert!(is_f5_free(&g.witness));
        prop_assert!(g.optimum <= exact(&h));
    }

    #[test]
    fn optimum_at_least_t(h in small_host()) {
        let (t, pi) = t_of_g(&h, PartitionMode::Exact, DEFAULT_NODE_BUDGET).unwrap();
        prop_assert_eq!(t, brute_max_crossing(&h));
        prop_assert_eq!(h.edges().iter().filter(|e| pi.is_crossing(e)).count(), t);
        prop_assert!(exact(&h) >= t);
    }

    #[test]
    fn t_invariant_under_relabeling(h in small_host(), shuffle in any::<u64>()) {
        let n = h.n();
        let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
        let mut s = shuffle;
        for i in (1..n).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s = s.rotate_left(7) ^ 0x9E37_79B9;
        }
        let moved = h.relabel(&perm);
        let t = |x: &Hypergraph3| t_of_g(x, PartitionMode::Exact, DEFAULT_NODE_BUDGET).unwrap().0;
        prop_assert_eq!(t(&h), t(&moved));
        prop_assert_eq!(exact(&h), exact(&moved));
    }

    #[test]
    fn tripartite_iff_all_edges_cross(h in small_host()) {
        let (t, _) = t_of_g(&h, PartitionMode::Exact, DEFAULT_NODE_BUDGET).unwrap();
        let cert = is_tripartite(&h);
        prop_assert_eq!(cert.is_tripartite(), t == h.len());
        if let Some(pi) = cert.partition {
            prop_assert!(h.edges().iter().all(|e| pi.is_crossing(e)));
        }
    }

    #[test]
    fn local_search_never_exceeds_exact(h in small_host(), seed in any::<u64>()) {
        let (t, _) = t_of_g(&h, PartitionMode::Exact, DEFAULT_NODE_BUDGET).unwrap();
        let (l, pi) = t_of_g(&h, PartitionMode::LocalSearch { restarts: 4, seed }, 0).unwrap();
        prop_assert!(l <= t);
        prop_assert_eq!(h.edges().iter().filter(|e| pi.is_crossing(e)).count(), l);
    }
}

#[test]
fn complete_hosts_match_composition_product() {
    for n in 3..=9 {
        let (t, _) = t_of_g(&Hypergraph3::complete(n), PartitionMode::Exact, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t, max_composition_product(n), "n = {n}");
    }
}

#[test]
fn complete_host_optima_counts() {
    // K6 by exhaustive search; K12 has one optimum per balanced tripartition
    let k6 = Hypergraph3::complete(6);
    let r = max_f5_free(&k6, &SolveOptions::enumerating()).unwrap();
    assert_eq!((r.optimum, r.all_optima.unwrap().len()), exhaustive_max(&k6));
    let k12 = Hypergraph3::complete(12);
    let r = max_f5_free(&k12, &SolveOptions::enumerating()).unwrap();
    assert_eq!(r.optimum, 64);
    let optima = r.all_optima.unwrap();
    assert_eq!(optima.len(), 5775);
    assert!(optima.iter().all(|o| is_tripartite(o).is_tripartite()));
}

#[test]
fn small_complete_hosts_have_tripartite_optima() {
    for n in 4..=7 {
        let k = Hypergraph3::complete(n);
        let r = max_f5_free(&k, &SolveOptions::enumerating()).unwrap();
        let check = verify_max_and_tripartite(&k, &r, DEFAULT_NODE_BUDGET).unwrap();
        assert!(check.optimum_at_least_t);
        assert!(check.all_f5_free);
        assert_eq!(check.every_optimum_tripartite, check.tripartite_optima == check.optima);
    }
}

#[test]
fn fixed_hosts() {
    assert_eq!(exact(&f5()), 2);
    let (s, _) = balanced_tripartite(7);
    assert_eq!(exact(&s), s.len());
    assert_eq!(exact(&Hypergraph3::empty(5)), 0);
    assert!(!is_tripartite(&f5()).is_tripartite());
}

#[test]
fn budget_exhaustion_is_reported() {
    let k = Hypergraph3::complete(8);
    let opts = SolveOptions {
        node_budget: 10,
        ..SolveOptions::enumerating()
    };
    assert!(matches!(max_f5_free(&k, &opts), Err(Error::BudgetExhausted { .. })));
}

#[test]
fn verification_needs_enumeration() {
    let k = Hypergraph3::complete(5);
    let r = max_f5_free(&k, &SolveOptions::exact()).unwrap();
    assert!(verify_max_and_tripartite(&k, &r, DEFAULT_NODE_BUDGET).is_err());
    let g = max_f5_free(&k, &SolveOptions::greedy()).unwrap();
    assert!(verify_max_and_tripartite(&k, &g, DEFAULT_NODE_BUDGET).is_err());
}
