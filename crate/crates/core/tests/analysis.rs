mod common;

use std::path::PathBuf;

use common::{random_hypergraph, rng};
use f5lab::analysis::{
    audit_propositions, b_pi, classify_s, concentration_census, good_bad_split, k_of, shadow_j, AuditOptions, Constants,
    Regime,
};
use f5lab::hypergraph::{balanced_tripartite, partition_split};
use f5lab::motif::is_f5_free;
use f5lab::random::{sample_g3, Seed};
use f5lab::solver::{best_partition_for, max_f5_free, PartitionMode, SolveOptions, DEFAULT_NODE_BUDGET};
use f5lab::{Hypergraph3, Partition3, Vertex};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Instance {
    g: Hypergraph3,
    h: Hypergraph3,
    pi: Partition3,
    p: f64,
}

fn instance() -> impl Strategy<Value = Instance> {
    (5usize..=10, any::<u64>(), 0.2f64..0.9, any::<u64>(), 0.0f64..1.0).prop_map(|(n, seed, p, mask_seed, keep)| {
        let mut r = rng(seed);
        let g = random_hypergraph(&mut r, n, p);
        let mut m = rng(mask_seed);
        let h = g.filter(|_| rand::Rng::gen::<f64>(&mut m) < keep);
        let parts = (0..n).map(|_| rand::Rng::gen_range(&mut r, 1u8..=3)).collect();
        Instance { g, h, pi: Partition3::new(parts).unwrap(), p }
    })
}

fn consts_small() -> Constants {
    Constants {
        eps1: 0.05,
        eps2: 0.01,
        ..Constants::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn b_partitions_h(x in instance()) {
        let b = b_pi(&x.g, &x.pi, x.p);
        let inside = b.in_h(&x.h);
        let rest = b.h_prime(&x.h);
        prop_assert_eq!(inside.len() + rest.len(), x.h.len());
        prop_assert!(inside.edges().iter().all(|e| b.b.contains_edge(e)));
        prop_assert!(rest.edges().iter().all(|e| !b.b.contains_edge(e)));
        prop_assert!(b.b.is_subhypergraph_of(&x.g));
        for e in b.b.edges() {
            prop_assert!(e.pairs().iter().any(|(pr, _)| b.q.contains(pr)));
        }
    }

    #[test]
    fn s_classes_partition_s(x in instance()) {
        for regime in [Regime::Divided, Regime::Undivided] {
            let c = classify_s(&x.g, &x.h, &x.pi, &consts_small(), x.p, regime).unwrap();
            let mut joined: Vec<Vertex> = c.s1.iter().chain(&c.s2).copied().collect();
            joined.sort_unstable();
            prop_assert_eq!(&joined, &c.s);
            prop_assert!(c.s1.iter().all(|v| !c.s2.contains(v)));
            prop_assert!(c.s.iter().all(|&v| x.pi.part(v) == 1));
        }
    }

    #[test]
    fn good_and_bad_cover_missing_part_one_edges(x in instance()) {
        let split = partition_split(&x.g, &x.h, &x.pi).unwrap();
        let j = shadow_j(&x.h, &x.pi);
        let (good, bad) = good_bad_split(&x.g, &split.missing, &j, &x.pi, &consts_small(), x.p);
        let through_one = split.missing.edges().iter().filter(|e| e.0.iter().any(|&v| x.pi.part(v) == 1)).count();
        prop_assert_eq!(good.len() + bad.len(), through_one);
        prop_assert!(good.iter().all(|e| !bad.contains(e)));
    }

    #[test]
    fn k_sizes(x in instance(), v_pick in any::<prop::sample::Index>(), a_mask in any::<u16>()) {
        let n = x.g.n();
        let v = v_pick.index(n) as Vertex;
        let a: Vec<Vertex> = (0..n as Vertex).filter(|&w| w != v && a_mask >> w & 1 == 1).collect();
        let t: Vec<(Vertex, Vertex)> = x.g.incident_edges(v)
            .filter_map(|e| e.others(v))
            .filter(|&(y, z)| !a.contains(&y) && !a.contains(&z))
            .collect();
        let rep = k_of(&x.g, v, x.h.edges(), &a, &t).unwrap();
        prop_assert!(rep.in_host.len() <= rep.k.len());
        prop_assert!(rep.k.len() <= a.len() * t.len());
        prop_assert_eq!(rep.witnesses.len(), rep.in_host.len());
        for w in &rep.witnesses {
            prop_assert!(w.is_valid());
            prop_assert!(w.edges().iter().all(|e| x.g.contains_edge(e)));
        }
    }

    #[test]
    fn j_lives_in_part_one(x in instance()) {
        let j = shadow_j(&x.h, &x.pi);
        for (a, b) in j.edges() {
            prop_assert!(x.pi.part(a) == 1 && x.pi.part(b) == 1);
            prop_assert!(x.h.codegree_neighbors(a, b).iter().next().is_some());
        }
    }
}

#[test]
fn census_counts() {
    let g = sample_g3(30, 0.2, Seed(3)).unwrap();
    let (_, pi) = balanced_tripartite(30);
    let s: Vec<Vertex> = (0..15).collect();
    let rep = concentration_census(&g, Some(&pi), 0.2, Some(&s));
    let degrees: Vec<usize> = (0..30).map(|v| g.degree(v)).collect();
    assert_eq!(rep.min_degree, *degrees.iter().min().unwrap());
    assert_eq!(rep.max_degree, *degrees.iter().max().unwrap());
    assert_eq!(rep.edges, g.len());
    assert!((rep.expected_degree - 0.2 * 406.0).abs() < 1e-9);
    assert_eq!(rep.max_codegree, g.max_codegree());
}

fn audit_fixture() -> serde_json::Value {
    let n = 12;
    let p = 0.4;
    let g = sample_g3(n, p, Seed(20_240_601)).unwrap();
    let h = max_f5_free(&g, &SolveOptions::exact()).unwrap().witness;
    assert!(is_f5_free(&h));
    let pi = best_partition_for(&h, PartitionMode::Exact, DEFAULT_NODE_BUDGET).unwrap();
    let rep = audit_propositions(&g, &h, &pi, &Constants::default(), p, &AuditOptions::default()).unwrap();
    assert!(rep.lines.iter().all(|l| !l.preconditions_met || l.holds || !l.lemma_id.starts_with("chain")));
    serde_json::json!({
        "g": g.to_text(),
        "h": h.to_text(),
        "pi": pi.to_text(),
        "report": rep,
    })
}

#[test]
fn audit_matches_golden_file() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/audit_n12.json");
    let got = serde_json::to_string_pretty(&audit_fixture()).unwrap() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() || !path.exists() {
        std::fs::write(&path, &got).unwrap();
    }
    assert_eq!(got, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn complete_tripartite_host_is_tight() {
    let (s, pi) = balanced_tripartite(9);
    let rep = audit_propositions(&s, &s, &pi, &Constants::default(), 1.0, &AuditOptions::default()).unwrap();
    assert_eq!(rep.sizes.hbar_pi, 0);
    assert!(rep.h_tripartite);
    assert!(rep.lines.iter().all(|l| l.holds));
}
