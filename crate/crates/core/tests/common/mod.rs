//! Brute-force oracles shared by the integration tests. None of them call
//! the library's counting or search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use f5lab::{Edge, Hypergraph3};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn union(es: &[&Edge]) -> BTreeSet<u32> {
    es.iter().flat_map(|e| e.0).collect()
}

fn shared(a: &Edge, b: &Edge) -> usize {
    a.0.iter().filter(|v| b.0.contains(v)).count()
}

/// Three distinct edges form an F5: two of them share a pair, the third
/// avoids that pair, and five vertices are used in total.
pub fn is_f5_triple(a: &Edge, b: &Edge, c: &Edge) -> bool {
    if union(&[a, b, c]).len() != 5 {
        return false;
    }
    let rot = [(a, b, c), (a, c, b), (b, c, a)];
    rot.iter().any(|(x, y, base)| {
        shared(x, y) == 2 && x.0.iter().filter(|v| y.0.contains(v)).all(|v| !base.0.contains(v))
    })
}

pub fn is_k4minus_triple(a: &Edge, b: &Edge, c: &Edge) -> bool {
    union(&[a, b, c]).len() == 4
}

pub fn brute_count(h: &Hypergraph3, pred: fn(&Edge, &Edge, &Edge) -> bool) -> u64 {
    let e = h.edges();
    let mut count = 0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            for k in j + 1..e.len() {
                if pred(&e[i], &e[j], &e[k]) {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn brute_f5_free(edges: &[Edge]) -> bool {
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            for k in j + 1..edges.len() {
                if is_f5_triple(&edges[i], &edges[j], &edges[k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Size and number of the largest F5-free edge subsets, by scanning all
/// `2^m` subsets.
pub fn exhaustive_max(h: &Hypergraph3) -> (usize, usize) {
    let e = h.edges();
    let m = e.len();
    assert!(m <= 22, "exhaustive oracle limited to 22 edges");
    let mut triples: Vec<u32> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if is_f5_triple(&e[i], &e[j], &e[k]) {
                    triples.push((1 << i) | (1 << j) | (1 << k));
                }
            }
        }
    }
    let (mut best, mut count) = (0, 0);
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size < best || triples.iter().any(|&t| mask & t == t) {
            continue;
        }
        if size > best {
            best = size;
            count = 0;
        }
        count += 1;
    }
    (best, count)
}

/// Every 3-colouring of `0..n`, brute force.
pub fn brute_max_crossing(h: &Hypergraph3) -> usize {
    let n = h.n();
    let mut best = 0;
    let total = 3usize.pow(n as u32);
    let mut colour = vec![0u8; n];
    for code in 0..total {
        let mut x = code;
        for c in colour.iter_mut() {
            *c = (x % 3) as u8;
            x /= 3;
        }
        let k = h
            .edges()
            .iter()
            .filter(|e| {
                let [a, b, c] = e.0.map(|v| colour[v as usize]);
                a != b && b != c && a != c
            })
            .count();
        best = best.max(k);
    }
    best
}

pub fn max_composition_product(n: usize) -> usize {
    let mut best = 0;
    for a in 0..=n {
        for b in 0..=n - a {
            best = best.max(a * b * (n - a - b));
        }
    }
    best
}

pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Hypergraph3 {
    let mut triples = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            for c in b + 1..n as u32 {
                if rng.gen::<f64>() < p {
                    triples.push((a, b, c));
                }
            }
        }
    }
    Hypergraph3::build(n, &triples).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn binom(a: u64, b: u64) -> BigInt {
    let mut r = BigInt::one();
    for k in 0..b {
        r = r * BigInt::from(a - k) / BigInt::from(k + 1);
    }
    r
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap().ln()
    } else {
        let shift = bits - 1000;
        (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `ln g(p, s, r, i)` for integer `n, s, r, i` and `p = num/den`, in exact
/// integer arithmetic, with `g` itself.
pub fn exact_ln_g(n: u64, num: u64, den: u64, s: u64, r: u64, i: u64) -> (f64, f64) {
    let per = BigInt::from(num).pow((1 + i) as u32) * binom(s, i);
    let top = BigInt::from(n) * binom(n, s) * binom(n * n, r) * per.pow(r as u32);
    let bottom = BigInt::from(den).pow(((1 + i) * r) as u32);
    let ln = ln_big(&top) - ln_big(&bottom);
    (ln, ln.exp())
}
