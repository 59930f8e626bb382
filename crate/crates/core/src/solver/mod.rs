//! Maximum F5-free subhypergraphs, maximum tripartite subhypergraphs, and
//! the check that every maximum F5-free subhypergraph is tripartite.

mod branch;
pub mod tripartite;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph3};
use crate::motif::{f5_copies, find_f5, is_f5_free};

pub use tripartite::{best_partition_for, is_tripartite, t_of_g, PartitionMode, TripartiteCertificate};

use branch::{Conflicts, Search, Twins};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub mode: SolveMode,
    pub enumerate_all: bool,
    /// Maximum number of optima kept when enumerating.
    pub cap: usize,
    pub node_budget: u64,
}

pub const DEFAULT_CAP: usize = 1_000_000;
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;
pub const MAX_EXACT_EDGES: usize = 512;

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: SolveMode::Exact,
            enumerate_all: false,
            cap: DEFAULT_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl SolveOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn enumerating() -> Self {
        SolveOptions {
            enumerate_all: true,
            ..Self::default()
        }
    }

    pub fn greedy() -> Self {
        SolveOptions {
            mode: SolveMode::Greedy,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub nodes: u64,
    pub copies: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub optimum: usize,
    pub witness: Hypergraph3,
    pub all_optima: Option<Vec<Hypergraph3>>,
    /// More optima exist than `cap` allowed to keep.
    pub truncated: bool,
    pub mode: SolveMode,
    pub stats: SolveStats,
}

pub fn max_f5_free(g: &Hypergraph3, opts: &SolveOptions) -> Result<SolveResult> {
    let start = Instant::now();
    match opts.mode {
        SolveMode::Greedy => {
            let witness = greedy(g);
            Ok(SolveResult {
                optimum: witness.len(),
                witness,
                all_optima: None,
                truncated: false,
                mode: SolveMode::Greedy,
                stats: SolveStats {
                    elapsed: start.elapsed(),
                    ..SolveStats::default()
                },
            })
        }
        SolveMode::Exact => exact(g, opts, start),
    }
}

fn exact(g: &Hypergraph3, opts: &SolveOptions, start: Instant) -> Result<SolveResult> {
    let edges = g.edges();
    let index = |e: &Edge| g.edge_index(e).expect("copy edges lie in the host") as u32;
    let copies: Vec<[u32; 3]> = f5_copies(g)
        .iter()
        .map(|c| c.edges().map(|e| index(&e)))
        .collect();
    let ncopies = copies.len();
    let cf = Conflicts::new(edges.len(), copies);
    let twins = Twins::new(g.n(), edges.iter().map(|e| e.0).collect());
    let tw = twins.as_ref();

    let start_set = {
        let greedy_h = greedy(g);
        let (_, pi) = t_of_g(g, PartitionMode::LocalSearch { restarts: 8, seed: 0 }, 0)?;
        let tri = g.filter(|e| pi.is_crossing(e));
        let best = if tri.len() > greedy_h.len() { tri } else { greedy_h };
        edges.iter().map(|e| best.contains_edge(e)).collect::<Vec<bool>>()
    };
    let incumbent = Some(start_set);
    let (all, cap, budget) = (opts.enumerate_all, opts.cap, opts.node_budget);
    let outcome = match edges.len().div_ceil(64) {
        0..=1 => Search::<1>::new(&cf, tw, incumbent, all, cap, budget).run()?,
        2 => Search::<2>::new(&cf, tw, incumbent, all, cap, budget).run()?,
        3..=4 => Search::<4>::new(&cf, tw, incumbent, all, cap, budget).run()?,
        5..=8 => Search::<8>::new(&cf, tw, incumbent, all, cap, budget).run()?,
        _ => {
            return Err(Error::Invalid(format!(
                "exact mode supports at most {MAX_EXACT_EDGES} host edges, got {}",
                edges.len()
            )))
        }
    };

    let to_h = |set: &[bool]| {
        Hypergraph3::from_edges(
            g.n(),
            edges.iter().zip(set).filter(|(_, &b)| b).map(|(e, _)| *e).collect(),
        )
    };
    let witness = to_h(&outcome.best_set);
    let all_optima = outcome.all.map(|sets| sets.iter().map(|s| to_h(s)).collect());
    Ok(SolveResult {
        optimum: outcome.best,
        witness,
        all_optima,
        truncated: outcome.truncated,
        mode: SolveMode::Exact,
        stats: SolveStats {
            nodes: outcome.nodes,
            copies: ncopies,
            elapsed: start.elapsed(),
        },
    })
}

/// Deletes, from each F5 copy met, its edge lying in the most copies, then
/// re-adds deleted edges that no longer close a copy. The result is F5-free
/// and maximal.
fn greedy(g: &Hypergraph3) -> Hypergraph3 {
    let mut h = g.clone();
    let mut removed = Vec::new();
    loop {
        let copies = f5_copies(&h);
        if copies.is_empty() {
            break;
        }
        let mut load = std::collections::HashMap::new();
        for c in &copies {
            for e in c.edges() {
                *load.entry(e).or_insert(0usize) += 1;
            }
        }
        let victim = copies[0]
            .edges()
            .into_iter()
            .max_by_key(|e| (load[e], std::cmp::Reverse(*e)))
            .expect("three edges");
        removed.push(victim);
        h = h.filter(|e| *e != victim);
    }
    for e in removed.into_iter().rev() {
        let candidate = h.with_edge(e);
        if is_f5_free(&candidate) {
            h = candidate;
        }
    }
    h
}

/// Outcome of checking that every maximum F5-free subhypergraph of a host
/// is tripartite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimaCheck {
    pub optimum: usize,
    pub t_value: usize,
    pub optimum_at_least_t: bool,
    pub optima: usize,
    pub all_f5_free: bool,
    pub tripartite_optima: usize,
    pub every_optimum_tripartite: bool,
    pub truncated: bool,
}

/// Requires an exact, enumerating [`SolveResult`] for `g`.
pub fn verify_max_and_tripartite(g: &Hypergraph3, result: &SolveResult, node_budget: u64) -> Result<OptimaCheck> {
    if result.mode != SolveMode::Exact {
        return Err(Error::Invalid("verification needs an exact solve".into()));
    }
    let optima = result
        .all_optima
        .as_ref()
        .ok_or_else(|| Error::Invalid("verification needs the enumerated optima".into()))?;
    let (t_value, _) = t_of_g(g, PartitionMode::Exact, node_budget)?;
    let mut all_free = true;
    let mut tripartite_optima = 0;
    for h in optima {
        all_free &= h.len() == result.optimum && h.is_subhypergraph_of(g) && find_f5(h).is_none();
        if is_tripartite(h).is_tripartite() {
            tripartite_optima += 1;
        }
    }
    Ok(OptimaCheck {
        optimum: result.optimum,
        t_value,
        optimum_at_least_t: result.optimum >= t_value,
        optima: optima.len(),
        all_f5_free: all_free,
        tripartite_optima,
        every_optimum_tripartite: tripartite_optima == optima.len(),
        truncated: result.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{balanced_tripartite, f5};

    /// Largest F5-free subset by scanning all 2^m subsets.
    fn exhaustive(g: &Hypergraph3) -> (usize, usize) {
        let m = g.len();
        let copies: Vec<u32> = f5_copies(g)
            .iter()
            .map(|c| c.edges().iter().map(|e| 1u32 << g.edge_index(e).unwrap()).sum())
            .collect();
        let (mut best, mut count) = (0, 0);
        for mask in 0u32..(1 << m) {
            if copies.iter().any(|&c| mask & c == c) {
                continue;
            }
            let size = mask.count_ones() as usize;
            if size > best {
                best = size;
                count = 1;
            } else if size == best {
                count += 1;
            }
        }
        (best, count)
    }

    #[test]
    fn f5_host() {
        let r = max_f5_free(&f5(), &SolveOptions::enumerating()).unwrap();
        assert_eq!(r.optimum, 2);
        assert_eq!(r.all_optima.as_ref().unwrap().len(), 3);
        let check = verify_max_and_tripartite(&f5(), &r, 1_000_000).unwrap();
        assert!(check.every_optimum_tripartite);
        assert!(check.optimum_at_least_t);
    }

    #[test]
    fn tripartite_host_is_its_own_optimum() {
        let (s, _) = balanced_tripartite(7);
        let r = max_f5_free(&s, &SolveOptions::enumerating()).unwrap();
        assert_eq!(r.optimum, s.len());
        assert_eq!(r.all_optima.as_ref().unwrap(), &vec![s.clone()]);
        assert!(verify_max_and_tripartite(&s, &r, 1_000_000).unwrap().every_optimum_tripartite);
    }

    #[test]
    fn complete_five_matches_exhaustive() {
        let k5 = Hypergraph3::complete(5);
        let (best, count) = exhaustive(&k5);
        assert!(best >= 6);
        let r = max_f5_free(&k5, &SolveOptions::enumerating()).unwrap();
        assert_eq!(r.optimum, best);
        assert_eq!(r.all_optima.as_ref().unwrap().len(), count);
        assert!(is_f5_free(&r.witness));
    }

    #[test]
    fn greedy_is_maximal_and_free() {
        let k6 = Hypergraph3::complete(6);
        let r = max_f5_free(&k6, &SolveOptions::greedy()).unwrap();
        assert!(is_f5_free(&r.witness));
        for e in k6.edges() {
            if !r.witness.contains_edge(e) {
                assert!(!is_f5_free(&r.witness.with_edge(*e)));
            }
        }
        let exact = max_f5_free(&k6, &SolveOptions::exact()).unwrap();
        assert!(r.optimum <= exact.optimum);
    }

    #[test]
    fn budget_is_reported() {
        let opts = SolveOptions {
            node_budget: 3,
            ..SolveOptions::enumerating()
        };
        assert!(matches!(
            max_f5_free(&Hypergraph3::complete(7), &opts),
            Err(Error::BudgetExhausted { budget: 3 })
        ));
    }

    #[test]
    fn verify_needs_enumeration() {
        let r = max_f5_free(&f5(), &SolveOptions::exact()).unwrap();
        assert!(verify_max_and_tripartite(&f5(), &r, 1000).is_err());
        let g = max_f5_free(&f5(), &SolveOptions::greedy()).unwrap();
        assert!(verify_max_and_tripartite(&f5(), &g, 1000).is_err());
    }
}
