//! Occurrences of the generalized triangle F5 = {abc, abd, cde}, of K4⁻
//! (three edges on four vertices) and of the partition-aware pattern F̂5.
//!
//! Copies are unlabeled: an F5 copy is a set of three host edges. Its two
//! edges sharing a pair are unique, so each copy is found exactly once from
//! its shared pair `{a, b}`, the unordered pair `{c, d}` and the base edge.
//! The labeled count is `|Aut(F5)| = 4` times larger.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hypergraph::{link_graph_masked, Edge, Hypergraph3, Partition3, Vertex};

/// One copy of F5: `pair_edges = [abc, abd]`, `base = cde` with `e ∉ {a, b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F5Copy {
    pub pair_edges: [Edge; 2],
    pub base: Edge,
}

impl F5Copy {
    pub fn edges(&self) -> [Edge; 3] {
        [self.pair_edges[0], self.pair_edges[1], self.base]
    }

    pub fn shared_pair(&self) -> (Vertex, Vertex) {
        let [x, y] = self.pair_edges;
        let common: Vec<Vertex> = x.0.iter().copied().filter(|v| y.contains(*v)).collect();
        (common[0], common[1])
    }

    /// Checks the structural invariants against the pattern definition.
    pub fn is_valid(&self) -> bool {
        let [e1, e2] = self.pair_edges;
        if e1 == e2 || e1 == self.base || e2 == self.base {
            return false;
        }
        let shared: Vec<Vertex> = e1.0.iter().copied().filter(|v| e2.contains(*v)).collect();
        if shared.len() != 2 {
            return false;
        }
        let rest: Vec<Vertex> = e1
            .0
            .iter()
            .chain(e2.0.iter())
            .copied()
            .filter(|v| !shared.contains(v))
            .collect();
        let mut union: Vec<Vertex> = self.edges().iter().flat_map(|e| e.0).collect();
        union.sort_unstable();
        union.dedup();
        union.len() == 5
            && rest.iter().all(|&v| self.base.contains(v))
            && shared.iter().all(|&v| !self.base.contains(v))
    }
}

/// Visits every F5 copy of `h`; the visitor returns `false` to stop early.
fn visit_f5(h: &Hypergraph3, mut visit: impl FnMut(F5Copy) -> bool) {
    let mut pairs: Vec<(&(Vertex, Vertex), &Vec<Vertex>)> = h.pair_neighborhoods().collect();
    pairs.sort_unstable_by_key(|(p, _)| **p);
    for (&(a, b), nb) in pairs {
        if nb.len() < 2 {
            continue;
        }
        for (i, &c) in nb.iter().enumerate() {
            for &d in &nb[i + 1..] {
                for &e in h.codegree_neighbors(c, d) {
                    if e == a || e == b {
                        continue;
                    }
                    let copy = F5Copy {
                        pair_edges: [Edge::new(a, b, c), Edge::new(a, b, d)],
                        base: Edge::new(c, d, e),
                    };
                    if !visit(copy) {
                        return;
                    }
                }
            }
        }
    }
}

pub fn count_f5(h: &Hypergraph3) -> u64 {
    let mut total = 0u64;
    for (&(a, b), nb) in h.pair_neighborhoods() {
        for (i, &c) in nb.iter().enumerate() {
            for &d in &nb[i + 1..] {
                let cd = h.codegree_neighbors(c, d);
                let blocked = cd.iter().filter(|&&e| e == a || e == b).count();
                total += (cd.len() - blocked) as u64;
            }
        }
    }
    total
}

/// All F5 copies, ordered by shared pair, then `{c, d}`, then base vertex.
pub fn f5_copies(h: &Hypergraph3) -> Vec<F5Copy> {
    let mut out = Vec::new();
    visit_f5(h, |c| {
        out.push(c);
        true
    });
    out
}

/// First F5 copy found, or `None` if `h` is F5-free.
pub fn find_f5(h: &Hypergraph3) -> Option<F5Copy> {
    let mut found = None;
    visit_f5(h, |c| {
        found = Some(c);
        false
    });
    found
}

pub fn is_f5_free(h: &Hypergraph3) -> bool {
    find_f5(h).is_none()
}

/// Number of 3-edge subsets spanning exactly four vertices: each 4-set
/// holding `t` edges contributes `C(t, 3)`.
pub fn count_k4minus(h: &Hypergraph3) -> u64 {
    let mut quads: HashMap<[Vertex; 4], ()> = HashMap::new();
    for (&(a, b), nb) in h.pair_neighborhoods() {
        for (i, &c) in nb.iter().enumerate() {
            for &d in &nb[i + 1..] {
                let mut q = [a, b, c, d];
                q.sort_unstable();
                quads.insert(q, ());
            }
        }
    }
    quads
        .keys()
        .map(|q| {
            let t = (0..4)
                .filter(|&skip| {
                    let rest: Vec<Vertex> = (0..4).filter(|&i| i != skip).map(|i| q[i]).collect();
                    h.contains(rest[0], rest[1], rest[2])
                })
                .count() as u64;
            t * t.saturating_sub(1) * t.saturating_sub(2) / 6
        })
        .sum()
}

/// A 4-set `{w1, w2, y, z}` with `w1yz, w2yz` crossing edges of the host and
/// an edge of the subhypergraph through `w1, w2` (inside part 1) avoiding
/// `y` and `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F5HatCopy {
    pub w1: Vertex,
    pub w2: Vertex,
    pub y: Vertex,
    pub z: Vertex,
    pub witness: Edge,
}

impl F5HatCopy {
    /// Checks every defining condition against `(g, h, pi)`.
    pub fn is_valid(&self, g: &Hypergraph3, h: &Hypergraph3, pi: &Partition3) -> bool {
        let crossing_in_g = |w: Vertex| {
            let e = Edge::new(w, self.y, self.z);
            g.contains(w, self.y, self.z) && pi.is_crossing(&e)
        };
        self.w1 != self.w2
            && pi.part(self.w1) == 1
            && pi.part(self.w2) == 1
            && pi.part(self.y) == 2
            && pi.part(self.z) == 3
            && crossing_in_g(self.w1)
            && crossing_in_g(self.w2)
            && h.contains_edge(&self.witness)
            && self.witness.contains(self.w1)
            && self.witness.contains(self.w2)
            && !self.witness.contains(self.y)
            && !self.witness.contains(self.z)
    }

    /// The F5 `{w1yz, w2yz, witness}` this copy spans.
    pub fn as_f5(&self) -> F5Copy {
        let x = self
            .witness
            .0
            .iter()
            .copied()
            .find(|&v| v != self.w1 && v != self.w2)
            .expect("witness has a third vertex");
        F5Copy {
            pair_edges: [Edge::new(self.y, self.z, self.w1), Edge::new(self.y, self.z, self.w2)],
            base: Edge::new(self.w1, self.w2, x),
        }
    }
}

/// All F̂5 copies with `y` in part 2 and `z` in part 3; each 4-set once,
/// with `w1 < w2` and the lowest qualifying witness edge.
pub fn f5hat_copies(g: &Hypergraph3, h: &Hypergraph3, pi: &Partition3) -> Result<Vec<F5HatCopy>> {
    h.check_sub(g)?;
    let (m2, m3) = (pi.mask(2), pi.mask(3));
    let v1 = pi.members(1);
    let mut links: HashMap<Vertex, Vec<(Vertex, Vertex)>> = HashMap::new();
    let mut out = Vec::new();
    for (i, &w1) in v1.iter().enumerate() {
        for &w2 in &v1[i + 1..] {
            let thirds = h.codegree_neighbors(w1, w2);
            if thirds.is_empty() {
                continue;
            }
            for w in [w1, w2] {
                links
                    .entry(w)
                    .or_insert_with(|| link_graph_masked(g, w, &m2, &m3).edges().collect());
            }
            let l2 = &links[&w2];
            for &(a, b) in &links[&w1] {
                if l2.binary_search(&(a, b)).is_err() {
                    continue;
                }
                let (y, z) = if m2[a as usize] { (a, b) } else { (b, a) };
                if let Some(&x) = thirds.iter().find(|&&x| x != y && x != z) {
                    out.push(F5HatCopy {
                        w1,
                        w2,
                        y,
                        z,
                        witness: Edge::new(w1, w2, x),
                    });
                }
            }
        }
    }
    out.sort_unstable_by_key(|c| (c.w1, c.w2, c.y, c.z));
    Ok(out)
}

pub fn count_f5hat(g: &Hypergraph3, h: &Hypergraph3, pi: &Partition3) -> Result<u64> {
    Ok(f5hat_copies(g, h, pi)?.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{balanced_tripartite, complete_tripartite, f5};

    #[test]
    fn f5_counts() {
        assert_eq!(count_f5(&f5()), 1);
        let copies = f5_copies(&f5());
        assert_eq!(copies.len(), 1);
        assert!(copies[0].is_valid());
        assert_eq!(copies[0].shared_pair(), (0, 1));
        assert_eq!(count_f5(&Hypergraph3::complete(5)), 30);
        for sizes in [[1, 2, 2], [2, 3, 4], [3, 3, 3]] {
            assert_eq!(count_f5(&complete_tripartite(sizes).0), 0);
        }
    }

    #[test]
    fn freeness() {
        let star = Hypergraph3::complete(7).filter(|e| e.contains(0));
        assert!(is_f5_free(&star));
        let w = find_f5(&f5()).unwrap();
        assert_eq!(w.edges(), [Edge([0, 1, 2]), Edge([0, 1, 3]), Edge([2, 3, 4])]);
        let k4m = Hypergraph3::build(4, &[(0, 1, 2), (0, 1, 3), (1, 2, 3)]).unwrap();
        assert!(is_f5_free(&k4m));
    }

    #[test]
    fn k4minus_counts() {
        assert_eq!(count_k4minus(&Hypergraph3::complete(4)), 4);
        assert_eq!(count_k4minus(&balanced_tripartite(9).0), 0);
        let two = Hypergraph3::build(4, &[(0, 1, 2), (0, 1, 3)]).unwrap();
        assert_eq!(count_k4minus(&two), 0);
        assert_eq!(count_k4minus(&Hypergraph3::complete(5)), 20);
    }

    #[test]
    fn f5hat_definition_example() {
        // V1 = {0,1,2}, V2 = {3}, V3 = {4}; w1 = 0, w2 = 1, x = 2
        let pi = Partition3::new(vec![1, 1, 1, 2, 3]).unwrap();
        let g = Hypergraph3::build(5, &[(0, 3, 4), (1, 3, 4), (0, 1, 2)]).unwrap();
        let h = Hypergraph3::build(5, &[(0, 1, 2)]).unwrap();
        let copies = f5hat_copies(&g, &h, &pi).unwrap();
        assert_eq!(copies.len(), 1);
        let c = copies[0];
        assert!(c.is_valid(&g, &h, &pi));
        assert_eq!((c.w1, c.w2, c.y, c.z), (0, 1, 3, 4));
        assert_eq!(c.as_f5().edges().len(), 3);
        assert!(c.as_f5().is_valid());
    }

    #[test]
    fn f5hat_empty_cases() {
        let (s, pi) = balanced_tripartite(9);
        assert_eq!(count_f5hat(&s, &s, &pi).unwrap(), 0);
        let g = Hypergraph3::complete(6);
        let pi = Partition3::new(vec![1, 1, 2, 2, 3, 3]).unwrap();
        let h = g.filter(|e| pi.count_in(e, 1) < 2);
        assert_eq!(count_f5hat(&g, &h, &pi).unwrap(), 0);
        let outside = Hypergraph3::build(6, &[(0, 1, 2)]).unwrap();
        assert!(count_f5hat(&Hypergraph3::empty(6), &outside, &pi).is_err());
    }

    #[test]
    fn witness_must_avoid_y_and_z() {
        // the only H-edge through 0,1 is 013, which contains y = 3
        let pi = Partition3::new(vec![1, 1, 2, 2, 3]).unwrap();
        let g = Hypergraph3::build(5, &[(0, 3, 4), (1, 3, 4), (0, 1, 3)]).unwrap();
        let h = Hypergraph3::build(5, &[(0, 1, 3)]).unwrap();
        assert_eq!(count_f5hat(&g, &h, &pi).unwrap(), 0);
    }
}
