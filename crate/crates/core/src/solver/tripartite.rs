//! Tripartite structure: rainbow 3-colouring search, the largest crossing
//! edge set over all 3-partitions, and a seeded local search for the same.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph3, Partition3, Vertex};

/// A partition making every edge rainbow, when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripartiteCertificate {
    pub partition: Option<Partition3>,
}

impl TripartiteCertificate {
    pub fn is_tripartite(&self) -> bool {
        self.partition.is_some()
    }
}

/// Backtracking search for a 3-partition with one vertex of every edge in
/// each part. An edge with two vertices already in one part fails at once;
/// an edge with two vertices in distinct parts forces its third vertex.
pub fn is_tripartite(h: &Hypergraph3) -> TripartiteCertificate {
    let n = h.n();
    let mut colour = vec![0u8; n];
    let mut order: Vec<Vertex> = (0..n as Vertex).filter(|&v| h.degree(v) > 0).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(h.degree(v)));
    let found = rainbow_search(h, &order, 0, &mut colour);
    let partition = found.then(|| {
        let parts = colour.iter().map(|&c| if c == 0 { 1 } else { c }).collect();
        Partition3::new(parts).expect("colours are 1..=3")
    });
    TripartiteCertificate { partition }
}

fn rainbow_search(h: &Hypergraph3, order: &[Vertex], pos: usize, colour: &mut [u8]) -> bool {
    let Some(idx) = order[pos..].iter().position(|&v| colour[v as usize] == 0) else {
        return true;
    };
    let pos = pos + idx;
    let v = order[pos];
    // colours are interchangeable until the first vertex is placed
    let max_colour = if colour.iter().all(|&c| c == 0) { 1 } else { 3 };
    for c in 1..=max_colour {
        let mut trail = Vec::new();
        if assign(h, v, c, colour, &mut trail) && rainbow_search(h, order, pos + 1, colour) {
            return true;
        }
        for u in trail {
            colour[u as usize] = 0;
        }
    }
    false
}

/// Colours `v` and propagates forced colours; records every vertex coloured.
fn assign(h: &Hypergraph3, v: Vertex, c: u8, colour: &mut [u8], trail: &mut Vec<Vertex>) -> bool {
    let mut queue = vec![(v, c)];
    while let Some((u, cu)) = queue.pop() {
        match colour[u as usize] {
            0 => {
                colour[u as usize] = cu;
                trail.push(u);
            }
            existing if existing == cu => continue,
            _ => return false,
        }
        for e in h.incident_edges(u) {
            let (a, b) = e.others(u).expect("incident");
            let (ca, cb) = (colour[a as usize], colour[b as usize]);
            if ca == cu || cb == cu || (ca != 0 && ca == cb) {
                return false;
            }
            match (ca, cb) {
                (0, 0) => {}
                (0, x) => queue.push((a, 6 - cu - x)),
                (x, 0) => queue.push((b, 6 - cu - x)),
                _ => {}
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    Exact,
    /// Single-vertex-move hill climbing from `restarts` random starts.
    LocalSearch { restarts: usize, seed: u64 },
}

/// Maximum number of crossing edges over all 3-partitions, with a
/// partition attaining it.
///
/// Exact mode walks assignments depth-first in vertex order, trying parts
/// 1, 2, 3 in turn. The lowest non-isolated vertex is fixed to part 1 and a
/// vertex may open part 3 only once part 2 is in use, which removes the
/// relabelings of a partition. Isolated vertices stay in part 1. Only
/// strict improvements replace the incumbent, so the returned partition is
/// the first maximiser in this order.
pub fn t_of_g(g: &Hypergraph3, mode: PartitionMode, node_budget: u64) -> Result<(usize, Partition3)> {
    match mode {
        PartitionMode::Exact => exact_max_crossing(g, node_budget),
        PartitionMode::LocalSearch { restarts, seed } => Ok(local_search(g, restarts, seed)),
    }
}

/// A partition maximizing the number of crossing edges of `h`.
pub fn best_partition_for(h: &Hypergraph3, mode: PartitionMode, node_budget: u64) -> Result<Partition3> {
    t_of_g(h, mode, node_budget).map(|(_, pi)| pi)
}

struct CrossingSearch {
    order: Vec<Vertex>,
    /// `closing[k]`: edges whose last vertex in `order` is `order[k]`,
    /// as the other two vertices.
    closing: Vec<Vec<(Vertex, Vertex)>>,
    /// Edges closing strictly after position `k`.
    remaining_after: Vec<usize>,
    colour: Vec<u8>,
    best: usize,
    best_colour: Vec<u8>,
    nodes: u64,
    budget: u64,
}

fn exact_max_crossing(g: &Hypergraph3, budget: u64) -> Result<(usize, Partition3)> {
    let n = g.n();
    let order: Vec<Vertex> = (0..n as Vertex).filter(|&v| g.degree(v) > 0).collect();
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v as usize] = k;
    }
    let mut closing = vec![Vec::new(); order.len()];
    for e in g.edges() {
        let [a, b, c] = e.0;
        let last = [a, b, c].into_iter().max_by_key(|&v| pos[v as usize]).expect("three");
        let (x, y) = e.others(last).expect("in edge");
        closing[pos[last as usize]].push((x, y));
    }
    let mut remaining_after = vec![0; order.len()];
    let mut acc = 0;
    for k in (0..order.len()).rev() {
        remaining_after[k] = acc;
        acc += closing[k].len();
    }
    let mut search = CrossingSearch {
        order,
        closing,
        remaining_after,
        colour: vec![1; n],
        best: 0,
        best_colour: vec![1; n],
        nodes: 0,
        budget,
    };
    if !search.order.is_empty() {
        search.descend(0, 0, 1)?;
    }
    let pi = Partition3::new(search.best_colour).expect("colours are 1..=3");
    Ok((search.best, pi))
}

impl CrossingSearch {
    fn descend(&mut self, k: usize, value: usize, used: u8) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let v = self.order[k] as usize;
        let top = if k == 0 { 1 } else { (used + 1).min(3) };
        for c in 1..=top {
            self.colour[v] = c;
            let gained = self.closing[k]
                .iter()
                .filter(|&&(x, y)| {
                    let (cx, cy) = (self.colour[x as usize], self.colour[y as usize]);
                    cx != cy && cx != c && cy != c
                })
                .count();
            let value = value + gained;
            if value + self.remaining_after[k] <= self.best {
                continue;
            }
            if k + 1 == self.order.len() {
                self.best = value;
                self.best_colour.clone_from(&self.colour);
            } else {
                self.descend(k + 1, value, used.max(c))?;
            }
        }
        self.colour[v] = 1;
        Ok(())
    }
}

fn crossing_count(g: &Hypergraph3, colour: &[u8]) -> usize {
    g.edges()
        .iter()
        .filter(|e| {
            let [a, b, c] = e.0.map(|v| colour[v as usize]);
            a != b && a != c && b != c
        })
        .count()
}

fn local_search(g: &Hypergraph3, restarts: usize, seed: u64) -> (usize, Partition3) {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (0usize, vec![1u8; n]);
    let mut verts: Vec<Vertex> = (0..n as Vertex).collect();
    for _ in 0..restarts.max(1) {
        let mut colour: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let mut value = crossing_count(g, &colour);
        loop {
            let mut improved = false;
            verts.shuffle(&mut rng);
            for &v in &verts {
                let here = crossing_at(g, v, &colour, colour[v as usize]);
                let (mut best_c, mut best_gain) = (colour[v as usize], 0isize);
                for c in 1..=3u8 {
                    if c == colour[v as usize] {
                        continue;
                    }
                    let gain = crossing_at(g, v, &colour, c) as isize - here as isize;
                    if gain > best_gain {
                        best_gain = gain;
                        best_c = c;
                    }
                }
                if best_gain > 0 {
                    colour[v as usize] = best_c;
                    value = (value as isize + best_gain) as usize;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if value > best.0 {
            best = (value, colour);
        }
    }
    (best.0, Partition3::new(best.1).expect("colours are 1..=3"))
}

/// Crossing edges through `v` if `v` had colour `c`.
fn crossing_at(g: &Hypergraph3, v: Vertex, colour: &[u8], c: u8) -> usize {
    g.incident_edges(v)
        .filter(|e| {
            let (a, b) = e.others(v).expect("incident");
            let (ca, cb) = (colour[a as usize], colour[b as usize]);
            ca != cb && ca != c && cb != c
        })
        .count()
}
