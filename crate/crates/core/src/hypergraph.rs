//! 3-uniform hypergraphs, 3-partitions and simple graphs, together with the
//! local queries used throughout the crate: links, codegrees, common links,
//! shadows and the split of a subhypergraph along a partition.
//!
//! Vertices are `0..n`. A statement about the vertex set `{1, …, n}` carries
//! over by shifting every label down by one.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A 3-set of vertices stored in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub [Vertex; 3]);

impl Edge {
    /// Sorts the three vertices. Does not check distinctness.
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        Edge(v)
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// The three (pair, opposite vertex) splits of the edge.
    pub fn pairs(&self) -> [((Vertex, Vertex), Vertex); 3] {
        let [a, b, c] = self.0;
        [((a, b), c), ((a, c), b), ((b, c), a)]
    }

    /// The two vertices other than `v`, if `v` is in the edge.
    pub fn others(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        let [a, b, c] = self.0;
        if v == a {
            Some((b, c))
        } else if v == b {
            Some((a, c))
        } else if v == c {
            Some((a, b))
        } else {
            None
        }
    }
}

pub(crate) fn ordered_pair(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn mask_of(n: usize, set: &[Vertex]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        if (v as usize) < n {
            mask[v as usize] = true;
        }
    }
    mask
}

/// A 3-uniform hypergraph on `0..n`, immutable after construction.
///
/// Edges are kept sorted; membership, per-vertex incidence and per-pair
/// codegree neighbourhoods are indexed at construction time.
#[derive(Clone, Debug)]
pub struct Hypergraph3 {
    n: usize,
    edges: Vec<Edge>,
    members: HashSet<Edge>,
    incident: Vec<Vec<usize>>,
    codeg: HashMap<(Vertex, Vertex), Vec<Vertex>>,
}

impl PartialEq for Hypergraph3 {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph3 {}

impl Hypergraph3 {
    /// Builds a hypergraph from raw triples, collapsing duplicates.
    pub fn build(n: usize, triples: &[(Vertex, Vertex, Vertex)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(triples.len());
        for &(a, b, c) in triples {
            for v in [a, b, c] {
                if v as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b || a == c || b == c {
                return Err(Error::RepeatedVertex(a, b, c));
            }
            edges.push(Edge::new(a, b, c));
        }
        Ok(Self::from_edges(n, edges))
    }

    /// Builds from already-valid edges (distinct vertices in range).
    pub(crate) fn from_edges(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let members: HashSet<Edge> = edges.iter().copied().collect();
        let mut incident = vec![Vec::new(); n];
        let mut codeg: HashMap<(Vertex, Vertex), Vec<Vertex>> = HashMap::new();
        for (idx, e) in edges.iter().enumerate() {
            for v in e.0 {
                incident[v as usize].push(idx);
            }
            for (pair, third) in e.pairs() {
                codeg.entry(pair).or_default().push(third);
            }
        }
        for list in codeg.values_mut() {
            list.sort_unstable();
        }
        Hypergraph3 {
            n,
            edges,
            members,
            incident,
            codeg,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges(n, Vec::new())
    }

    /// The complete 3-uniform hypergraph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for_each_triple(n, |e| edges.push(e));
        Self::from_edges(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        a != b && a != c && b != c && self.members.contains(&Edge::new(a, b, c))
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.members.contains(e)
    }

    /// Position of `e` in [`Self::edges`].
    pub fn edge_index(&self, e: &Edge) -> Option<usize> {
        self.edges.binary_search(e).ok()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident[v as usize].len()
    }

    pub fn incident_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.incident[v as usize].iter().map(move |&i| &self.edges[i])
    }

    /// Sorted third vertices `z` with `uvz` an edge.
    pub fn codegree_neighbors(&self, u: Vertex, v: Vertex) -> &[Vertex] {
        self.codeg
            .get(&ordered_pair(u, v))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Vertex pairs with positive codegree, with their neighbour lists.
    pub fn pair_neighborhoods(&self) -> impl Iterator<Item = (&(Vertex, Vertex), &Vec<Vertex>)> {
        self.codeg.iter()
    }

    pub fn max_codegree(&self) -> usize {
        self.codeg.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_subhypergraph_of(&self, host: &Hypergraph3) -> bool {
        self.n == host.n && self.edges.iter().all(|e| host.contains_edge(e))
    }

    pub(crate) fn check_sub(&self, host: &Hypergraph3) -> Result<()> {
        if self.n != host.n {
            return Err(Error::VertexCountMismatch(self.n, host.n));
        }
        match self.edges.iter().find(|e| !host.contains_edge(e)) {
            Some(e) => Err(Error::NotSubhypergraph(e.0)),
            None => Ok(()),
        }
    }

    /// Keeps the edges satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Edge) -> bool) -> Hypergraph3 {
        Self::from_edges(self.n, self.edges.iter().copied().filter(|e| keep(e)).collect())
    }

    pub fn with_edge(&self, e: Edge) -> Hypergraph3 {
        let mut edges = self.edges.clone();
        edges.push(e);
        Self::from_edges(self.n, edges)
    }

    /// Applies the vertex map `perm` (a permutation of `0..n`).
    pub fn relabel(&self, perm: &[Vertex]) -> Hypergraph3 {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let [a, b, c] = e.0;
                Edge::new(perm[a as usize], perm[b as usize], perm[c as usize])
            })
            .collect();
        Self::from_edges(self.n, edges)
    }

    /// Text form: a header line `n m`, then one `a b c` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            let [a, b, c] = e.0;
            let _ = writeln!(out, "{a} {b} {c}");
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let head = parse_numbers(header, hline + 1)?;
        if head.len() != 2 {
            return Err(Error::Parse {
                line: hline + 1,
                msg: "header must be `n m`".into(),
            });
        }
        let (n, m) = (head[0] as usize, head[1] as usize);
        let mut triples = Vec::with_capacity(m);
        for (idx, line) in lines {
            let nums = parse_numbers(line, idx + 1)?;
            if nums.len() != 3 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected three vertices".into(),
                });
            }
            let (a, b, c) = (nums[0] as Vertex, nums[1] as Vertex, nums[2] as Vertex);
            if !(a < b && b < c) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "vertices must be strictly ascending".into(),
                });
            }
            triples.push((a, b, c));
        }
        if triples.len() != m {
            return Err(Error::Parse {
                line: hline + 1,
                msg: format!("header announces {m} edges, found {}", triples.len()),
            });
        }
        let h = Self::build(n, &triples)?;
        if h.len() != m {
            return Err(Error::Parse {
                line: hline + 1,
                msg: "duplicate edges".into(),
            });
        }
        Ok(h)
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not a nonnegative integer: {t:?}"),
            })
        })
        .collect()
}

/// Visits every triple of `0..n` in lexicographic order.
pub fn for_each_triple(n: usize, mut f: impl FnMut(Edge)) {
    let n = n as Vertex;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                f(Edge([a, b, c]));
            }
        }
    }
}

/// An assignment of every vertex to part 1, 2 or 3. Parts may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition3 {
    parts: Vec<u8>,
}

impl Partition3 {
    pub fn new(parts: Vec<u8>) -> Result<Self> {
        if let Some(bad) = parts.iter().find(|&&p| !(1..=3).contains(&p)) {
            return Err(Error::Invalid(format!("part index {bad} not in 1..=3")));
        }
        Ok(Partition3 { parts })
    }

    /// Builds from explicit member lists; every vertex of `0..n` must appear once.
    pub fn from_parts(n: usize, members: [&[Vertex]; 3]) -> Result<Self> {
        let mut parts = vec![0u8; n];
        for (i, list) in members.iter().enumerate() {
            for &v in *list {
                if v as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if parts[v as usize] != 0 {
                    return Err(Error::Invalid(format!("vertex {v} assigned twice")));
                }
                parts[v as usize] = i as u8 + 1;
            }
        }
        if let Some(v) = parts.iter().position(|&p| p == 0) {
            return Err(Error::Invalid(format!("vertex {v} unassigned")));
        }
        Ok(Partition3 { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, v: Vertex) -> u8 {
        self.parts[v as usize]
    }

    pub fn assignment(&self) -> &[u8] {
        &self.parts
    }

    pub fn members(&self, part: u8) -> Vec<Vertex> {
        (0..self.parts.len() as Vertex)
            .filter(|&v| self.parts[v as usize] == part)
            .collect()
    }

    pub fn mask(&self, part: u8) -> Vec<bool> {
        self.parts.iter().map(|&p| p == part).collect()
    }

    pub fn sizes(&self) -> [usize; 3] {
        let mut s = [0; 3];
        for &p in &self.parts {
            s[p as usize - 1] += 1;
        }
        s
    }

    /// One vertex in each part.
    pub fn is_crossing(&self, e: &Edge) -> bool {
        let [a, b, c] = e.0;
        let (pa, pb, pc) = (self.part(a), self.part(b), self.part(c));
        pa != pb && pa != pc && pb != pc
    }

    /// Number of vertices of `e` in `part`.
    pub fn count_in(&self, e: &Edge, part: u8) -> usize {
        e.0.iter().filter(|&&v| self.part(v) == part).count()
    }

    /// Renames parts so that `perm[i-1]` becomes the new index of part `i`.
    pub fn permute_parts(&self, perm: [u8; 3]) -> Partition3 {
        Partition3 {
            parts: self.parts.iter().map(|&p| perm[p as usize - 1]).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let words: Vec<String> = self.parts.iter().map(u8::to_string).collect();
        words.join(" ") + "\n"
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let parts = text
            .split_whitespace()
            .map(|t| {
                t.parse::<u8>().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("bad part index {t:?}"),
                })
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(parts)
    }
}

/// A simple graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph2 {
    n: usize,
    adj: Vec<BTreeSet<Vertex>>,
    m: usize,
}

impl Graph2 {
    pub fn new(n: usize) -> Self {
        Graph2 {
            n,
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut g = Graph2::new(n);
        for (a, b) in pairs {
            g.insert(a, b);
        }
        g
    }

    /// Adds `ab`; loops are ignored. Returns whether the edge is new.
    pub fn insert(&mut self, a: Vertex, b: Vertex) -> bool {
        if a == b {
            return false;
        }
        let fresh = self.adj[a as usize].insert(b);
        if fresh {
            self.adj[b as usize].insert(a);
            self.m += 1;
        }
        fresh
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn contains(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a as usize].contains(&b)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[v as usize]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Edges as `(a, b)` with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, nb)| {
            let a = a as Vertex;
            nb.range(a + 1..).map(move |&b| (a, b))
        })
    }

    pub fn intersection(&self, other: &Graph2) -> Graph2 {
        Graph2::from_pairs(self.n, self.edges().filter(|&(a, b)| other.contains(a, b)))
    }

    pub fn is_subgraph_of(&self, other: &Graph2) -> bool {
        self.edges().all(|(a, b)| other.contains(a, b))
    }

    /// Keeps edges with both ends in `mask`.
    pub fn induced(&self, mask: &[bool]) -> Graph2 {
        Graph2::from_pairs(
            self.n,
            self.edges()
                .filter(|&(a, b)| mask[a as usize] && mask[b as usize]),
        )
    }
}

/// The complete 3-partite hypergraph with the given part sizes, together
/// with its defining partition (first part gets the lowest labels).
pub fn complete_tripartite(sizes: [usize; 3]) -> (Hypergraph3, Partition3) {
    let n: usize = sizes.iter().sum();
    let mut parts = Vec::with_capacity(n);
    for (i, &s) in sizes.iter().enumerate() {
        parts.extend(std::iter::repeat(i as u8 + 1).take(s));
    }
    let pi = Partition3 { parts };
    let [p1, p2, p3] = [pi.members(1), pi.members(2), pi.members(3)];
    let mut edges = Vec::with_capacity(sizes.iter().product());
    for &a in &p1 {
        for &b in &p2 {
            for &c in &p3 {
                edges.push(Edge::new(a, b, c));
            }
        }
    }
    (Hypergraph3::from_edges(n, edges), pi)
}

/// Part sizes of the balanced complete 3-partite hypergraph on `n` vertices.
pub fn balanced_sizes(n: usize) -> [usize; 3] {
    [n / 3, (n + 1) / 3, (n + 2) / 3]
}

/// The balanced complete 3-partite hypergraph on `n` vertices.
pub fn balanced_tripartite(n: usize) -> (Hypergraph3, Partition3) {
    complete_tripartite(balanced_sizes(n))
}

/// Edge count of the balanced complete 3-partite hypergraph.
pub fn s_of(n: usize) -> u64 {
    balanced_sizes(n).iter().map(|&s| s as u64).product()
}

/// The hypergraph `{012, 013, 234}`.
pub fn f5() -> Hypergraph3 {
    Hypergraph3::from_edges(5, vec![Edge([0, 1, 2]), Edge([0, 1, 3]), Edge([2, 3, 4])])
}

/// Graph of pairs covered by some edge.
pub fn shadow(h: &Hypergraph3) -> Graph2 {
    let mut g = Graph2::new(h.n());
    for e in h.edges() {
        for ((a, b), _) in e.pairs() {
            g.insert(a, b);
        }
    }
    g
}

/// Pairs `{y, z}` with `y ∈ s`, `z ∈ t` and `vyz ∈ h`.
pub fn link_graph(h: &Hypergraph3, v: Vertex, s: &[Vertex], t: &[Vertex]) -> Graph2 {
    let (sm, tm) = (mask_of(h.n(), s), mask_of(h.n(), t));
    link_graph_masked(h, v, &sm, &tm)
}

pub(crate) fn link_graph_masked(h: &Hypergraph3, v: Vertex, s: &[bool], t: &[bool]) -> Graph2 {
    let mut g = Graph2::new(h.n());
    for e in h.incident_edges(v) {
        let (a, b) = e.others(v).expect("incident edge contains v");
        let (ai, bi) = (a as usize, b as usize);
        if (s[ai] && t[bi]) || (s[bi] && t[ai]) {
            g.insert(a, b);
        }
    }
    g
}

/// Number of link pairs of `v` between `s` and `t`, without building the graph.
pub(crate) fn link_degree_masked(h: &Hypergraph3, v: Vertex, s: &[bool], t: &[bool]) -> usize {
    h.incident_edges(v)
        .filter(|e| {
            let (a, b) = e.others(v).expect("incident edge contains v");
            let (ai, bi) = (a as usize, b as usize);
            (s[ai] && t[bi]) || (s[bi] && t[ai])
        })
        .count()
}

/// Vertices `z ∈ s` with `uvz ∈ h`, and their number.
pub fn codegree(h: &Hypergraph3, u: Vertex, v: Vertex, s: &[Vertex]) -> Result<(Vec<Vertex>, usize)> {
    if u == v {
        return Err(Error::SameVertex(u));
    }
    let sm = mask_of(h.n(), s);
    let nb: Vec<Vertex> = h
        .codegree_neighbors(u, v)
        .iter()
        .copied()
        .filter(|&z| sm[z as usize])
        .collect();
    let count = nb.len();
    Ok((nb, count))
}

/// Common link of `u` and `v` between `s` and `t`.
pub fn common_link(h: &Hypergraph3, u: Vertex, v: Vertex, s: &[Vertex], t: &[Vertex]) -> Result<Graph2> {
    if u == v {
        return Err(Error::SameVertex(u));
    }
    let (sm, tm) = (mask_of(h.n(), s), mask_of(h.n(), t));
    Ok(link_graph_masked(h, u, &sm, &tm).intersection(&link_graph_masked(h, v, &sm, &tm)))
}

/// A subhypergraph `H ⊆ G` cut along a partition.
#[derive(Clone, Debug)]
pub struct PartitionSplit {
    /// Crossing edges of `H`.
    pub crossing: Hypergraph3,
    /// Crossing edges of `G` missing from `H`.
    pub missing: Hypergraph3,
    /// `inside[i]`: edges of `H` with at least two vertices in part `i + 1`.
    pub inside: [Hypergraph3; 3],
}

pub fn partition_split(g: &Hypergraph3, h: &Hypergraph3, pi: &Partition3) -> Result<PartitionSplit> {
    h.check_sub(g)?;
    if pi.n() != g.n() {
        return Err(Error::VertexCountMismatch(pi.n(), g.n()));
    }
    let crossing = h.filter(|e| pi.is_crossing(e));
    let missing = g.filter(|e| pi.is_crossing(e) && !h.contains_edge(e));
    let inside = [1u8, 2, 3].map(|i| h.filter(|e| pi.count_in(e, i) >= 2));
    Ok(PartitionSplit {
        crossing,
        missing,
        inside,
    })
}

/// Pairs inside part 1 whose common part-2/part-3 link in `g` has fewer
/// than `0.8 p² n² / 9` pairs. Sorted ascending.
pub fn q_set(g: &Hypergraph3, pi: &Partition3, p: f64) -> Vec<(Vertex, Vertex)> {
    let n = g.n() as f64;
    let threshold = 0.8 * p * p * n * n / 9.0;
    let (m2, m3) = (pi.mask(2), pi.mask(3));
    let v1 = pi.members(1);
    let links: Vec<HashSet<(Vertex, Vertex)>> = v1
        .iter()
        .map(|&x| link_graph_masked(g, x, &m2, &m3).edges().collect())
        .collect();
    let mut out = Vec::new();
    for i in 0..v1.len() {
        for j in i + 1..v1.len() {
            let (small, large) = if links[i].len() <= links[j].len() {
                (&links[i], &links[j])
            } else {
                (&links[j], &links[i])
            };
            let common = small.iter().filter(|pr| large.contains(pr)).count();
            if (common as f64) < threshold {
                out.push((v1[i], v1[j]));
            }
        }
    }
    out
}

/// Every part has size within `(1 ± 10⁻¹⁰) n / 3`, evaluated on integers.
pub fn is_balanced(pi: &Partition3) -> bool {
    const SCALE: u128 = 10_000_000_000;
    let n = pi.n() as u128;
    pi.sizes().iter().all(|&s| {
        let lhs = 3 * s as u128 * SCALE;
        lhs >= (SCALE - 1) * n && lhs <= (SCALE + 1) * n
    })
}
