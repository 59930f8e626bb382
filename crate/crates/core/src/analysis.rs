//! Derived quantities of a concrete `(G, H, π)` instance and an audit of the
//! inequalities relating them.
//!
//! Real thresholds are evaluated in `f64` and compared against exact counts
//! with the inequality direction written out at each site. The audit only
//! observes: a failing line is reported, never raised.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{
    is_balanced, link_degree_masked, mask_of, ordered_pair, partition_split, q_set, shadow, Edge, Graph2,
    Hypergraph3, Partition3, Vertex,
};
use crate::motif::{f5hat_copies, find_f5, F5Copy};
use crate::solver::{t_of_g, PartitionMode};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub delta: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub big_c: f64,
}

impl Default for Constants {
    /// `δ = 10⁻¹⁰⁰, ε₁ = 1/3000, ε₂ = 1/400, ε₃ = 10⁻¹⁰, C = 10⁴`.
    fn default() -> Self {
        Constants {
            delta: 1e-100,
            eps1: 1.0 / 3000.0,
            eps2: 1.0 / 400.0,
            eps3: 1e-10,
            big_c: 1e4,
        }
    }
}

/// Which degree threshold defines the high-degree class `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Threshold `ε₁ n / √(ln n)`, used while `|H̄_π| ≤ δ p n³ / ln n`.
    Divided,
    /// Threshold `ε₁ n`.
    Undivided,
}

fn ln_n(n: usize) -> f64 {
    (n as f64).ln()
}

/// Shadow of `H₁` induced on part 1.
pub fn shadow_j(h: &Hypergraph3, pi: &Partition3) -> Graph2 {
    let h1 = h.filter(|e| pi.count_in(e, 1) >= 2);
    shadow(&h1).induced(&pi.mask(1))
}

/// `Q(π)` and the host edges `B(π)` containing one of its pairs.
#[derive(Clone, Debug)]
pub struct BPi {
    pub q: Vec<(Vertex, Vertex)>,
    pub b: Hypergraph3,
}

impl BPi {
    /// `H′ = H \ B(π)`.
    pub fn h_prime(&self, h: &Hypergraph3) -> Hypergraph3 {
        h.filter(|e| !self.b.contains_edge(e))
    }

    /// `H ∩ B(π)`.
    pub fn in_h(&self, h: &Hypergraph3) -> Hypergraph3 {
        h.filter(|e| self.b.contains_edge(e))
    }
}

pub fn b_pi(g: &Hypergraph3, pi: &Partition3, p: f64) -> BPi {
    let q = q_set(g, pi, p);
    let pairs: HashSet<(Vertex, Vertex)> = q.iter().copied().collect();
    let b = g.filter(|e| e.pairs().iter().any(|(pr, _)| pairs.contains(pr)));
    debug_assert!(b.edges().iter().all(|e| pi.count_in(e, 1) >= 2));
    BPi { q, b }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SClasses {
    pub regime: Regime,
    pub s: Vec<Vertex>,
    /// Members with `d^H_{2,3}(x) ≥ ε₂ p n²`.
    pub s1: Vec<Vertex>,
    pub s2: Vec<Vertex>,
}

/// Splits the part-1 vertices of high `J`-degree by their crossing degree
/// in `H`.
pub fn classify_s(
    g: &Hypergraph3,
    h: &Hypergraph3,
    pi: &Partition3,
    consts: &Constants,
    p: f64,
    regime: Regime,
) -> Result<SClasses> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain(format!("classification needs n >= 2, got {n}")));
    }
    h.check_sub(g)?;
    let j = shadow_j(h, pi);
    Ok(classify_with(&j, h, pi, consts, p, regime))
}

fn classify_with(j: &Graph2, h: &Hypergraph3, pi: &Partition3, consts: &Constants, p: f64, regime: Regime) -> SClasses {
    let n = h.n() as f64;
    let threshold = match regime {
        Regime::Divided => consts.eps1 * n / ln_n(h.n()).sqrt(),
        Regime::Undivided => consts.eps1 * n,
    };
    let crossing_min = consts.eps2 * p * n * n;
    let (m2, m3) = (pi.mask(2), pi.mask(3));
    let s: Vec<Vertex> = pi
        .members(1)
        .into_iter()
        .filter(|&x| j.degree(x) as f64 >= threshold)
        .collect();
    let (s1, s2) = s
        .iter()
        .partition(|&&x| link_degree_masked(h, x, &m2, &m3) as f64 >= crossing_min);
    SClasses { regime, s, s1, s2 }
}

/// Missing crossing edges `xyz` (with `x` in part 1), split into good and bad
/// against the subgraph `jp` of `J`.
pub fn good_bad_split(
    g: &Hypergraph3,
    hbar: &Hypergraph3,
    jp: &Graph2,
    pi: &Partition3,
    consts: &Constants,
    p: f64,
) -> (Vec<Edge>, Vec<Edge>) {
    let n = g.n() as f64;
    let (ln, lnln) = (n.ln(), n.ln().ln());
    let band = consts.eps1 * n / ln.sqrt();
    let low_need = p * n * lnln / (500.0 * ln.sqrt());
    let high_need = 3.0 * consts.eps1 * p * n;
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for e in hbar.edges() {
        let Some(&x) = e.0.iter().find(|&&v| pi.part(v) == 1) else {
            continue;
        };
        let (y, z) = e.others(x).expect("x lies in e");
        let d = jp.degree(x) as f64;
        let nx = jp.neighbors(x);
        let common = g.codegree_neighbors(y, z).iter().filter(|w| nx.contains(w)).count() as f64;
        let is_bad = (d <= band && common >= low_need) || (band < d && d <= consts.eps1 * n && common >= high_need);
        if is_bad {
            bad.push(*e);
        } else {
            good.push(*e);
        }
    }
    (good, bad)
}

/// `K(v, E, A, T)`, its trace on the host, and for each host member `xyz`
/// the F5 `{yzv, yzx, e}` it closes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KReport {
    pub k: Vec<Edge>,
    pub in_host: Vec<Edge>,
    pub witnesses: Vec<F5Copy>,
}

/// Members of `e_set` not through `v` and `A` are ignored; the other
/// arguments must satisfy their preconditions.
pub fn k_of(g: &Hypergraph3, v: Vertex, e_set: &[Edge], a: &[Vertex], t: &[(Vertex, Vertex)]) -> Result<KReport> {
    let n = g.n();
    for &x in a.iter().chain([&v]) {
        if x as usize >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if a.contains(&v) {
        return Err(Error::Invalid(format!("A must not contain v = {v}")));
    }
    let am = mask_of(n, a);
    for &(y, z) in t {
        if y == z || y as usize >= n || z as usize >= n {
            return Err(Error::Invalid(format!("bad pair ({y}, {z}) in T")));
        }
        if am[y as usize] || am[z as usize] || !g.contains(v, y, z) {
            return Err(Error::Invalid(format!("pair ({y}, {z}) is not a link pair of {v} outside A")));
        }
    }
    if let Some(e) = e_set.iter().find(|e| !g.contains_edge(e)) {
        return Err(Error::NotSubhypergraph(e.0));
    }
    let usable: Vec<&Edge> = e_set
        .iter()
        .filter(|e| e.contains(v) && e.0.iter().any(|&w| w != v && am[w as usize]))
        .collect();
    let mut a_sorted = a.to_vec();
    a_sorted.sort_unstable();
    a_sorted.dedup();
    let mut t_sorted: Vec<(Vertex, Vertex)> = t.iter().map(|&(y, z)| ordered_pair(y, z)).collect();
    t_sorted.sort_unstable();
    t_sorted.dedup();
    let mut report = KReport {
        k: Vec::new(),
        in_host: Vec::new(),
        witnesses: Vec::new(),
    };
    for &x in &a_sorted {
        for &(y, z) in &t_sorted {
            let witness = usable
                .iter()
                .find(|e| e.contains(x) && !e.contains(y) && !e.contains(z));
            let Some(e) = witness else { continue };
            let xyz = Edge::new(x, y, z);
            report.k.push(xyz);
            if g.contains_edge(&xyz) {
                report.in_host.push(xyz);
                report.witnesses.push(F5Copy {
                    pair_edges: [Edge::new(y, z, v), Edge::new(y, z, x)],
                    base: **e,
                });
            }
        }
    }
    Ok(report)
}

/// Largest `n` for which [`e_sri_holds`] enumerates every `s`-subset.
pub const ESRI_EXHAUSTIVE_MAX_N: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsriOutcome {
    pub holds: bool,
    /// Every `s`-subset was checked; otherwise only the supplied candidates.
    pub exhaustive: bool,
    pub subsets_checked: u64,
    /// Largest pair count met, with its vertex and subset.
    pub worst: Option<(usize, Vertex, Vec<Vertex>)>,
}

/// Whether for every vertex `v` and `s`-set `S ∌ v` at most `r` pairs
/// `yz` outside `S` have `vyz ∈ G` and `d_S(y, z) ≥ i`.
///
/// Exhaustive up to [`ESRI_EXHAUSTIVE_MAX_N`] vertices; above that only the
/// sets in `candidates` are checked, and `candidates` is required.
pub fn e_sri_holds(
    g: &Hypergraph3,
    s: usize,
    r: usize,
    i: usize,
    candidates: Option<&[Vec<Vertex>]>,
) -> Result<EsriOutcome> {
    let n = g.n();
    if s > n || i > n || r > n * n.saturating_sub(1) / 2 {
        return Err(Error::Domain(format!("need s, i <= n and r <= C(n,2): s={s}, r={r}, i={i}")));
    }
    let exhaustive = n <= ESRI_EXHAUSTIVE_MAX_N;
    let sets: Vec<Vec<Vertex>> = if exhaustive {
        subsets(n, s)
    } else {
        let c = candidates.ok_or_else(|| {
            Error::Invalid(format!("n = {n} exceeds the exhaustive cutoff; supply candidate sets"))
        })?;
        for set in c {
            if set.len() != s || set.iter().any(|&x| x as usize >= n) {
                return Err(Error::Invalid(format!("candidate {set:?} is not an {s}-subset of [0, {n})")));
            }
        }
        c.to_vec()
    };
    let mut outcome = EsriOutcome {
        holds: true,
        exhaustive,
        subsets_checked: 0,
        worst: None,
    };
    for set in &sets {
        outcome.subsets_checked += 1;
        let sm = mask_of(n, set);
        for v in 0..n as Vertex {
            if sm[v as usize] {
                continue;
            }
            let count = g
                .incident_edges(v)
                .filter(|e| {
                    let (y, z) = e.others(v).expect("incident");
                    !sm[y as usize]
                        && !sm[z as usize]
                        && g.codegree_neighbors(y, z).iter().filter(|&&w| sm[w as usize]).count() >= i
                })
                .count();
            if outcome.worst.as_ref().map_or(true, |w| count > w.0) {
                outcome.worst = Some((count, v, set.clone()));
            }
            if count > r {
                outcome.holds = false;
            }
        }
    }
    Ok(outcome)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v as Vertex);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingCensus {
    pub min: usize,
    pub max: usize,
    /// `p |V₂| |V₃|`.
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCensus {
    /// Pairs outside `S` with `d_S(y, z) ≥ 3pn`.
    pub heavy_pairs: usize,
    /// `n² e^{−√(ln n)}`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Degree, crossing-degree and codegree statistics set beside the
/// asymptotic formulas they concentrate around. Purely observational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub p: f64,
    pub edges: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    /// `p C(n−1, 2)`, the exact mean degree.
    pub expected_degree: f64,
    /// `p n² / 2`.
    pub degree_formula: f64,
    /// `max_v |d(v) − p C(n−1,2)| / (p C(n−1,2))`.
    pub max_relative_deviation: f64,
    pub max_codegree: usize,
    /// `p n √(ln n) / ln ln n`.
    pub codegree_bound: f64,
    pub codegree_within_bound: bool,
    /// Crossing degrees `d_{2,3}(x)` over part-1 vertices.
    pub crossing: Option<CrossingCensus>,
    pub pairs: Option<PairCensus>,
}

impl CensusReport {
    /// Every degree lies within `(1 ± eps) p C(n−1, 2)`.
    pub fn degrees_within(&self, eps: f64) -> bool {
        let mu = self.expected_degree;
        (self.min_degree as f64) >= (1.0 - eps) * mu && (self.max_degree as f64) <= (1.0 + eps) * mu
    }
}

pub fn concentration_census(g: &Hypergraph3, pi: Option<&Partition3>, p: f64, s: Option<&[Vertex]>) -> CensusReport {
    let n = g.n();
    let nf = n as f64;
    let degrees: Vec<usize> = (0..n as Vertex).map(|v| g.degree(v)).collect();
    let expected = p * ((n.saturating_sub(1) * n.saturating_sub(2)) / 2) as f64;
    let max_dev = degrees
        .iter()
        .map(|&d| if expected > 0.0 { (d as f64 - expected).abs() / expected } else { 0.0 })
        .fold(0.0, f64::max);
    let max_codegree = g.max_codegree();
    let codegree_bound = p * nf * nf.ln().sqrt() / nf.ln().ln();
    let crossing = pi.map(|pi| {
        let (m2, m3) = (pi.mask(2), pi.mask(3));
        let ds: Vec<usize> = pi.members(1).iter().map(|&x| link_degree_masked(g, x, &m2, &m3)).collect();
        let sizes = pi.sizes();
        CrossingCensus {
            min: ds.iter().copied().min().unwrap_or(0),
            max: ds.iter().copied().max().unwrap_or(0),
            expected: p * (sizes[1] * sizes[2]) as f64,
        }
    });
    let pairs = s.map(|s| {
        let sm = mask_of(n, s);
        let need = 3.0 * p * nf;
        let mut heavy = 0;
        for y in 0..n as Vertex {
            for z in y + 1..n as Vertex {
                if sm[y as usize] || sm[z as usize] {
                    continue;
                }
                let d = g.codegree_neighbors(y, z).iter().filter(|&&w| sm[w as usize]).count();
                if d as f64 >= need {
                    heavy += 1;
                }
            }
        }
        let bound = nf * nf * (-nf.ln().sqrt()).exp();
        PairCensus {
            heavy_pairs: heavy,
            bound,
            within_bound: heavy as f64 <= bound,
        }
    });
    CensusReport {
        n,
        p,
        edges: g.len(),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        expected_degree: expected,
        degree_formula: p * nf * nf / 2.0,
        max_relative_deviation: max_dev,
        max_codegree,
        codegree_bound,
        codegree_within_bound: max_codegree as f64 <= codegree_bound,
        crossing,
        pairs,
    }
}

/// One audited inequality `lhs ≥ rhs` (or `≤`, per line) on an instance.
/// Statements quantified over an empty set report `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditLine {
    pub lemma_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub preconditions_met: bool,
}

fn line(id: &str, lhs: f64, rhs: f64, holds: bool, pre: bool) -> AuditLine {
    AuditLine {
        lemma_id: id.into(),
        lhs,
        rhs,
        holds,
        preconditions_met: pre,
    }
}

fn ge(id: &str, lhs: f64, rhs: f64, pre: bool) -> AuditLine {
    line(id, lhs, rhs, lhs >= rhs, pre)
}

fn le(id: &str, lhs: f64, rhs: f64, pre: bool) -> AuditLine {
    line(id, lhs, rhs, lhs <= rhs, pre)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sizes {
    pub h: usize,
    pub h_pi: usize,
    pub hbar_pi: usize,
    pub h_parts: [usize; 3],
    pub g_pi: usize,
    pub q: usize,
    pub j: usize,
    pub b: usize,
    pub h_in_b: usize,
    pub h_prime: usize,
    pub f5hat: usize,
}

/// `H₁(1), H₁(2), H₁(3)` for one regime's classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Split {
    pub regime: Regime,
    pub parts: [usize; 3],
    /// `|J[S] ∪ J[V₁ \ S]|`.
    pub j_prime: usize,
    pub j_prime_max_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub p: f64,
    pub sizes: Sizes,
    /// The regime selected by `|H̄_π|` against `δ p n³ / ln n`.
    pub regime: Regime,
    pub classes: SClasses,
    pub classes_primed: SClasses,
    pub split: H1Split,
    pub split_primed: H1Split,
    pub t_g: usize,
    pub balanced: bool,
    /// `π` attains the maximum of `|H_π|`.
    pub pi_maximizes: bool,
    pub h1_largest: bool,
    pub h_tripartite: bool,
    pub lines: Vec<AuditLine>,
}

impl AnalysisReport {
    pub fn line(&self, id: &str) -> Option<&AuditLine> {
        self.lines.iter().find(|l| l.lemma_id == id)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AuditOptions {
    /// Node budget for the exact `t(G)` and `max_π |H_π|` searches.
    pub node_budget: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { node_budget: 50_000_000 }
    }
}

fn split_h1(h1: &Hypergraph3, j: &Graph2, pi: &Partition3, classes: &SClasses) -> H1Split {
    let n = h1.n();
    let in_s = mask_of(n, &classes.s);
    let in_s1 = mask_of(n, &classes.s1);
    let v1 = pi.mask(1);
    let mut parts = [0usize; 3];
    for e in h1.edges() {
        let in_s_count = e.0.iter().filter(|&&v| in_s[v as usize]).count();
        let rest_count = e.0.iter().filter(|&&v| v1[v as usize] && !in_s[v as usize]).count();
        if in_s_count >= 2 || rest_count >= 2 {
            parts[0] += 1;
        } else if e.0.iter().filter(|&&v| in_s1[v as usize]).count() == 1 {
            parts[1] += 1;
        } else {
            parts[2] += 1;
        }
    }
    let jp = j_prime(j, &in_s, &v1);
    H1Split {
        regime: classes.regime,
        parts,
        j_prime: jp.len(),
        j_prime_max_degree: jp.max_degree(),
    }
}

/// `J[S] ∪ J[V₁ \ S]`.
fn j_prime(j: &Graph2, in_s: &[bool], v1: &[bool]) -> Graph2 {
    Graph2::from_pairs(
        j.n(),
        j.edges().filter(|&(a, b)| {
            let (sa, sb) = (in_s[a as usize], in_s[b as usize]);
            (sa && sb) || (!sa && !sb && v1[a as usize] && v1[b as usize])
        }),
    )
}

/// Evaluates every audited inequality on `(G, H, π)`.
pub fn audit_propositions(
    g: &Hypergraph3,
    h: &Hypergraph3,
    pi: &Partition3,
    consts: &Constants,
    p: f64,
    opts: &AuditOptions,
) -> Result<AnalysisReport> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Domain(format!("audit needs n >= 2, got {n}")));
    }
    if let Some(c) = find_f5(h) {
        return Err(Error::ContainsF5(c.edges().map(|e| e.0)));
    }
    let split = partition_split(g, h, pi)?;
    let nf = n as f64;
    let (ln, lnln) = (nf.ln(), nf.ln().ln());
    let sl = ln.sqrt();
    let [h1, h2, h3] = &split.inside;
    let g_pi = g.filter(|e| pi.is_crossing(e));
    let bpi = b_pi(g, pi, p);
    let h_prime = bpi.h_prime(h);
    let h_in_b = bpi.in_h(h);
    let j = shadow_j(h, pi);
    let hats = f5hat_copies(g, h, pi)?;
    let q_pairs: HashSet<(Vertex, Vertex)> = bpi.q.iter().copied().collect();

    let (t_g, _) = t_of_g(g, PartitionMode::Exact, opts.node_budget)?;
    let (t_h, _) = t_of_g(h, PartitionMode::Exact, opts.node_budget)?;
    let balanced = is_balanced(pi);
    let pi_maximizes = split.crossing.len() == t_h;
    let h1_largest = h1.len() >= h2.len() && h1.len() >= h3.len();
    let h_tripartite = t_h == h.len();

    let hbar = split.missing.len() as f64;
    let h1n = h1.len() as f64;
    let inside_total = (h1.len() + h2.len() + h3.len()) as f64;
    let cond1 = inside_total <= consts.delta * p * nf.powi(3);
    let shadow_h1 = shadow(h1);
    let cond2 = shadow_h1.edges().all(|pr| !q_pairs.contains(&pr));
    let prop_pre = balanced && pi_maximizes && cond1 && cond2;
    let regime_cut = consts.delta * p * nf.powi(3) / ln;
    let regime = if hbar <= regime_cut { Regime::Divided } else { Regime::Undivided };
    let divided = regime == Regime::Divided;

    let classes = classify_with(&j, h, pi, consts, p, Regime::Divided);
    let classes_primed = classify_with(&j, h, pi, consts, p, Regime::Undivided);
    let hs = split_h1(h1, &j, pi, &classes);
    let hs_primed = split_h1(h1, &j, pi, &classes_primed);

    let mut lines = Vec::new();

    // |H̄_π| ≥ 3|H₁|, with equality only for tripartite H
    lines.push(ge("missing_ge_3_h1", hbar, 3.0 * h1n, prop_pre));
    lines.push(line(
        "missing_eq_3_h1_only_if_tripartite",
        hbar,
        3.0 * h1n,
        hbar != 3.0 * h1n || h_tripartite,
        prop_pre,
    ));

    // t(G) ≥ |G_π| + |Q(π)| δ n² p²
    let q_term = bpi.q.len() as f64 * consts.delta * nf * nf * p * p;
    lines.push(ge("t_ge_crossing_plus_q", t_g as f64, g_pi.len() as f64 + q_term, balanced));

    // pairs (y, z) ∈ V₂ × V₃ spanning an F̂5 with each J-edge outside Q(π)
    let need = p * p * nf * nf / 12.0;
    let j_out_q: Vec<(Vertex, Vertex)> = j.edges().filter(|pr| !q_pairs.contains(pr)).collect();
    let min_pairs = j_out_q
        .iter()
        .map(|&(a, b)| hats.iter().filter(|c| (c.w1, c.w2) == (a, b)).count())
        .min();
    lines.push(match min_pairs {
        Some(m) => ge("hat_pairs_per_j_edge", m as f64, need, prop_pre),
        None => line("hat_pairs_per_j_edge", need, need, true, prop_pre),
    });
    let missing_set = &split.missing;
    let hit = hats
        .iter()
        .filter(|c| {
            missing_set.contains(c.w1, c.y, c.z) || missing_set.contains(c.w2, c.y, c.z)
        })
        .count();
    lines.push(ge("hat_copy_hits_missing", hit as f64, hats.len() as f64, true));

    // J′ = J[S] ∪ J[V₁ \ S] under the divided threshold
    let jp = hs.j_prime as f64;
    let dmax = hs.j_prime_max_degree as f64;
    lines.push(ge(
        "missing_ge_30pn_jprime",
        hbar,
        30.0 * p * nf * jp,
        prop_pre && dmax <= consts.eps1 * nf,
    ));
    lines.push(ge(
        "missing_ge_20pn_jprime_sqrtlog",
        hbar,
        20.0 * p * nf * jp * sl / lnln,
        prop_pre && dmax <= consts.eps1 * nf / sl,
    ));

    // divided regime
    let pre_div = prop_pre && divided;
    let pre_und = prop_pre && !divided;
    lines.push(le("regime_divided", hbar, regime_cut, true));
    lines.push(le("s_size", classes.s.len() as f64, consts.eps3 * nf / sl, pre_div));
    lines.push(ge("missing_ge_s1", hbar, 20.0 * p * nf * nf * classes.s1.len() as f64, pre_div));
    lines.push(ge("missing_ge_s2", hbar, p * nf * nf * classes.s2.len() as f64 / 20.0, pre_div));
    lines.push(le(
        "h1_part1_le_jprime",
        hs.parts[0] as f64,
        jp * p * nf * sl / lnln,
        pre_div,
    ));
    lines.push(le(
        "h1_part2_le_s1",
        hs.parts[1] as f64,
        2.0 * p * nf * nf * classes.s1.len() as f64,
        pre_div,
    ));
    lines.push(le(
        "h1_part3_le_s2",
        hs.parts[2] as f64,
        2.0 * consts.eps2 * p * nf * nf * classes.s2.len() as f64,
        pre_div,
    ));

    // undivided regime
    let jpp = hs_primed.j_prime as f64;
    lines.push(le("s_prime_size", classes_primed.s.len() as f64, consts.eps3 * nf, pre_und));
    lines.push(ge(
        "missing_ge_s1_prime",
        hbar,
        20.0 * p * nf * nf * classes_primed.s1.len() as f64,
        pre_und,
    ));
    lines.push(ge(
        "missing_ge_s2_prime",
        hbar,
        p * nf * nf * classes_primed.s2.len() as f64 / 20.0,
        pre_und,
    ));
    lines.push(le(
        "h1_prime_part1_le_jprime",
        hs_primed.parts[0] as f64,
        jpp * 3.0 * p * nf + nf * nf * (-sl).exp() * p * nf * sl / lnln,
        pre_und,
    ));
    lines.push(le(
        "h1_prime_part2_le_s1",
        hs_primed.parts[1] as f64,
        2.0 * p * nf * nf * classes_primed.s1.len() as f64,
        pre_und,
    ));
    lines.push(le(
        "h1_prime_part3_le_s2",
        hs_primed.parts[2] as f64,
        2.0 * consts.eps2 * p * nf * nf * classes_primed.s2.len() as f64,
        pre_und,
    ));

    // |H| ≤ |H_π| + 3|H₁| ≤ … ≤ t(G)
    let chain_pre = prop_pre && h1_largest;
    let h_pi = split.crossing.len() as f64;
    let hp_split = partition_split(g, &h_prime, pi)?;
    let start = h_pi + 3.0 * h1n;
    let regrouped =
        hp_split.crossing.len() as f64 + 3.0 * hp_split.inside[0].len() as f64 + 3.0 * h_in_b.len() as f64;
    let step1 = g_pi.len() as f64 + 3.0 * bpi.b.len() as f64;
    let step2 = g_pi.len() as f64 + 3.0 * bpi.q.len() as f64 * p * nf * sl / lnln;
    let step3 = g_pi.len() as f64 + q_term;
    lines.push(le("chain_h_le_crossing_plus_3h1", h.len() as f64, start, chain_pre));
    lines.push(line("chain_regroup_by_b", start, regrouped, start == regrouped, true));
    lines.push(le("chain_step1", regrouped, step1, chain_pre));
    lines.push(le("chain_step2", step1, step2, chain_pre));
    lines.push(le("chain_step3", step2, step3, chain_pre));
    lines.push(le("chain_step4", step3, t_g as f64, chain_pre));

    Ok(AnalysisReport {
        n,
        p,
        sizes: Sizes {
            h: h.len(),
            h_pi: split.crossing.len(),
            hbar_pi: split.missing.len(),
            h_parts: [h1.len(), h2.len(), h3.len()],
            g_pi: g_pi.len(),
            q: bpi.q.len(),
            j: j.len(),
            b: bpi.b.len(),
            h_in_b: h_in_b.len(),
            h_prime: h_prime.len(),
            f5hat: hats.len(),
        },
        regime,
        classes,
        classes_primed,
        split: hs,
        split_primed: hs_primed,
        t_g,
        balanced,
        pi_maximizes,
        h1_largest,
        h_tripartite,
        lines,
    })
}
