//! Branch and bound over edge inclusion for the largest F5-free edge subset.
//!
//! Every F5 copy of the host is a constraint "at most two of these three
//! edges". A copy with one included edge and no excluded edge makes its two
//! open edges a conflicting pair; a copy with two included edges excludes
//! its third.
//!
//! Only maximal solutions are searched, which loses no maximum one:
//! * an open edge lying in no live copy is included outright;
//! * an excluded edge must be blocked, i.e. some copy through it has both
//!   other edges included. An excluded edge with no possible blocker fails
//!   the node; with exactly one, that blocker's edges are included.
//!
//! Interchangeable host vertices are exploited by orbital branching: while
//! the node is invariant under permutations of twin vertices, an orbit of
//! edges is split into "its representative is in" and "the whole orbit is
//! out", and the optima found in the first branch are closed under the
//! group.
//!
//! The bound is `included + cliques − packing`: `cliques` is a greedy cover
//! of the open edges by cliques of the conflict graph, and `packing` counts
//! disjoint live copies whose three edges are all open singleton cliques.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

const UNDECIDED: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

type Bits<const W: usize> = [u64; W];

fn bit<const W: usize>(set: &Bits<W>, i: usize) -> bool {
    set[i >> 6] >> (i & 63) & 1 == 1
}

fn set_bit<const W: usize>(set: &mut Bits<W>, i: usize) {
    set[i >> 6] |= 1 << (i & 63);
}

fn clear_bit<const W: usize>(set: &mut Bits<W>, i: usize) {
    set[i >> 6] &= !(1 << (i & 63));
}

fn count<const W: usize>(set: &Bits<W>) -> u32 {
    set.iter().map(|w| w.count_ones()).sum()
}

fn first<const W: usize>(set: &Bits<W>) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

pub(crate) struct Conflicts {
    pub m: usize,
    pub copies: Vec<[u32; 3]>,
    pub by_edge: Vec<Vec<u32>>,
    /// `third[third_start[x * m + y]..third_start[x * m + y + 1]]` lists the
    /// edges completing a copy with `x` and `y`.
    third_start: Vec<u32>,
    third: Vec<u32>,
}

impl Conflicts {
    pub fn new(m: usize, copies: Vec<[u32; 3]>) -> Self {
        let mut by_edge = vec![Vec::new(); m];
        let mut third_start = vec![0u32; m * m + 1];
        let orders = |&[x, y, z]: &[u32; 3]| {
            let (x, y, z) = (x as usize, y as usize, z as usize);
            [(x, y, z), (y, x, z), (x, z, y), (z, x, y), (y, z, x), (z, y, x)]
        };
        for (id, c) in copies.iter().enumerate() {
            for &e in c {
                by_edge[e as usize].push(id as u32);
            }
            for (a, b, _) in orders(c) {
                third_start[a * m + b + 1] += 1;
            }
        }
        for i in 0..m * m {
            third_start[i + 1] += third_start[i];
        }
        let mut fill = third_start.clone();
        let mut third = vec![0u32; copies.len() * 6];
        for c in &copies {
            for (a, b, z) in orders(c) {
                third[fill[a * m + b] as usize] = z as u32;
                fill[a * m + b] += 1;
            }
        }
        Conflicts {
            m,
            copies,
            by_edge,
            third_start,
            third,
        }
    }

    fn thirds(&self, x: usize, y: usize) -> &[u32] {
        let i = x * self.m + y;
        &self.third[self.third_start[i] as usize..self.third_start[i + 1] as usize]
    }
}

/// Twin classes of the host: swapping two vertices of one class maps the
/// host onto itself.
pub(crate) struct Twins {
    pub class: Vec<u32>,
    /// Sorted vertices of each host edge, by edge index.
    pub edges: Vec<[u32; 3]>,
    pub index: HashMap<[u32; 3], u32>,
}

impl Twins {
    /// `None` when every class is a singleton.
    pub fn new(n: usize, edges: Vec<[u32; 3]>) -> Option<Self> {
        let index: HashMap<[u32; 3], u32> = edges.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
        let swaps = |a: u32, b: u32| {
            edges.iter().all(|e| {
                let mut img = e.map(|v| if v == a { b } else if v == b { a } else { v });
                img.sort_unstable();
                index.contains_key(&img)
            })
        };
        let mut class = vec![u32::MAX; n];
        let mut reps: Vec<u32> = Vec::new();
        for v in 0..n as u32 {
            let k = reps.iter().position(|&r| swaps(r, v)).unwrap_or_else(|| {
                reps.push(v);
                reps.len() - 1
            });
            class[v as usize] = k as u32;
        }
        (reps.len() < n).then_some(Twins { class, edges, index })
    }

    /// Edge permutations induced by adjacent transpositions within each
    /// class of `cls`.
    fn generators(&self, cls: &[u32]) -> Vec<Vec<u32>> {
        let mut members: HashMap<u32, Vec<u32>> = HashMap::new();
        for (v, &c) in cls.iter().enumerate() {
            members.entry(c).or_default().push(v as u32);
        }
        let mut keys: Vec<u32> = members.keys().copied().collect();
        keys.sort_unstable();
        let mut out = Vec::new();
        for k in keys {
            for w in members[&k].windows(2) {
                let (a, b) = (w[0], w[1]);
                let perm = self
                    .edges
                    .iter()
                    .map(|e| {
                        let mut img = e.map(|v| if v == a { b } else if v == b { a } else { v });
                        img.sort_unstable();
                        self.index[&img]
                    })
                    .collect();
                out.push(perm);
            }
        }
        out
    }
}

pub(crate) struct SearchOutcome {
    pub best: usize,
    pub best_set: Vec<bool>,
    /// Every maximum set met, when enumerating; `None` otherwise.
    pub all: Option<Vec<Vec<bool>>>,
    pub truncated: bool,
    pub nodes: u64,
}

/// Buffers reused across bound computations. Clique sets are bitsets over
/// clique indices, which never exceed the edge count.
struct Scratch<const W: usize> {
    order: Vec<usize>,
    key: Vec<u32>,
    cliques: Vec<Bits<W>>,
    common: Vec<Bits<W>>,
    clique_of: Vec<usize>,
    active: Bits<W>,
    cand: Vec<Bits<W>>,
    causes: Vec<Bits<W>>,
    chooser: Vec<usize>,
    queue: Vec<usize>,
    core: Bits<W>,
}

impl<const W: usize> Default for Scratch<W> {
    fn default() -> Self {
        Scratch {
            order: Vec::new(),
            key: Vec::new(),
            cliques: Vec::new(),
            common: Vec::new(),
            clique_of: Vec::new(),
            active: [0; W],
            cand: Vec::new(),
            causes: Vec::new(),
            chooser: Vec::new(),
            queue: Vec::new(),
            core: [0; W],
        }
    }
}

pub(crate) struct Search<'a, const W: usize> {
    cf: &'a Conflicts,
    status: Vec<u8>,
    copy_in: Vec<u8>,
    copy_out: Vec<u8>,
    /// Copies through the edge with no excluded edge.
    live: Vec<u32>,
    /// Copies through the edge whose other two edges are not excluded.
    blockers: Vec<u32>,
    /// Conflict multiplicities, row-major `m × m`.
    conflict: Vec<u16>,
    adj: Vec<Bits<W>>,
    open: Bits<W>,
    trail: Vec<u32>,
    included: usize,
    undecided: usize,
    best: usize,
    best_set: Vec<bool>,
    enumerate: bool,
    cap: usize,
    all: Vec<Vec<bool>>,
    truncated: bool,
    nodes: u64,
    budget: u64,
    scratch: Scratch<W>,
    twins: Option<&'a Twins>,
    /// Orbit representatives included by orbital branching, outermost first.
    fixed: Vec<usize>,
    /// Bumped whenever the incumbent value improves.
    generation: u64,
}

impl<'a, const W: usize> Search<'a, W> {
    /// `incumbent` is a known feasible set, if any.
    pub fn new(
        cf: &'a Conflicts,
        twins: Option<&'a Twins>,
        incumbent: Option<Vec<bool>>,
        enumerate: bool,
        cap: usize,
        budget: u64,
    ) -> Self {
        assert!(cf.m <= W * 64, "host too large for the bitset width");
        let live: Vec<u32> = cf.by_edge.iter().map(|v| v.len() as u32).collect();
        let (best, best_set) = match incumbent {
            Some(set) => (set.iter().filter(|&&b| b).count(), set),
            None => (0, vec![false; cf.m]),
        };
        let mut open = [0u64; W];
        for e in 0..cf.m {
            set_bit(&mut open, e);
        }
        Search {
            cf,
            status: vec![UNDECIDED; cf.m],
            copy_in: vec![0; cf.copies.len()],
            copy_out: vec![0; cf.copies.len()],
            blockers: live.clone(),
            live,
            conflict: vec![0; cf.m * cf.m],
            adj: vec![[0; W]; cf.m],
            open,
            trail: Vec::with_capacity(cf.m),
            included: 0,
            undecided: cf.m,
            best,
            best_set,
            enumerate,
            cap,
            all: Vec::new(),
            truncated: false,
            nodes: 0,
            budget,
            scratch: Scratch::default(),
            twins,
            fixed: Vec::new(),
            generation: 0,
        }
    }

    pub fn run(mut self) -> Result<SearchOutcome> {
        if self.propagate() {
            self.branch(self.twins.is_some())?;
        }
        self.undo_to(0);
        Ok(SearchOutcome {
            best: self.best,
            best_set: self.best_set,
            all: self.enumerate.then_some(self.all),
            truncated: self.truncated,
            nodes: self.nodes,
        })
    }

    fn add_conflict(&mut self, f: usize, g: usize, delta: i32) {
        let m = self.cf.m;
        for (a, b) in [(f, g), (g, f)] {
            let slot = &mut self.conflict[a * m + b];
            let before = *slot;
            *slot = (before as i32 + delta) as u16;
            if before == 0 && *slot > 0 {
                set_bit(&mut self.adj[a], b);
            } else if before > 0 && *slot == 0 {
                clear_bit(&mut self.adj[a], b);
            }
        }
    }

    /// The two edges of copy `c` other than `e`.
    fn others(&self, c: usize, e: usize) -> (usize, usize) {
        let [x, y, z] = self.cf.copies[c].map(|v| v as usize);
        if x == e {
            (y, z)
        } else if y == e {
            (x, z)
        } else {
            (x, y)
        }
    }

    /// Includes `e`; returns false if some copy becomes fully included.
    fn set_in(&mut self, e: usize) -> bool {
        debug_assert_eq!(self.status[e], UNDECIDED);
        let cf = self.cf;
        self.status[e] = IN;
        clear_bit(&mut self.open, e);
        self.included += 1;
        self.undecided -= 1;
        self.trail.push(e as u32);
        let mut ok = true;
        let mut forced = Vec::new();
        for &c in &cf.by_edge[e] {
            let c = c as usize;
            self.copy_in[c] += 1;
            if self.copy_out[c] != 0 {
                continue;
            }
            let (f, g) = self.others(c, e);
            match self.copy_in[c] {
                1 => self.add_conflict(f, g, 1),
                2 => {
                    let t = if self.status[f] == IN { g } else { f };
                    self.add_conflict(e, t, -1);
                    forced.push(t);
                }
                _ => ok = false,
            }
        }
        if !ok {
            return false;
        }
        for t in forced {
            if self.status[t] == UNDECIDED {
                self.set_out(t);
            }
        }
        true
    }

    fn set_out(&mut self, f: usize) {
        debug_assert_eq!(self.status[f], UNDECIDED);
        let cf = self.cf;
        self.status[f] = OUT;
        clear_bit(&mut self.open, f);
        self.undecided -= 1;
        self.trail.push(f as u32);
        for &c in &cf.by_edge[f] {
            let c = c as usize;
            self.copy_out[c] += 1;
            let (g, h) = self.others(c, f);
            match self.copy_out[c] {
                1 => {
                    for x in [f, g, h] {
                        self.live[x] -= 1;
                    }
                    self.blockers[g] -= 1;
                    self.blockers[h] -= 1;
                    if self.copy_in[c] == 1 {
                        let t = if self.status[g] == IN { h } else { g };
                        self.add_conflict(f, t, -1);
                    }
                }
                2 => {
                    let prev = if self.status[g] == OUT { g } else { h };
                    self.blockers[prev] -= 1;
                }
                _ => {}
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        let cf = self.cf;
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("above mark") as usize;
            match self.status[e] {
                IN => {
                    for &c in &cf.by_edge[e] {
                        let c = c as usize;
                        if self.copy_out[c] == 0 {
                            let (f, g) = self.others(c, e);
                            match self.copy_in[c] {
                                1 => self.add_conflict(f, g, -1),
                                2 => {
                                    let t = if self.status[f] == IN { g } else { f };
                                    self.add_conflict(e, t, 1);
                                }
                                _ => {}
                            }
                        }
                        self.copy_in[c] -= 1;
                    }
                    self.included -= 1;
                }
                OUT => {
                    for &c in &cf.by_edge[e] {
                        let c = c as usize;
                        let (g, h) = self.others(c, e);
                        match self.copy_out[c] {
                            1 => {
                                for x in [e, g, h] {
                                    self.live[x] += 1;
                                }
                                self.blockers[g] += 1;
                                self.blockers[h] += 1;
                                if self.copy_in[c] == 1 {
                                    let t = if self.status[g] == IN { h } else { g };
                                    self.add_conflict(e, t, 1);
                                }
                            }
                            2 => {
                                let prev = if self.status[g] == OUT { g } else { h };
                                self.blockers[prev] += 1;
                            }
                            _ => {}
                        }
                        self.copy_out[c] -= 1;
                    }
                }
                _ => unreachable!("trail holds decided edges"),
            }
            self.status[e] = UNDECIDED;
            set_bit(&mut self.open, e);
            self.undecided += 1;
        }
    }

    /// Applies the maximality rules to a fixpoint. Returns false when the
    /// node holds no maximal solution.
    fn propagate(&mut self) -> bool {
        let cf = self.cf;
        loop {
            let mut changed = false;
            for e in 0..cf.m {
                match self.status[e] {
                    UNDECIDED if self.live[e] == 0 => {
                        if !self.set_in(e) {
                            return false;
                        }
                        changed = true;
                    }
                    OUT if self.blockers[e] == 0 => return false,
                    OUT if self.blockers[e] == 1 => {
                        let c = cf.by_edge[e]
                            .iter()
                            .map(|&c| c as usize)
                            .find(|&c| self.copy_out[c] == 1)
                            .expect("one blocker left");
                        let (g, h) = self.others(c, e);
                        for x in [g, h] {
                            if self.status[x] == UNDECIDED {
                                if !self.set_in(x) {
                                    return false;
                                }
                                changed = true;
                            }
                        }
                        // the blocker may have lost an edge to a forced exclusion
                        if self.status[g] != IN || self.status[h] != IN {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Upper bound on the best completion, or any value not above `limit`
    /// once the bound is known to reach it.
    fn bound(&mut self, limit: usize) -> usize {
        let mut sc = std::mem::take(&mut self.scratch);
        let ub = self.bound_with(&mut sc, limit);
        self.scratch = sc;
        ub
    }

    fn bound_with(&self, sc: &mut Scratch<W>, limit: usize) -> usize {
        let cf = self.cf;
        sc.order.clear();
        sc.order.extend((0..cf.m).filter(|&e| self.status[e] == UNDECIDED));
        sc.key.resize(cf.m, 0);
        for &e in &sc.order {
            sc.key[e] = self.adj[e].iter().zip(&self.open).map(|(a, o)| (a & o).count_ones()).sum();
        }
        let key = &sc.key;
        sc.order.sort_unstable_by_key(|&e| (std::cmp::Reverse(key[e]), e));

        // greedy clique cover; `common` holds each clique's common neighbourhood
        sc.cliques.clear();
        sc.common.clear();
        sc.clique_of.resize(cf.m, usize::MAX);
        for &e in &sc.order {
            match sc.common.iter().position(|cand| bit(cand, e)) {
                Some(k) => {
                    for w in 0..W {
                        sc.common[k][w] &= self.adj[e][w];
                    }
                    set_bit(&mut sc.cliques[k], e);
                    sc.clique_of[e] = k;
                }
                None => {
                    let mut cand = self.adj[e];
                    for w in 0..W {
                        cand[w] &= self.open[w];
                    }
                    let mut members = [0; W];
                    set_bit(&mut members, e);
                    sc.clique_of[e] = sc.cliques.len();
                    sc.cliques.push(members);
                    sc.common.push(cand);
                }
            }
        }
        let mut ub = self.included + sc.cliques.len();
        sc.active = [0; W];
        for k in 0..sc.cliques.len() {
            set_bit(&mut sc.active, k);
        }
        while ub > limit && self.refute(sc) {
            for w in 0..W {
                sc.active[w] &= !sc.core[w];
            }
            ub -= 1;
        }
        ub
    }

    /// Unit propagation over the active cliques, each read as "pick one
    /// member". On success `sc.core` holds cliques admitting no joint pick.
    fn refute(&self, sc: &mut Scratch<W>) -> bool {
        let cf = self.cf;
        let r = sc.cliques.len();
        sc.cand.clear();
        sc.cand.extend_from_slice(&sc.cliques);
        sc.causes.clear();
        sc.causes.resize(r, [0; W]);
        sc.chooser.resize(cf.m, usize::MAX);
        let mut chosen = [0u64; W];
        sc.queue.clear();
        for k in 0..r {
            if bit(&sc.active, k) && count(&sc.cand[k]) == 1 {
                sc.queue.push(k);
            }
        }
        let mut conflict = None;
        'outer: while let Some(k) = sc.queue.pop() {
            let Some(x) = first(&sc.cand[k]) else {
                conflict = Some(k);
                break;
            };
            if bit(&chosen, x) {
                continue;
            }
            set_bit(&mut chosen, x);
            sc.chooser[x] = k;
            for w in 0..W {
                let mut nb = self.adj[x][w] & self.open[w];
                while nb != 0 {
                    let z = w * 64 + nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    let j = sc.clique_of[z];
                    if j == k || !bit(&sc.active, j) || !bit(&sc.cand[j], z) {
                        continue;
                    }
                    clear_bit(&mut sc.cand[j], z);
                    set_bit(&mut sc.causes[j], k);
                    match count(&sc.cand[j]) {
                        0 => {
                            conflict = Some(j);
                            break 'outer;
                        }
                        1 => sc.queue.push(j),
                        _ => {}
                    }
                }
            }
            // every member of an active clique is open, so a copy through
            // two chosen edges has all three edges open
            for w in 0..W {
                let mut ys = chosen[w];
                while ys != 0 {
                    let y = w * 64 + ys.trailing_zeros() as usize;
                    ys &= ys - 1;
                    for &z in cf.thirds(x, y) {
                        let z = z as usize;
                        let j = sc.clique_of[z];
                        if !bit(&sc.active, j) || !bit(&sc.cand[j], z) {
                            continue;
                        }
                        clear_bit(&mut sc.cand[j], z);
                        set_bit(&mut sc.causes[j], k);
                        set_bit(&mut sc.causes[j], sc.chooser[y]);
                        match count(&sc.cand[j]) {
                            0 => {
                                conflict = Some(j);
                                break 'outer;
                            }
                            1 => sc.queue.push(j),
                            _ => {}
                        }
                    }
                }
            }
        }
        let Some(j) = conflict else {
            return false;
        };
        sc.core = [0; W];
        set_bit(&mut sc.core, j);
        sc.queue.clear();
        sc.queue.push(j);
        while let Some(k) = sc.queue.pop() {
            for w in 0..W {
                let mut fresh = sc.causes[k][w] & !sc.core[w];
                sc.core[w] |= fresh;
                while fresh != 0 {
                    sc.queue.push(w * 64 + fresh.trailing_zeros() as usize);
                    fresh &= fresh - 1;
                }
            }
        }
        true
    }

    fn record(&mut self) {
        let value = self.included;
        let set: Vec<bool> = self.status.iter().map(|&s| s == IN).collect();
        if value > self.best {
            self.best = value;
            self.best_set = set.clone();
            self.all.clear();
            self.truncated = false;
            self.generation += 1;
        }
        if self.enumerate && value == self.best {
            if self.all.len() < self.cap {
                self.all.push(set);
            } else {
                self.truncated = true;
            }
        }
    }

    /// Twin classes refined by membership in each fixed representative, or
    /// `None` once every class is a singleton.
    fn node_classes(&self) -> Option<Vec<u32>> {
        let twins = self.twins?;
        if self.fixed.len() >= 64 {
            return None;
        }
        let mut ids: HashMap<(u32, u64), u32> = HashMap::new();
        let mut cls = Vec::with_capacity(twins.class.len());
        for (v, &c) in twins.class.iter().enumerate() {
            let inside = self
                .fixed
                .iter()
                .enumerate()
                .filter(|(_, &e)| twins.edges[e].contains(&(v as u32)))
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            let next = ids.len() as u32;
            cls.push(*ids.entry((c, inside)).or_insert(next));
        }
        (ids.len() < cls.len()).then_some(cls)
    }

    /// Adds to `all` every image under the group of `cls` of the optima
    /// recorded since `from`.
    fn close(&mut self, cls: &[u32], from: usize, generation: u64) {
        let twins = self.twins.expect("orbital branching needs twins");
        let from = if self.generation == generation { from } else { 0 };
        let gens = twins.generators(cls);
        let mut seen: HashSet<Vec<bool>> = self.all[from..].iter().cloned().collect();
        let mut queue: Vec<Vec<bool>> = self.all[from..].to_vec();
        while let Some(set) = queue.pop() {
            for perm in &gens {
                let mut img = vec![false; set.len()];
                for (i, &b) in set.iter().enumerate() {
                    img[perm[i] as usize] = b;
                }
                if seen.contains(&img) {
                    continue;
                }
                if self.all.len() >= self.cap {
                    self.truncated = true;
                    return;
                }
                seen.insert(img.clone());
                self.all.push(img.clone());
                queue.push(img);
            }
        }
    }

    fn branch(&mut self, orbital: bool) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        if self.undecided == 0 {
            self.record();
            return Ok(());
        }
        // enumeration keeps nodes that can still tie the incumbent
        let limit = if self.enumerate { self.best.saturating_sub(1) } else { self.best };
        if self.best > 0 && self.bound(limit) <= limit {
            return Ok(());
        }
        let e = (0..self.cf.m)
            .filter(|&e| self.status[e] == UNDECIDED)
            .max_by_key(|&e| (self.live[e], std::cmp::Reverse(e)))
            .expect("undecided edge exists");

        let classes = if orbital { self.node_classes() } else { None };
        let Some(cls) = classes else {
            let mark = self.trail.len();
            if self.set_in(e) && self.propagate() {
                self.branch(false)?;
            }
            self.undo_to(mark);

            self.set_out(e);
            if self.propagate() {
                self.branch(false)?;
            }
            self.undo_to(mark);
            return Ok(());
        };

        let twins = self.twins.expect("classes come from twins");
        let key = |x: usize| {
            let mut k = twins.edges[x].map(|v| cls[v as usize]);
            k.sort_unstable();
            k
        };
        let ke = key(e);
        let orbit: Vec<usize> = (0..self.cf.m)
            .filter(|&x| self.status[x] == UNDECIDED && key(x) == ke)
            .collect();

        let mark = self.trail.len();
        let (from, generation) = (self.all.len(), self.generation);
        self.fixed.push(e);
        if self.set_in(e) && self.propagate() {
            self.branch(true)?;
        }
        self.fixed.pop();
        self.undo_to(mark);
        if self.enumerate && orbit.len() > 1 {
            self.close(&cls, from, generation);
        }

        for &x in &orbit {
            if self.status[x] == UNDECIDED {
                self.set_out(x);
            }
        }
        if self.propagate() {
            self.branch(true)?;
        }
        self.undo_to(mark);
        Ok(())
    }
}
