//! The PC algorithm over a complete answer table: adjacency search,
//! v-structure orientation, Meek rules R1-R4, and extension of the
//! resulting CPDAG to a DAG.

use crate::error::{Error, Result};
use crate::graph::{pair_count, Dag, UndirectedGraph, VertexSet};
use crate::table::{compress, AnswerTable};

/// Separating sets found by the adjacency search, one slot per vertex pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SepSets {
    n: usize,
    sets: Vec<Option<VertexSet>>,
}

impl SepSets {
    fn new(n: usize) -> Self {
        SepSets {
            n,
            sets: vec![None; pair_count(n)],
        }
    }

    fn slot(&self, u: usize, v: usize) -> usize {
        let (a, b) = (u.min(v), u.max(v));
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn get(&self, u: usize, v: usize) -> Option<VertexSet> {
        self.sets[self.slot(u, v)]
    }

    pub fn insert(&mut self, u: usize, v: usize, s: VertexSet) {
        let i = self.slot(u, v);
        self.sets[i] = Some(s);
    }
}

#[inline]
fn dependent(t: &AnswerTable, u: usize, v: usize, s: VertexSet) -> bool {
    let n = t.n();
    let (a, b) = (u.min(v), u.max(v));
    let pair = a * (2 * n - a - 1) / 2 + (b - a - 1);
    t.get(pair << (n - 2) | compress(s.bits(), a, b) as usize)
}

/// Subsets of `mask` with exactly `size` members, in increasing bit order.
fn subsets_of_size(mask: VertexSet, size: usize) -> impl Iterator<Item = VertexSet> {
    let members: Vec<usize> = mask.iter().collect();
    let m = members.len();
    let mut idx: Option<Vec<usize>> = (size <= m).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let cur = idx.as_mut()?;
        let out: VertexSet = cur.iter().map(|&i| members[i]).collect();
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                idx = None;
                break;
            }
            i -= 1;
            if cur[i] < m - size + i {
                cur[i] += 1;
                for j in i + 1..size {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Adjacency search. Starting from the complete graph, for growing `ℓ` the
/// edge `{u, v}` is removed as soon as some `ℓ`-subset of the current
/// neighbours of `u` (then of `v`) makes them independent; that subset is
/// recorded as their separating set. Pairs are visited in lexicographic
/// order and removals take effect immediately.
pub fn pc_skeleton(t: &AnswerTable) -> (UndirectedGraph, SepSets) {
    let n = t.n();
    let mut g = UndirectedGraph::complete(n).expect("table sizes are within graph limits");
    let mut sepsets = SepSets::new(n);
    let mut level = 0;
    loop {
        let mut any_testable = false;
        for u in 0..n {
            for v in u + 1..n {
                if !g.has_edge(u, v) {
                    continue;
                }
                for (a, b) in [(u, v), (v, u)] {
                    let candidates = g.neighbors(a).without(b);
                    if candidates.len() < level {
                        continue;
                    }
                    any_testable = true;
                    if let Some(s) = subsets_of_size(candidates, level).find(|&s| !dependent(t, u, v, s)) {
                        g.set_edge(u, v, false);
                        sepsets.insert(u, v, s);
                        break;
                    }
                }
            }
        }
        if !any_testable {
            break;
        }
        level += 1;
    }
    (g, sepsets)
}

/// Partially directed graph: `directed[u]` bit `v` means `u -> v`,
/// `undirected` is symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cpdag {
    n: usize,
    directed: Vec<u64>,
    undirected: Vec<u64>,
}

impl Cpdag {
    /// Builds from explicit arc and edge lists, rejecting overlaps and
    /// self-loops.
    pub fn new(n: usize, arcs: &[(usize, usize)], edges: &[(usize, usize)]) -> Result<Self> {
        let mut c = Cpdag {
            n,
            directed: vec![0; n],
            undirected: vec![0; n],
        };
        for &(u, v) in arcs.iter().chain(edges) {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if c.adjacent(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            if arcs.contains(&(u, v)) && edges.iter().all(|&e| e != (u, v)) {
                c.directed[u] |= 1 << v;
            } else {
                c.undirected[u] |= 1 << v;
                c.undirected[v] |= 1 << u;
            }
        }
        Ok(c)
    }

    fn from_skeleton(g: &UndirectedGraph) -> Self {
        Cpdag {
            n: g.n(),
            directed: vec![0; g.n()],
            undirected: (0..g.n()).map(|v| g.neighbors(v).bits()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.directed[u] >> v & 1 == 1
    }

    pub fn has_undirected(&self, u: usize, v: usize) -> bool {
        self.undirected[u] >> v & 1 == 1
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u) || self.has_undirected(u, v)
    }

    fn adjacency(&self, v: usize) -> u64 {
        self.undirected[v] | self.directed[v] | self.parents_bits(v)
    }

    fn parents_bits(&self, v: usize) -> u64 {
        (0..self.n)
            .filter(|&u| self.has_arc(u, v))
            .fold(0, |acc, u| acc | 1 << u)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| VertexSet::from_bits(self.directed[u]).iter().map(move |v| (u, v)))
    }

    pub fn undirected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet::from_bits(self.undirected[u] & !((2u64 << u) - 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        let mut g = UndirectedGraph::empty(self.n).unwrap();
        for (u, v) in self.arcs().chain(self.undirected_edges()).collect::<Vec<_>>() {
            g.set_edge(u, v, true);
        }
        g
    }

    /// Unshielded colliders among the directed arcs, as `(u, v, w)`, `u < w`.
    pub fn v_structures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.n {
            let pa = self.parents_bits(v);
            for u in VertexSet::from_bits(pa) {
                for w in VertexSet::from_bits(pa & !((2u64 << u) - 1)) {
                    if !self.adjacent(u, w) {
                        out.push((u, v, w));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn orient(&mut self, u: usize, v: usize) {
        self.undirected[u] &= !(1 << v);
        self.undirected[v] &= !(1 << u);
        self.directed[u] |= 1 << v;
    }
}

/// Orients v-structures `u -> v <- w` for every unshielded triple whose
/// middle vertex is missing from the separating set, then applies Meek's
/// rules until nothing changes.
///
/// Fails with [`Error::OrientationConflict`] when two v-structures demand
/// opposite directions on one edge, and with [`Error::InvalidArgument`]
/// when a non-adjacent pair has no separating set.
pub fn pc_orient(skel: &UndirectedGraph, sepsets: &SepSets) -> Result<Cpdag> {
    let n = skel.n();
    let mut c = Cpdag::from_skeleton(skel);
    for v in 0..n {
        let nb = skel.neighbors(v);
        for u in nb {
            for w in nb {
                if w <= u || skel.has_edge(u, w) {
                    continue;
                }
                let s = sepsets.get(u, w).ok_or_else(|| {
                    Error::InvalidArgument(format!("no separating set for {u} and {w}"))
                })?;
                if s.contains(v) {
                    continue;
                }
                for x in [u, w] {
                    if c.has_arc(v, x) {
                        return Err(Error::OrientationConflict(x, v));
                    }
                    if c.has_undirected(x, v) {
                        c.orient(x, v);
                    }
                }
            }
        }
    }
    apply_meek_rules(&mut c);
    Ok(c)
}

/// R1-R4 to a fixpoint. Candidate edges are visited in lexicographic order
/// of `(a, b)` for the orientation `a -> b`.
fn apply_meek_rules(c: &mut Cpdag) {
    let n = c.n;
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !c.has_undirected(a, b) {
                    continue;
                }
                if meek_applies(c, a, b) {
                    c.orient(a, b);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn meek_applies(c: &Cpdag, a: usize, b: usize) -> bool {
    let n = c.n;
    let adj_b = c.adjacency(b);
    let adj_a = c.adjacency(a);
    let into_a = c.parents_bits(a);
    let into_b = c.parents_bits(b);
    // R1: x -> a - b with x, b non-adjacent.
    if into_a & !adj_b & !(1 << b) != 0 {
        return true;
    }
    // R2: a -> x -> b.
    if c.directed[a] & into_b != 0 {
        return true;
    }
    // R3: a - x -> b and a - y -> b with x, y non-adjacent.
    let mids = c.undirected[a] & into_b;
    for x in VertexSet::from_bits(mids) {
        if VertexSet::from_bits(mids).iter().any(|y| y > x && !c.adjacent(x, y)) {
            return true;
        }
    }
    // R4: a - x -> y -> b with x, b non-adjacent and a, y adjacent.
    for x in VertexSet::from_bits(c.undirected[a]) {
        if x == b || adj_b >> x & 1 == 1 {
            continue;
        }
        for y in VertexSet::from_bits(c.directed[x]) {
            if y < n && y != a && c.has_arc(y, b) && adj_a >> y & 1 == 1 {
                return true;
            }
        }
    }
    false
}

/// Orients the undirected edges of `c` without creating new v-structures or
/// cycles, by repeatedly removing a vertex that has no outgoing arcs and
/// whose undirected neighbours are adjacent to all its other neighbours.
/// The highest-numbered eligible vertex is removed first.
pub fn cpdag_to_dag(c: &Cpdag) -> Result<Dag> {
    let n = c.n;
    let mut children = c.directed.clone();
    let mut remaining = VertexSet::full(n).bits();
    let mut work = c.clone();
    while remaining != 0 {
        let pick = VertexSet::from_bits(remaining).iter().rev().find(|&x| {
            if work.directed[x] & remaining != 0 {
                return false;
            }
            let adj_x = work.adjacency(x) & remaining;
            VertexSet::from_bits(work.undirected[x] & remaining).iter().all(|y| {
                let others = adj_x & !(1 << y);
                others & !work.adjacency(y) == 0
            })
        });
        let x = pick.ok_or(Error::NotExtendable)?;
        for y in VertexSet::from_bits(work.undirected[x] & remaining) {
            children[y] |= 1 << x;
            work.orient(y, x);
        }
        remaining &= !(1 << x);
    }
    let d = Dag::from_children(children).map_err(|_| Error::NotExtendable)?;
    if d.v_structures() != c.v_structures() {
        return Err(Error::NotExtendable);
    }
    Ok(d)
}

/// Full PC pipeline from a table to one DAG of the learned class.
pub fn pc_learn(t: &AnswerTable) -> Result<Dag> {
    let (skel, sepsets) = pc_skeleton(t);
    let c = pc_orient(&skel, &sepsets)?;
    cpdag_to_dag(&c)
}
