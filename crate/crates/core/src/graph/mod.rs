//! Graph representations: vertex subsets, undirected graphs, DAGs and the
//! skeleton/v-structure key that identifies a Markov equivalence class.
//!
//! Vertices are `0..n`. Every graph stores one `u64` adjacency row per
//! vertex, so pure graph operations support up to 64 vertices.

mod connectivity;
mod named;

pub use connectivity::{max_pairwise_connectivity, pairwise_connectivity};
pub use named::{
    clique_dag, complete_dag, d1, d1_prime, empty_dag, hub_pair, make_chain_dag,
    make_chain_undirected, named_graph, Graph, NamedGraph,
};

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use crate::error::{Error, Result};

/// Largest vertex count supported by the bitmask representation.
pub const MAX_VERTICES: usize = 64;

/// A subset of vertex ids, one bit per vertex.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const fn empty() -> Self {
        VertexSet(0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// `{0, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub const fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[must_use]
    pub const fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[must_use]
    pub const fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// True when every member is below `n`.
    pub const fn fits(self, n: usize) -> bool {
        self.is_subset(VertexSet::full(n))
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    /// All subsets of `self`, starting with the empty set and ending with
    /// `self`, in increasing order of their bit patterns.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = members.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(members.into_iter().collect())
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl DoubleEndedIterator for VertexIter {
    fn next_back(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = 63 - self.0.leading_zeros() as usize;
        self.0 &= !(1 << v);
        Some(v)
    }
}

impl ExactSizeIterator for VertexIter {}

/// Iterator over all subsets of a mask.
#[derive(Clone, Debug)]
pub struct SubsetIter {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for SubsetIter {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(VertexSet(cur))
    }
}

pub(crate) fn check_vertex_count(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            n,
            max: MAX_VERTICES,
        });
    }
    Ok(())
}

fn check_vertex(n: usize, v: usize) -> Result<()> {
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(())
}

/// Number of unordered vertex pairs, `C(n, 2)`.
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Simple undirected graph as a symmetric adjacency bit-matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<u64>,
}

impl UndirectedGraph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        Ok(UndirectedGraph {
            n,
            adj: vec![0; n],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        let full = VertexSet::full(n).bits();
        let adj = (0..n).map(|v| full & !(1u64 << v)).collect();
        Ok(UndirectedGraph { n, adj })
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            check_vertex(n, u)?;
            check_vertex(n, v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Decodes an edge code whose bit `i` is the `i`-th pair in
    /// lexicographic order `(0,1), (0,2), .., (n-2,n-1)`.
    pub fn from_edge_code(n: usize, code: u64) -> Result<Self> {
        if pair_count(n) > 64 {
            return Err(Error::TooManyVertices { n, max: 11 });
        }
        let mut g = Self::empty(n)?;
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if code >> bit & 1 == 1 {
                    g.set_edge(u, v, true);
                }
                bit += 1;
            }
        }
        Ok(g)
    }

    /// Inverse of [`UndirectedGraph::from_edge_code`]; requires `n <= 11`.
    pub fn edge_code(&self) -> u64 {
        debug_assert!(pair_count(self.n) <= 64);
        let mut code = 0u64;
        let mut bit = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        code
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !((2u64 << u) - 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if present {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
        } else {
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
        }
    }

    /// Copy with the adjacency of `{u, v}` flipped.
    #[must_use]
    pub fn toggled(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        let present = g.has_edge(u, v);
        g.set_edge(u, v, !present);
        g
    }

    /// Number of vertex pairs whose adjacency differs.
    pub fn edge_difference(&self, other: &UndirectedGraph) -> usize {
        self.adj
            .iter()
            .zip(&other.adj)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Vertices reachable from `start` without entering `blocked`.
    pub fn reachable_avoiding(&self, start: usize, blocked: VertexSet) -> VertexSet {
        let allowed = !blocked.bits();
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for v in VertexSet(frontier) {
                next |= self.adj[v];
            }
            next &= allowed & !seen;
            seen |= next;
            frontier = next;
        }
        VertexSet(seen)
    }

    /// True when the graph is a single path through all vertices.
    pub fn is_chain(&self) -> bool {
        self.chain_order().is_some()
    }

    /// Vertex order along the path when the graph is a chain, starting from
    /// the lower-numbered leaf.
    pub fn chain_order(&self) -> Option<Vec<usize>> {
        let n = self.n;
        if n == 0 {
            return None;
        }
        if n == 1 {
            return Some(vec![0]);
        }
        if self.edge_count() != n - 1 || (0..n).any(|v| self.degree(v) == 0 || self.degree(v) > 2) {
            return None;
        }
        let start = (0..n).find(|&v| self.degree(v) == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < n {
            let next = self.neighbors(cur).iter().find(|&w| w != prev)?;
            prev = cur;
            cur = next;
            order.push(cur);
        }
        (self.reachable_avoiding(start, VertexSet::empty()).len() == n).then_some(order)
    }
}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UndirectedGraph(n={}, ", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Directed acyclic graph. `children[u]` has bit `v` set iff arc `u -> v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dag {
    n: usize,
    children: Vec<u64>,
    parents: Vec<u64>,
}

impl Dag {
    pub fn empty(n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        Ok(Dag {
            n,
            children: vec![0; n],
            parents: vec![0; n],
        })
    }

    /// Builds a DAG from an arc list, rejecting self-loops, duplicate or
    /// antiparallel arcs, out-of-range endpoints and directed cycles.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = Self::empty(n)?;
        for &(u, v) in arcs {
            check_vertex(n, u)?;
            check_vertex(n, v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if d.has_arc(u, v) || d.has_arc(v, u) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            d.children[u] |= 1 << v;
            d.parents[v] |= 1 << u;
        }
        if d.topological_order().is_none() {
            return Err(Error::Cyclic);
        }
        Ok(d)
    }

    /// Builds from child rows without the acyclicity check. Callers must
    /// guarantee an acyclic, loop-free, antisymmetric relation.
    pub(crate) fn from_children_unchecked(children: Vec<u64>) -> Self {
        let n = children.len();
        let mut parents = vec![0u64; n];
        for (u, &row) in children.iter().enumerate() {
            for v in VertexSet(row) {
                parents[v] |= 1 << u;
            }
        }
        Dag {
            n,
            children,
            parents,
        }
    }

    /// Builds from child rows, checking every invariant.
    pub fn from_children(children: Vec<u64>) -> Result<Self> {
        let n = children.len();
        check_vertex_count(n)?;
        let arcs: Vec<(usize, usize)> = children
            .iter()
            .enumerate()
            .flat_map(|(u, &row)| VertexSet(row).iter().map(move |v| (u, v)))
            .collect();
        Self::from_arcs(n, &arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.children[u] >> v & 1 == 1
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn children(&self, v: usize) -> VertexSet {
        VertexSet(self.children[v])
    }

    pub fn parents(&self, v: usize) -> VertexSet {
        VertexSet(self.parents[v])
    }

    pub fn arc_count(&self) -> usize {
        self.children.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Arcs `(u, v)` ordered by tail, then head.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| VertexSet(self.children[u]).iter().map(move |v| (u, v)))
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<u32> = self.parents.iter().map(|p| p.count_ones()).collect();
        let mut ready: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for c in VertexSet(self.children[v]) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(c);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// Copy with arc `u -> v` added, or `None` if that would create a cycle
    /// or the pair is already adjacent.
    pub fn with_arc(&self, u: usize, v: usize) -> Option<Dag> {
        if u == v || self.adjacent(u, v) || self.reaches(v, u) {
            return None;
        }
        let mut d = self.clone();
        d.children[u] |= 1 << v;
        d.parents[v] |= 1 << u;
        Some(d)
    }

    /// Copy with arc `u -> v` removed. Returns `None` if the arc is absent.
    pub fn without_arc(&self, u: usize, v: usize) -> Option<Dag> {
        if !self.has_arc(u, v) {
            return None;
        }
        let mut d = self.clone();
        d.children[u] &= !(1 << v);
        d.parents[v] &= !(1 << u);
        Some(d)
    }

    /// Copy with arc `u -> v` turned into `v -> u`, or `None` if absent or
    /// the reversal creates a cycle.
    pub fn with_reversed(&self, u: usize, v: usize) -> Option<Dag> {
        self.without_arc(u, v)?.with_arc(v, u)
    }

    /// True when a directed path leads from `from` to `to` (`from != to`).
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.descendants_of(VertexSet::singleton(from)).contains(to)
    }

    /// Vertices reachable by a non-empty directed path from some member of
    /// `start`.
    pub fn descendants_of(&self, start: VertexSet) -> VertexSet {
        let mut seen = 0u64;
        let mut frontier = start.bits();
        while frontier != 0 {
            let mut next = 0u64;
            for v in VertexSet(frontier) {
                next |= self.children[v];
            }
            next &= !seen;
            seen |= next;
            frontier = next;
        }
        VertexSet(seen)
    }

    /// `start` together with every vertex that has a directed path into it.
    pub fn ancestral_closure(&self, start: VertexSet) -> VertexSet {
        let mut seen = start.bits();
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for v in VertexSet(frontier) {
                next |= self.parents[v];
            }
            next &= !seen;
            seen |= next;
            frontier = next;
        }
        VertexSet(seen)
    }

    pub fn skeleton(&self) -> UndirectedGraph {
        let adj = (0..self.n)
            .map(|v| self.children[v] | self.parents[v])
            .collect();
        UndirectedGraph { n: self.n, adj }
    }

    /// Skeleton plus an edge between every pair of parents with a common
    /// child.
    pub fn moral_graph(&self) -> UndirectedGraph {
        self.moral_graph_within(VertexSet::full(self.n))
    }

    /// Moral graph of the subgraph induced by `keep`; vertices outside `keep`
    /// stay isolated.
    pub fn moral_graph_within(&self, keep: VertexSet) -> UndirectedGraph {
        let k = keep.bits();
        let mut adj: Vec<u64> = (0..self.n)
            .map(|v| {
                if k >> v & 1 == 1 {
                    (self.children[v] | self.parents[v]) & k
                } else {
                    0
                }
            })
            .collect();
        for c in keep {
            let pa = self.parents[c] & k;
            for p in VertexSet(pa) {
                adj[p] |= pa & !(1 << p);
            }
        }
        UndirectedGraph { n: self.n, adj }
    }

    /// All `(u, v, w)` with `u < w`, arcs `u -> v <- w`, and `u`, `w`
    /// non-adjacent. Sorted lexicographically.
    pub fn v_structures(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            let nbr_u = self.children[u] | self.parents[u];
            for v in VertexSet(self.children[u]) {
                let others = self.parents[v] & !((2u64 << u) - 1) & !nbr_u;
                for w in VertexSet(others) {
                    out.push((u, v, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The pair (skeleton, v-structures) identifying this DAG's Markov
    /// equivalence class.
    pub fn mec_key(&self) -> MecKey {
        MecKey {
            skeleton: self.skeleton(),
            vstructs: self.v_structures(),
        }
    }

    /// Vertices with two incoming arcs, i.e. the colliders of a chain DAG.
    pub fn colliders(&self) -> VertexSet {
        (0..self.n)
            .filter(|&v| self.parents[v].count_ones() >= 2)
            .collect()
    }
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dag(n={}, ", self.n)?;
        f.debug_list().entries(self.arcs()).finish()?;
        write!(f, ")")
    }
}

/// Identifies a Markov equivalence class: the shared skeleton and the sorted
/// list of v-structures `(u, v, w)`, `u < w`, meaning `u -> v <- w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MecKey {
    pub skeleton: UndirectedGraph,
    pub vstructs: Vec<(usize, usize, usize)>,
}

impl MecKey {
    pub fn n(&self) -> usize {
        self.skeleton.n()
    }
}

pub fn markov_equivalent(a: &Dag, b: &Dag) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    Ok(a.skeleton() == b.skeleton() && a.v_structures() == b.v_structures())
}
