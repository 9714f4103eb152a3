//! Constructors for chains and the small graph families used throughout
//! the identifiability analysis.

use super::{check_vertex_count, Dag, UndirectedGraph, VertexSet};
use crate::error::{Error, Result};

/// Path `0 - 1 - .. - (n-1)`.
pub fn make_chain_undirected(n: usize) -> Result<UndirectedGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("a chain needs at least one vertex".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    UndirectedGraph::from_edges(n, &edges)
}

/// Orients the path `order[0] - order[1] - ..`: direction bit `i` set means
/// `order[i] -> order[i+1]`, clear means the reverse.
pub fn make_chain_dag(order: &[usize], directions: &[bool]) -> Result<Dag> {
    let n = order.len();
    check_vertex_count(n)?;
    let seen: VertexSet = order.iter().copied().filter(|&v| v < n).collect();
    if n == 0 || seen.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{order:?} is not a permutation of 0..{n}"
        )));
    }
    if directions.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "expected {} direction bits, got {}",
            n - 1,
            directions.len()
        )));
    }
    let mut children = vec![0u64; n];
    for (i, &fwd) in directions.iter().enumerate() {
        let (a, b) = (order[i], order[i + 1]);
        let (tail, head) = if fwd { (a, b) } else { (b, a) };
        children[tail] |= 1 << head;
    }
    Ok(Dag::from_children_unchecked(children))
}

fn require_at_least_three(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "this construction needs n >= 3, got {n}"
        )));
    }
    check_vertex_count(n)
}

pub fn empty_dag(n: usize) -> Result<Dag> {
    Dag::empty(n)
}

/// Arcs `0 -> 2`, `1 -> 2`, then the path `2 -> 3 -> .. -> n-1`.
pub fn d1(n: usize) -> Result<Dag> {
    require_at_least_three(n)?;
    let mut arcs = vec![(0, 2), (1, 2)];
    arcs.extend((2..n - 1).map(|i| (i, i + 1)));
    Dag::from_arcs(n, &arcs)
}

/// [`d1`] with the extra arc `0 -> 1`; the two differ in a single
/// d-separation statement, `(0, 1 | {})`.
pub fn d1_prime(n: usize) -> Result<Dag> {
    require_at_least_three(n)?;
    let mut arcs = vec![(0, 1), (0, 2), (1, 2)];
    arcs.extend((2..n - 1).map(|i| (i, i + 1)));
    Dag::from_arcs(n, &arcs)
}

/// `r` disjoint complete DAGs of `n / r` consecutive vertices each, arcs
/// oriented from lower to higher id.
pub fn clique_dag(n: usize, r: usize) -> Result<Dag> {
    require_at_least_three(n)?;
    if r < 2 || !n.is_multiple_of(r) {
        return Err(Error::InvalidArgument(format!(
            "cliques need r >= 2 dividing n, got n={n}, r={r}"
        )));
    }
    let size = n / r;
    let mut arcs = Vec::new();
    for block in 0..r {
        let base = block * size;
        for a in base..base + size {
            for b in a + 1..base + size {
                arcs.push((a, b));
            }
        }
    }
    Dag::from_arcs(n, &arcs)
}

/// Complete DAG with every arc oriented from lower to higher id.
pub fn complete_dag(n: usize) -> Result<Dag> {
    check_vertex_count(n)?;
    let full = VertexSet::full(n).bits();
    let children = (0..n).map(|v| full & !((2u64 << v) - 1)).collect();
    Ok(Dag::from_children_unchecked(children))
}

/// The two-graph promise used by the query lower bound: in the first graph
/// vertices `0` and `1` are both joined to every other vertex but not to
/// each other; the second graph adds the edge `{0, 1}`.
pub fn hub_pair(n: usize) -> Result<(UndirectedGraph, UndirectedGraph)> {
    require_at_least_three(n)?;
    let mut edges = Vec::new();
    for w in 2..n {
        edges.push((0, w));
        edges.push((1, w));
    }
    let g1 = UndirectedGraph::from_edges(n, &edges)?;
    let g2 = g1.toggled(0, 1);
    Ok((g1, g2))
}

/// Named members of the graph zoo.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    EmptyDag,
    D1,
    D1Prime,
    Cliques(usize),
    CompleteDag,
    HubG1,
    HubG2,
}

/// Either kind of graph, as returned by [`named_graph`] and read from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Graph {
    Undirected(UndirectedGraph),
    Directed(Dag),
}

impl Graph {
    pub fn n(&self) -> usize {
        match self {
            Graph::Undirected(g) => g.n(),
            Graph::Directed(d) => d.n(),
        }
    }
}

pub fn named_graph(kind: NamedGraph, n: usize) -> Result<Graph> {
    require_at_least_three(n)?;
    Ok(match kind {
        NamedGraph::EmptyDag => Graph::Directed(empty_dag(n)?),
        NamedGraph::D1 => Graph::Directed(d1(n)?),
        NamedGraph::D1Prime => Graph::Directed(d1_prime(n)?),
        NamedGraph::Cliques(r) => Graph::Directed(clique_dag(n, r)?),
        NamedGraph::CompleteDag => Graph::Directed(complete_dag(n)?),
        NamedGraph::HubG1 => Graph::Undirected(hub_pair(n)?.0),
        NamedGraph::HubG2 => Graph::Undirected(hub_pair(n)?.1),
    })
}
