//! Maximum pairwise connectivity: for each vertex pair, the largest number
//! of internally vertex-disjoint connecting paths that each have at least
//! one internal vertex.

use std::collections::VecDeque;

use super::{UndirectedGraph, VertexSet};

/// Number of internally vertex-disjoint `u`-`v` paths with at least one
/// internal vertex. The direct edge `{u, v}`, if present, is ignored.
///
/// Unit-capacity max flow on the vertex-split graph: every vertex `w` other
/// than `u`, `v` becomes `w_in -> w_out` with capacity one.
pub fn pairwise_connectivity(g: &UndirectedGraph, u: usize, v: usize) -> usize {
    let n = g.n();
    assert!(u < n && v < n && u != v, "invalid vertex pair ({u}, {v})");
    let node_in = |w: usize| 2 * w;
    let node_out = |w: usize| 2 * w + 1;
    let size = 2 * n;
    let mut cap = vec![0i8; size * size];
    for w in 0..n {
        if w != u && w != v {
            cap[node_in(w) * size + node_out(w)] = 1;
        }
    }
    for (a, b) in g.edges() {
        if (a == u && b == v) || (a == v && b == u) {
            continue;
        }
        cap[node_out(a) * size + node_in(b)] = 1;
        cap[node_out(b) * size + node_in(a)] = 1;
    }
    let source = node_out(u);
    let sink = node_in(v);
    let mut flow = 0;
    let mut pred = vec![usize::MAX; size];
    loop {
        pred.fill(usize::MAX);
        pred[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for y in 0..size {
                if pred[y] == usize::MAX && cap[x * size + y] > 0 {
                    pred[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if pred[sink] == usize::MAX {
            return flow;
        }
        let mut y = sink;
        while y != source {
            let x = pred[y];
            cap[x * size + y] -= 1;
            cap[y * size + x] += 1;
            y = x;
        }
        flow += 1;
    }
}

/// `max` of [`pairwise_connectivity`] over all vertex pairs; 0 for graphs
/// with fewer than two vertices.
pub fn max_pairwise_connectivity(g: &UndirectedGraph) -> usize {
    let n = g.n();
    let mut best = 0;
    for u in 0..n {
        for v in u + 1..n {
            // Each path leaves u through a distinct neighbour other than v.
            let bound = (g.neighbors(u) - VertexSet::singleton(v)).len();
            if bound <= best {
                continue;
            }
            best = best.max(pairwise_connectivity(g, u, v));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_chain_undirected;

    /// Packs internally-disjoint paths by exhaustive search over all simple
    /// paths with at least one internal vertex.
    fn brute_force_pair(g: &UndirectedGraph, u: usize, v: usize) -> usize {
        let mut interiors = Vec::new();
        fn walk(
            g: &UndirectedGraph,
            cur: usize,
            target: usize,
            visited: VertexSet,
            interior: VertexSet,
            out: &mut Vec<VertexSet>,
        ) {
            for w in g.neighbors(cur) {
                if visited.contains(w) {
                    continue;
                }
                if w == target {
                    if !interior.is_empty() {
                        out.push(interior);
                    }
                    continue;
                }
                walk(g, w, target, visited.with(w), interior.with(w), out);
            }
        }
        walk(g, u, v, VertexSet::singleton(u), VertexSet::empty(), &mut interiors);
        interiors.sort();
        interiors.dedup();
        fn pack(paths: &[VertexSet], used: VertexSet) -> usize {
            let mut best = 0;
            for (i, p) in paths.iter().enumerate() {
                if p.is_disjoint(used) {
                    best = best.max(1 + pack(&paths[i + 1..], used | *p));
                }
            }
            best
        }
        pack(&interiors, VertexSet::empty())
    }

    #[test]
    fn known_values() {
        for n in 3..=8 {
            assert_eq!(max_pairwise_connectivity(&make_chain_undirected(n).unwrap()), 1);
            assert_eq!(
                max_pairwise_connectivity(&UndirectedGraph::complete(n).unwrap()),
                n - 2
            );
            assert_eq!(max_pairwise_connectivity(&UndirectedGraph::empty(n).unwrap()), 0);
        }
        assert_eq!(max_pairwise_connectivity(&UndirectedGraph::empty(1).unwrap()), 0);
    }

    #[test]
    fn direct_edge_is_not_a_qualifying_path() {
        let g = UndirectedGraph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(pairwise_connectivity(&g, 0, 1), 0);
        let triangle = UndirectedGraph::complete(3).unwrap();
        assert_eq!(pairwise_connectivity(&triangle, 0, 1), 1);
    }

    #[test]
    fn flow_matches_path_packing_up_to_five_vertices() {
        for n in 2..=5 {
            let pairs = crate::graph::pair_count(n) as u32;
            for code in 0..1u64 << pairs {
                let g = UndirectedGraph::from_edge_code(n, code).unwrap();
                let mut brute_max = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        let flow = pairwise_connectivity(&g, u, v);
                        let brute = brute_force_pair(&g, u, v);
                        assert_eq!(flow, brute, "{g:?} pair ({u},{v})");
                        brute_max = brute_max.max(brute);
                    }
                }
                assert_eq!(max_pairwise_connectivity(&g), brute_max, "{g:?}");
            }
        }
    }
}
