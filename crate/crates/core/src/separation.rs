//! Separation in undirected graphs and d-separation in DAGs.
//!
//! d-separation is decided on the moral graph of the ancestral subgraph of
//! `{u, v} ∪ S`. The [`reference`] module carries an independent
//! path-enumeration implementation of the blocking rules for cross-checks.

use crate::error::{Error, Result};
use crate::graph::{Dag, UndirectedGraph, VertexSet};

pub(crate) fn check_query(n: usize, u: usize, v: usize, cond: VertexSet) -> Result<()> {
    if u >= n || v >= n {
        return Err(Error::InvalidQuery(format!(
            "vertex pair ({u}, {v}) out of range for n = {n}"
        )));
    }
    if u == v {
        return Err(Error::InvalidQuery(format!("u and v are both {u}")));
    }
    if !cond.fits(n) || cond.contains(u) || cond.contains(v) {
        return Err(Error::InvalidQuery(format!(
            "conditioning set {cond:?} must avoid {u}, {v} and lie in 0..{n}"
        )));
    }
    Ok(())
}

/// True iff every `u`-`v` path in `g` has an internal vertex in `cond`.
pub fn separates(g: &UndirectedGraph, u: usize, v: usize, cond: VertexSet) -> Result<bool> {
    check_query(g.n(), u, v, cond)?;
    Ok(separates_unchecked(g, u, v, cond))
}

#[inline]
pub(crate) fn separates_unchecked(g: &UndirectedGraph, u: usize, v: usize, cond: VertexSet) -> bool {
    !g.reachable_avoiding(u, cond).contains(v)
}

/// Vertices reachable from `v` along directed paths, excluding `v`.
pub fn descendants(d: &Dag, v: usize) -> Result<VertexSet> {
    if v >= d.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: d.n() });
    }
    Ok(d.descendants_of(VertexSet::singleton(v)).without(v))
}

/// True iff `cond` d-separates `u` and `v` in `d`.
pub fn d_separates(d: &Dag, u: usize, v: usize, cond: VertexSet) -> Result<bool> {
    check_query(d.n(), u, v, cond)?;
    Ok(d_separates_unchecked(d, u, v, cond))
}

#[inline]
pub(crate) fn d_separates_unchecked(d: &Dag, u: usize, v: usize, cond: VertexSet) -> bool {
    let keep = d.ancestral_closure(cond.with(u).with(v));
    let moral = d.moral_graph_within(keep);
    separates_unchecked(&moral, u, v, cond)
}

/// Closed-form d-connection for chain DAGs: `i` and `j` are d-connected
/// given `z` iff `z` restricted to the vertices strictly between them on the
/// path equals the colliders among those vertices.
pub fn chain_d_connected(d: &Dag, i: usize, j: usize, z: VertexSet) -> Result<bool> {
    check_query(d.n(), i, j, z)?;
    let order = d.skeleton().chain_order().ok_or(Error::NotChain)?;
    let mut position = vec![0; d.n()];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let (lo, hi) = (position[i].min(position[j]), position[i].max(position[j]));
    let between: VertexSet = order[lo + 1..hi].iter().copied().collect();
    let colliders = d.colliders() & between;
    Ok(z & between == colliders)
}

/// Path-enumeration implementations used as independent oracles. Cost grows
/// with the number of simple paths, so inputs are limited to 10 vertices.
pub mod reference {
    use super::*;

    pub const MAX_VERTICES: usize = 10;

    fn check_size(n: usize) -> Result<()> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(())
    }

    /// Every simple `u`-`v` path in the skeleton of `d`, as vertex lists.
    fn simple_paths(d: &Dag, u: usize, v: usize) -> Vec<Vec<usize>> {
        let skel = d.skeleton();
        let mut out = Vec::new();
        let mut path = vec![u];
        fn walk(
            skel: &UndirectedGraph,
            target: usize,
            path: &mut Vec<usize>,
            visited: VertexSet,
            out: &mut Vec<Vec<usize>>,
        ) {
            let cur = *path.last().unwrap();
            for w in skel.neighbors(cur) {
                if visited.contains(w) {
                    continue;
                }
                path.push(w);
                if w == target {
                    out.push(path.clone());
                } else {
                    walk(skel, target, path, visited.with(w), out);
                }
                path.pop();
            }
        }
        walk(&skel, v, &mut path, VertexSet::singleton(u), &mut out);
        out
    }

    /// d-separation by checking every skeleton path against the blocking
    /// rules: a non-collider in `cond`, or a collider with neither itself
    /// nor any descendant in `cond`.
    pub fn d_separates_by_paths(d: &Dag, u: usize, v: usize, cond: VertexSet) -> Result<bool> {
        check_size(d.n())?;
        check_query(d.n(), u, v, cond)?;
        for path in simple_paths(d, u, v) {
            let blocked = (1..path.len() - 1).any(|i| {
                let (prev, mid, next) = (path[i - 1], path[i], path[i + 1]);
                let collider = d.has_arc(prev, mid) && d.has_arc(next, mid);
                if collider {
                    let below = d.descendants_of(VertexSet::singleton(mid)).with(mid);
                    below.is_disjoint(cond)
                } else {
                    cond.contains(mid)
                }
            });
            if !blocked {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Undirected separation by checking that every simple path has an
    /// internal vertex in `cond`.
    pub fn separates_by_paths(g: &UndirectedGraph, u: usize, v: usize, cond: VertexSet) -> Result<bool> {
        check_size(g.n())?;
        check_query(g.n(), u, v, cond)?;
        let mut stack = vec![(u, VertexSet::singleton(u))];
        while let Some((cur, visited)) = stack.pop() {
            for w in g.neighbors(cur) {
                if w == v {
                    return Ok(false);
                }
                if !visited.contains(w) && !cond.contains(w) {
                    stack.push((w, visited.with(w)));
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::reference::{d_separates_by_paths, separates_by_paths};
    use super::*;
    use crate::graph::{d1, empty_dag, make_chain_dag, make_chain_undirected};
    use proptest::prelude::*;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn undirected_examples() {
        let g = make_chain_undirected(3).unwrap();
        assert!(separates(&g, 0, 2, set(&[1])).unwrap());
        assert!(!separates(&g, 0, 2, set(&[])).unwrap());
        let k = UndirectedGraph::complete(5).unwrap();
        for s in set(&[2, 3, 4]).subsets() {
            assert!(!separates(&k, 0, 1, s).unwrap());
        }
    }

    #[test]
    fn invalid_queries_rejected() {
        let g = make_chain_undirected(3).unwrap();
        assert!(separates(&g, 1, 1, set(&[])).is_err());
        assert!(separates(&g, 0, 2, set(&[0])).is_err());
        assert!(separates(&g, 0, 3, set(&[])).is_err());
        assert!(separates(&g, 0, 2, set(&[5])).is_err());
        let d = empty_dag(3).unwrap();
        assert!(d_separates(&d, 0, 1, set(&[1])).is_err());
        assert!(descendants(&d, 3).is_err());
    }

    #[test]
    fn descendants_examples() {
        let chain = Dag::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(descendants(&chain, 0).unwrap(), set(&[1, 2]));
        assert!(descendants(&empty_dag(4).unwrap(), 2).unwrap().is_empty());
        let collider = Dag::from_arcs(3, &[(0, 1), (2, 1)]).unwrap();
        assert!(descendants(&collider, 1).unwrap().is_empty());
    }

    #[test]
    fn d_separation_examples() {
        let collider = Dag::from_arcs(3, &[(0, 1), (2, 1)]).unwrap();
        assert!(d_separates(&collider, 0, 2, set(&[])).unwrap());
        assert!(!d_separates(&collider, 0, 2, set(&[1])).unwrap());
        let chain = Dag::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(d_separates(&chain, 0, 2, set(&[1])).unwrap());
        assert!(d_separates(&d1(4).unwrap(), 0, 1, set(&[])).unwrap());
        // Conditioning on a descendant of the collider opens the path.
        let d = Dag::from_arcs(4, &[(0, 1), (2, 1), (1, 3)]).unwrap();
        assert!(!d_separates(&d, 0, 2, set(&[3])).unwrap());
    }

    #[test]
    fn chain_closed_form_examples() {
        let collider = make_chain_dag(&[0, 1, 2], &[true, false]).unwrap();
        assert!(chain_d_connected(&collider, 0, 2, set(&[1])).unwrap());
        assert!(!chain_d_connected(&collider, 0, 2, set(&[])).unwrap());
        let fwd = make_chain_dag(&[0, 1, 2, 3], &[true, true, true]).unwrap();
        assert!(chain_d_connected(&fwd, 0, 3, set(&[])).unwrap());
        let not_chain = Dag::from_arcs(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(matches!(
            chain_d_connected(&not_chain, 1, 2, set(&[])),
            Err(Error::NotChain)
        ));
    }

    #[test]
    fn moral_ancestral_matches_path_rules_on_all_small_dags() {
        for n in 2..=4 {
            for d in crate::identifiability::enumerate_dags(n).unwrap() {
                for u in 0..n {
                    for v in u + 1..n {
                        let rest = VertexSet::full(n).without(u).without(v);
                        for s in rest.subsets() {
                            assert_eq!(
                                d_separates(&d, u, v, s).unwrap(),
                                d_separates_by_paths(&d, u, v, s).unwrap(),
                                "{d:?} ({u},{v}|{s:?})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reference_rejects_large_graphs() {
        let d = empty_dag(11).unwrap();
        assert!(d_separates_by_paths(&d, 0, 1, VertexSet::empty()).is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = UndirectedGraph> {
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), crate::graph::pair_count(n)).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[i] {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                UndirectedGraph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn separation_is_monotone_in_the_conditioning_set(
            g in arb_graph(8),
            seed in any::<u64>(),
        ) {
            let n = g.n();
            let (u, v) = (0, n - 1);
            let rest = VertexSet::full(n).without(u).without(v);
            let small = VertexSet::from_bits(seed) & rest;
            let big = small | (VertexSet::from_bits(seed.rotate_left(17)) & rest);
            if separates(&g, u, v, small).unwrap() {
                prop_assert!(separates(&g, u, v, big).unwrap());
            }
        }

        #[test]
        fn reachability_matches_path_search(g in arb_graph(7), seed in any::<u64>()) {
            let n = g.n();
            let rest = VertexSet::full(n).without(0).without(1);
            let s = VertexSet::from_bits(seed) & rest;
            prop_assert_eq!(
                separates(&g, 0, 1, s).unwrap(),
                separates_by_paths(&g, 0, 1, s).unwrap()
            );
        }

        #[test]
        fn adjacent_pairs_are_never_separated(g in arb_graph(7), seed in any::<u64>()) {
            for (u, v) in g.edges() {
                let rest = VertexSet::full(g.n()).without(u).without(v);
                prop_assert!(!separates(&g, u, v, VertexSet::from_bits(seed) & rest).unwrap());
            }
        }
    }

    #[test]
    fn adjacent_pairs_never_d_separated() {
        for d in crate::identifiability::enumerate_dags(4).unwrap() {
            for (u, v) in d.arcs() {
                let rest = VertexSet::full(4).without(u).without(v);
                for s in rest.subsets() {
                    assert!(!d_separates(&d, u, v, s).unwrap());
                }
            }
        }
    }
}
