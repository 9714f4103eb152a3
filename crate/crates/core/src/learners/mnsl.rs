use super::{for_each_small_subset, LearnResultMn, SolverOptions};
use crate::error::{Error, Result};
use crate::graph::{UndirectedGraph, VertexSet};
use crate::identifiability::{MarkovCatalog, MAX_ENUM_VERTICES};
use crate::table::{query_index, table_of_markov, AnswerTable, QueryKey};

/// Edge `{u, v}` iff the table reports `u`, `v` dependent given all other
/// vertices.
pub fn initial_graph(t: &AnswerTable) -> UndirectedGraph {
    let n = t.n();
    let mut g = UndirectedGraph::empty(n).expect("table sizes are within graph limits");
    for u in 0..n {
        for v in u + 1..n {
            let q = QueryKey {
                u,
                v,
                cond: VertexSet::full(n).without(u).without(v),
            };
            if t.get(query_index(n, &q).unwrap()) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

pub fn solve_mnsl(t: &AnswerTable, k: usize) -> Result<LearnResultMn> {
    solve_mnsl_with(t, k, &SolverOptions::default())
}

/// Every graph within table distance `k` of `t` disagrees with `t` on the
/// full-conditioning query of each pair where it differs from
/// [`initial_graph`], so it lies within `k` edge toggles of that graph.
/// The search therefore scores every graph in that Hamming ball.
pub fn solve_mnsl_with(t: &AnswerTable, k: usize, opts: &SolverOptions) -> Result<LearnResultMn> {
    let n = t.n();
    let base = initial_graph(t);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut found = Vec::new();
    let mut failure = None;
    for_each_small_subset(pairs.len(), k, &mut |toggles| {
        if failure.is_some() {
            return;
        }
        let mut g = base.clone();
        for &i in toggles {
            let (u, v) = pairs[i];
            let present = g.has_edge(u, v);
            g.set_edge(u, v, !present);
        }
        match table_of_markov(&g).and_then(|c| c.distance_within(t, k)) {
            Ok(Some(d)) => found.push((g, d)),
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(LearnResultMn::classify(found, opts))
}

/// Scores every undirected graph on `n <= 6` vertices.
pub fn brute_force_mnsl(t: &AnswerTable, k: usize) -> Result<LearnResultMn> {
    if t.n() > MAX_ENUM_VERTICES {
        return Err(Error::TooManyVertices {
            n: t.n(),
            max: MAX_ENUM_VERTICES,
        });
    }
    let cat = MarkovCatalog::shared(t.n())?;
    let found = cat
        .distances_to(t)?
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d <= k)
        .map(|(i, d)| (cat.graph(i), d))
        .collect();
    Ok(LearnResultMn::classify(found, &SolverOptions::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_chain_undirected;
    use crate::learners::Status;
    use crate::table::{apply_flips, query_count};

    #[test]
    fn initial_graph_examples() {
        let chain = make_chain_undirected(4).unwrap();
        assert_eq!(initial_graph(&table_of_markov(&chain).unwrap()), chain);
        assert_eq!(
            initial_graph(&AnswerTable::ones(5).unwrap()),
            UndirectedGraph::complete(5).unwrap()
        );
        assert_eq!(initial_graph(&AnswerTable::zeros(5).unwrap()).edge_count(), 0);
    }

    #[test]
    fn faithful_tables_recovered_with_k_zero() {
        for g in crate::identifiability::enumerate_undirected(4).unwrap() {
            let t = table_of_markov(&g).unwrap();
            assert_eq!(
                solve_mnsl(&t, 0).unwrap(),
                LearnResultMn::Unique { graph: g, distance: 0 }
            );
        }
    }

    #[test]
    fn chain_survives_every_single_flip() {
        let chain = make_chain_undirected(4).unwrap();
        let t = table_of_markov(&chain).unwrap();
        for i in 0..query_count(4) {
            let noisy = apply_flips(&t, &[i]).unwrap();
            match solve_mnsl(&noisy, 1).unwrap() {
                LearnResultMn::Unique { graph, distance } => {
                    assert_eq!(graph, chain);
                    assert_eq!(distance, 1);
                }
                other => panic!("flip {i}: {other:?}"),
            }
        }
    }

    #[test]
    fn complete_graph_is_ambiguous_under_one_error() {
        let k4 = UndirectedGraph::complete(4).unwrap();
        let t = table_of_markov(&k4).unwrap();
        let critical = query_index(4, &QueryKey::full_conditioning(4, 0, 3).unwrap()).unwrap();
        let noisy = apply_flips(&t, &[critical]).unwrap();
        let r = solve_mnsl(&noisy, 1).unwrap();
        assert_eq!(r.status(), Status::NotUnique);
        let LearnResultMn::NotUnique { witnesses, total } = r else { unreachable!() };
        // K4, K4 minus {0, 3} (the flipped table itself), and the 4-cycle
        // obtained by also dropping {1, 2}.
        assert_eq!(total, 3);
        let minus = k4.toggled(0, 3);
        assert!(witnesses.contains(&(k4.clone(), 1)));
        assert!(witnesses.contains(&(minus.clone(), 0)));
        assert!(witnesses.contains(&(minus.toggled(1, 2), 1)));
    }

    #[test]
    fn too_many_errors_can_leave_nothing_or_everything() {
        // An all-ones table with one dependence removed from a
        // non-full-conditioning query is far from every graph at k = 0.
        let mut t = AnswerTable::ones(4).unwrap();
        t.set(0, false);
        assert_eq!(solve_mnsl(&t, 0).unwrap().status(), Status::None);
        let r = solve_mnsl(&AnswerTable::zeros(3).unwrap(), 6).unwrap();
        let LearnResultMn::NotUnique { total, .. } = r else { panic!() };
        assert_eq!(total, 8);
    }

    #[test]
    fn witness_list_is_truncated() {
        let r = solve_mnsl_with(&AnswerTable::zeros(3).unwrap(), 6, &SolverOptions { max_witnesses: 3 }).unwrap();
        let LearnResultMn::NotUnique { witnesses, total } = r else { panic!() };
        assert_eq!((witnesses.len(), total), (3, 8));
        assert!(brute_force_mnsl(&AnswerTable::zeros(7).unwrap(), 0).is_err());
    }
}
