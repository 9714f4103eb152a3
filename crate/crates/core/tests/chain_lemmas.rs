//! Exhaustive checks of the chain results beyond the acceptance sizes.

use kident::graph::make_chain_undirected;
use kident::identifiability::{chain_dags, chain_mn_nearest_closed_form, nearest_mn_all};
use kident::separation::{chain_d_connected, d_separates};
use kident::table::{all_queries, table_distance, table_of_markov};

#[test]
fn chain_d_connection_matches_d_separation_at_six_vertices() {
    for d in chain_dags(6).unwrap() {
        for q in all_queries(6).unwrap() {
            assert_ne!(
                chain_d_connected(&d, q.u, q.v, q.cond).unwrap(),
                d_separates(&d, q.u, q.v, q.cond).unwrap(),
                "{d:?} {q}"
            );
        }
    }
}

#[test]
fn closed_form_witness_is_among_nearest_neighbours() {
    for n in 3..=6 {
        let chain = make_chain_undirected(n).unwrap();
        let closed = chain_mn_nearest_closed_form(n).unwrap();
        let (best, ties) = nearest_mn_all(&chain).unwrap();
        assert_eq!(best, closed.distance);
        assert!(ties.contains(&closed.witness));
        let d = table_distance(&table_of_markov(&chain).unwrap(), &table_of_markov(&closed.witness).unwrap());
        assert_eq!(d.unwrap(), best);
    }
}
