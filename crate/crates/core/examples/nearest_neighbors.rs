//! Nearest neighbours, the error budget they allow, and the
//! connectivity-based lower bound.

use kident::graph::{clique_dag, complete_dag, d1, empty_dag, make_chain_undirected, max_pairwise_connectivity, UndirectedGraph};
use kident::identifiability::{kappa_identifiability_bound, max_identifiable_k, nearest_bn, nearest_mn};

fn main() -> kident::Result<()> {
    println!("Markov networks");
    for (name, g) in [
        ("chain(5)", make_chain_undirected(5)?),
        ("K5", UndirectedGraph::complete(5)?),
        ("empty(5)", UndirectedGraph::empty(5)?),
    ] {
        let r = nearest_mn(&g)?;
        println!(
            "  {name:<9} nearest {:>2}  k = {}  kappa = {}  guaranteed k >= {}",
            r.distance,
            max_identifiable_k(r.distance)?,
            max_pairwise_connectivity(&g),
            kappa_identifiability_bound(&g)
        );
    }

    println!("Bayesian networks");
    for (name, d) in [
        ("empty", empty_dag(5)?),
        ("d1", d1(5)?),
        ("complete", complete_dag(5)?),
        ("2 cliques", clique_dag(4, 2)?),
    ] {
        let r = nearest_bn(&d)?;
        println!(
            "  {name:<9} n={} nearest {}  k = {}  witness arcs {:?}",
            d.n(),
            r.distance,
            max_identifiable_k(r.distance)?,
            r.witness.arcs().collect::<Vec<_>>()
        );
    }
    Ok(())
}
