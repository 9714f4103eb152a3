//! Recover an undirected graph from an oracle that lies a few times.

use kident::graph::make_chain_undirected;
use kident::identifiability::{max_identifiable_k, nearest_mn};
use kident::learners::{solve_mnsl, LearnResultMn};
use kident::oracle::{make_oracle, ErrorModel};
use kident::table::table_of_markov;

fn main() -> kident::Result<()> {
    let hidden = make_chain_undirected(6)?;
    let k = max_identifiable_k(nearest_mn(&hidden)?.distance)?;
    println!("hidden: 6-vertex chain, identifiable up to k = {k}");

    for seed in 0..3 {
        let oracle = make_oracle(table_of_markov(&hidden)?, ErrorModel::RandomFlips { count: k, seed }, k)?;
        println!("seed {seed}: wrong answers at {:?}", oracle.flipped_indices());
        match solve_mnsl(&oracle.full_table(), k)? {
            LearnResultMn::Unique { graph, distance } => {
                println!("  unique graph at distance {distance}, correct: {}", graph == hidden)
            }
            other => println!("  {:?}", other.status()),
        }
    }
    Ok(())
}
