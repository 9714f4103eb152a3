//! Undirected separation and d-separation on a few small graphs.

use kident::graph::{d1, make_chain_undirected, VertexSet};
use kident::separation::{d_separates, separates};

fn main() -> kident::Result<()> {
    let chain = make_chain_undirected(4)?;
    println!("chain 0-1-2-3");
    for cond in [VertexSet::empty(), VertexSet::singleton(1), VertexSet::singleton(2)] {
        println!("  0 _||_ 3 | {cond:?}: {}", separates(&chain, 0, 3, cond)?);
    }

    // 0 -> 2 <- 1, then 2 -> 3 -> 4
    let d = d1(5)?;
    println!("collider 0 -> 2 <- 1 followed by a path");
    for cond in [VertexSet::empty(), VertexSet::singleton(2), VertexSet::singleton(4)] {
        println!("  0 _||_ 1 | {cond:?}: {}", d_separates(&d, 0, 1, cond)?);
    }
    Ok(())
}
