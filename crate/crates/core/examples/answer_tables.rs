//! Answer tables, their canonical layout, and the distance between them.

use kident::graph::{d1, d1_prime, make_chain_undirected};
use kident::io::{read_table_bin, write_table_bin, write_table_csv};
use kident::table::{query_at, table_distance, table_of_bayes, table_of_markov};

fn main() -> kident::Result<()> {
    let chain = table_of_markov(&make_chain_undirected(4)?)?;
    println!("4-vertex chain: {} queries, {} dependent", chain.len(), chain.count_ones());
    for i in [0, 1, 4, 23] {
        println!("  index {i:>2} = {} -> {}", query_at(4, i)?, chain.get(i) as u8);
    }

    let a = table_of_bayes(&d1(5)?)?;
    let b = table_of_bayes(&d1_prime(5)?)?;
    let diff = a.differing_indices(&b)?;
    println!("d1 vs d1': distance {}, differing at {:?}", table_distance(&a, &b)?, diff);

    let mut csv = Vec::new();
    write_table_csv(&mut csv, &chain)?;
    println!("first CSV rows:");
    for line in String::from_utf8_lossy(&csv).lines().take(3) {
        println!("  {line}");
    }
    let mut bin = Vec::new();
    write_table_bin(&mut bin, &chain)?;
    assert_eq!(read_table_bin(&bin[..])?, chain);
    println!("binary form: {} bytes", bin.len());
    Ok(())
}
