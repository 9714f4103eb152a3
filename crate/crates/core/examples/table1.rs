//! Nearest-neighbour distance statistics over every Markov equivalence
//! class on five vertices.
//!
//! ```text
//! cargo run --release --example table1
//! ```

use kident::identifiability::mec_distance_stats;

fn main() -> kident::Result<()> {
    let rows = mec_distance_stats(5)?;
    println!("{:>5} {:>6} {:>4} {:>5} {:>4}", "edges", "MECs", "min", "mean", "max");
    for r in &rows {
        println!("{:>5} {:>6} {:>4} {:>5} {:>4}", r.edges, r.mecs, r.min, r.mean_display(), r.max);
    }
    println!("total {}", rows.iter().map(|r| r.mecs).sum::<usize>());
    Ok(())
}
