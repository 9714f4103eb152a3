//! Is some nearest neighbour always one edge edit away?

use kident::identifiability::{single_edge_neighbor_report, Mode};

fn main() -> kident::Result<()> {
    for (mode, max_n) in [(Mode::Mn, 5), (Mode::Bn, 5)] {
        for n in 3..=max_n {
            let r = single_edge_neighbor_report(n, mode)?;
            println!("{mode:?} n={n}: {}/{} satisfied", r.satisfied, r.checked);
            for c in r.counterexamples.iter().take(3) {
                println!("  counterexample {:?} (nearest {})", c.source, c.nearest_distance);
            }
        }
    }
    Ok(())
}
