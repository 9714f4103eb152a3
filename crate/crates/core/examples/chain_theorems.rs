//! Closed-form nearest distances for chains, checked by brute force.

use kident::graph::make_chain_undirected;
use kident::identifiability::{chain_bn_nearest_in_family, chain_dags, chain_mn_nearest_closed_form, nearest_mn, Family};

fn main() -> kident::Result<()> {
    for n in 3..=6 {
        let brute = nearest_mn(&make_chain_undirected(n)?)?;
        let closed = chain_mn_nearest_closed_form(n)?;
        println!(
            "undirected chain n={n}: brute force {}, formula {}, witness edges {:?}",
            brute.distance,
            closed.distance,
            closed.witness.edges().collect::<Vec<_>>()
        );
    }

    for n in 3..=5 {
        let dags = chain_dags(n)?;
        let family = Family::new(dags.iter().cloned())?;
        let sample = &dags[dags.len() / 2];
        let brute = family.closest(sample)?;
        let closed = chain_bn_nearest_in_family(sample)?;
        println!(
            "chain DAG n={n} ({} in family): {:?} -> closest {} (formula {}), swap gives {:?}",
            dags.len(),
            sample.arcs().collect::<Vec<_>>(),
            brute.distance,
            closed.distance,
            closed.witness.arcs().collect::<Vec<_>>()
        );
    }
    Ok(())
}
