//! PC on a faithful table, then the robust solver on corrupted ones.

use kident::graph::{d1, empty_dag};
use kident::io::mec_json;
use kident::learners::{pc_orient, pc_skeleton, solve_bnsl, LearnResultBn};
use kident::table::{apply_flips, table_of_bayes};

fn main() -> kident::Result<()> {
    let d = d1(5)?;
    let t = table_of_bayes(&d)?;
    let (skel, seps) = pc_skeleton(&t);
    let cpdag = pc_orient(&skel, &seps)?;
    println!("PC on d1(5): arcs {:?}, undirected {:?}",
        cpdag.arcs().collect::<Vec<_>>(),
        cpdag.undirected_edges().collect::<Vec<_>>());

    // One wrong answer on (0, 1 | {}) makes d1 indistinguishable from d1 + {0 -> 1}.
    let r = solve_bnsl(&apply_flips(&t, &[0])?, 1)?;
    if let LearnResultBn::NotUnique { witnesses, total } = &r {
        println!("d1 with its critical answer flipped, k = 1: {total} classes");
        for (key, dist) in witnesses {
            println!("  distance {dist}: {}", mec_json(key));
        }
    }

    let empty = table_of_bayes(&empty_dag(5)?)?;
    let noisy = apply_flips(&empty, &[3, 30, 61])?;
    let r = solve_bnsl(&noisy, 3)?;
    println!("empty graph with 3 wrong answers, k = 3: {:?}, arcs {:?}",
        r.status(),
        match &r { LearnResultBn::Unique { dag, .. } => dag.arc_count(), _ => usize::MAX });
    Ok(())
}
