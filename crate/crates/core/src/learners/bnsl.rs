use std::collections::HashSet;

use super::{for_each_small_subset, pc_learn, LearnResultBn, SolverOptions};
use crate::error::{Error, Result};
use crate::identifiability::{MecCatalog, MAX_MEC_SWEEP_VERTICES};
use crate::table::{table_of_bayes, AnswerTable};

pub fn solve_bnsl(t: &AnswerTable, k: usize) -> Result<LearnResultBn> {
    solve_bnsl_with(t, k, &SolverOptions::default())
}

/// Any table within distance `k` of `t` is `t` with at most `k` entries
/// flipped. For each such candidate, PC recovers the only class that could
/// produce it, and the candidate is kept when that class reproduces it
/// exactly. Subsets are visited by size, so each class is reported with its
/// true distance.
pub fn solve_bnsl_with(t: &AnswerTable, k: usize, opts: &SolverOptions) -> Result<LearnResultBn> {
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    let mut failure = None;
    let mut candidate = t.clone();
    for_each_small_subset(t.len(), k, &mut |flips| {
        if failure.is_some() {
            return;
        }
        for &i in flips {
            candidate.toggle(i);
        }
        // PC fails on tables no DAG produces; those candidates are skipped.
        if let Ok(dag) = pc_learn(&candidate) {
            match table_of_bayes(&dag) {
                Ok(dt) if dt == candidate => {
                    let key = dag.mec_key();
                    if seen.insert(key.clone()) {
                        found.push((key, dag, flips.len()));
                    }
                }
                Ok(_) => {}
                Err(e) => failure = Some(e),
            }
        }
        for &i in flips {
            candidate.toggle(i);
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(LearnResultBn::classify(found, opts))
}

/// Scores every equivalence class on `n <= 5` vertices.
pub fn brute_force_bnsl(t: &AnswerTable, k: usize) -> Result<LearnResultBn> {
    if t.n() > MAX_MEC_SWEEP_VERTICES {
        return Err(Error::TooManyVertices {
            n: t.n(),
            max: MAX_MEC_SWEEP_VERTICES,
        });
    }
    let cat = MecCatalog::shared(t.n())?;
    let found = cat
        .distances_to(t)?
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d <= k)
        .map(|(i, d)| (cat.key(i).clone(), cat.representative(i).clone(), d))
        .collect();
    Ok(LearnResultBn::classify(found, &SolverOptions::default()))
}
