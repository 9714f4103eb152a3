//! Structure learning from a possibly corrupted answer table.
//!
//! Both problems ask for the unique graph (or equivalence class) within
//! table distance `k` of the observed answers, or a report that none or
//! several exist.

mod bnsl;
mod mnsl;
mod pc;

pub use bnsl::{brute_force_bnsl, solve_bnsl, solve_bnsl_with};
pub use mnsl::{brute_force_mnsl, initial_graph, solve_mnsl, solve_mnsl_with};
pub use pc::{cpdag_to_dag, pc_learn, pc_orient, pc_skeleton, Cpdag, SepSets};

use serde::Serialize;

use crate::graph::{Dag, MecKey, UndirectedGraph};

/// Witness lists reported with [`LearnResultMn::NotUnique`] and
/// [`LearnResultBn::NotUnique`] are truncated to this many entries by
/// default.
pub const DEFAULT_MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub max_witnesses: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_witnesses: DEFAULT_MAX_WITNESSES,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unique,
    None,
    NotUnique,
}

impl Status {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Unique => 0,
            Status::None => 2,
            Status::NotUnique => 3,
        }
    }
}

/// Outcome of Markov network structure learning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnResultMn {
    Unique { graph: UndirectedGraph, distance: usize },
    NoneWithin,
    /// Graphs within distance `k`, sorted by edge code and truncated;
    /// `total` counts all of them.
    NotUnique {
        witnesses: Vec<(UndirectedGraph, usize)>,
        total: usize,
    },
}

/// Outcome of Bayesian network structure learning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnResultBn {
    /// Any member of the unique class within distance `k`.
    Unique { dag: Dag, distance: usize },
    NoneWithin,
    /// Classes within distance `k`, sorted by key and truncated; `total`
    /// counts all of them.
    NotUnique {
        witnesses: Vec<(MecKey, usize)>,
        total: usize,
    },
}

impl LearnResultMn {
    pub fn status(&self) -> Status {
        match self {
            LearnResultMn::Unique { .. } => Status::Unique,
            LearnResultMn::NoneWithin => Status::None,
            LearnResultMn::NotUnique { .. } => Status::NotUnique,
        }
    }

    fn classify(mut found: Vec<(UndirectedGraph, usize)>, opts: &SolverOptions) -> Self {
        found.sort_by_key(|(g, _)| g.edge_code());
        match found.len() {
            0 => LearnResultMn::NoneWithin,
            1 => {
                let (graph, distance) = found.pop().unwrap();
                LearnResultMn::Unique { graph, distance }
            }
            total => {
                found.truncate(opts.max_witnesses);
                LearnResultMn::NotUnique {
                    witnesses: found,
                    total,
                }
            }
        }
    }
}

impl LearnResultBn {
    pub fn status(&self) -> Status {
        match self {
            LearnResultBn::Unique { .. } => Status::Unique,
            LearnResultBn::NoneWithin => Status::None,
            LearnResultBn::NotUnique { .. } => Status::NotUnique,
        }
    }

    /// Key of the unique class, if any.
    pub fn unique_key(&self) -> Option<MecKey> {
        match self {
            LearnResultBn::Unique { dag, .. } => Some(dag.mec_key()),
            _ => None,
        }
    }

    fn classify(mut found: Vec<(MecKey, Dag, usize)>, opts: &SolverOptions) -> Self {
        found.sort_by(|a, b| a.0.cmp(&b.0));
        match found.len() {
            0 => LearnResultBn::NoneWithin,
            1 => {
                let (_, dag, distance) = found.pop().unwrap();
                LearnResultBn::Unique { dag, distance }
            }
            total => LearnResultBn::NotUnique {
                witnesses: found
                    .into_iter()
                    .take(opts.max_witnesses)
                    .map(|(k, _, d)| (k, d))
                    .collect(),
                total,
            },
        }
    }
}

/// Calls `f` with every subset of `0..len` of size at most `max`, in order
/// of size and then lexicographically.
pub(crate) fn for_each_small_subset(len: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, len: usize, want: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == want {
            f(cur);
            return;
        }
        let need = want - cur.len();
        for i in start..=len.saturating_sub(need) {
            if i >= len {
                break;
            }
            cur.push(i);
            rec(i + 1, len, want, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(max);
    for size in 0..=max.min(len) {
        rec(0, len, size, &mut cur, f);
    }
}
