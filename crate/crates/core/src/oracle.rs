//! Simulated unreliable CI oracle. Errors are committed up front as a fixed
//! set of flipped table entries, so repeated queries get repeated answers.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{apply_flips, query_index, AnswerTable, QueryKey};

/// How the oracle's wrong answers are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ErrorModel {
    None,
    /// Flip exactly these canonical table indices.
    #[serde(rename = "explicit")]
    ExplicitFlips { flips: Vec<usize> },
    /// Flip `count` distinct indices drawn uniformly with a seeded RNG.
    #[serde(rename = "random")]
    RandomFlips { count: usize, seed: u64 },
}

impl ErrorModel {
    fn flip_count(&self) -> usize {
        match self {
            ErrorModel::None => 0,
            ErrorModel::ExplicitFlips { flips } => flips.len(),
            ErrorModel::RandomFlips { count, .. } => *count,
        }
    }

    fn select(&self, len: usize) -> Result<Vec<usize>> {
        Ok(match self {
            ErrorModel::None => Vec::new(),
            ErrorModel::ExplicitFlips { flips } => flips.clone(),
            ErrorModel::RandomFlips { count, seed } => {
                if *count > len {
                    return Err(Error::InvalidArgument(format!(
                        "cannot flip {count} of {len} answers"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut picked = sample(&mut rng, len, *count).into_vec();
                picked.sort_unstable();
                picked
            }
        })
    }
}

/// An oracle with a truth table, at most `k` committed errors and a log of
/// every query served.
#[derive(Clone, Debug)]
pub struct OracleInstance {
    truth: AnswerTable,
    effective: AnswerTable,
    flips: Vec<usize>,
    k: usize,
    log: Vec<(QueryKey, bool)>,
}

pub fn make_oracle(truth: AnswerTable, model: ErrorModel, k: usize) -> Result<OracleInstance> {
    let flips_requested = model.flip_count();
    if flips_requested > k {
        return Err(Error::ErrorBudgetExceeded {
            flips: flips_requested,
            k,
        });
    }
    let flips = model.select(truth.len())?;
    let effective = apply_flips(&truth, &flips)?;
    Ok(OracleInstance {
        truth,
        effective,
        flips,
        k,
        log: Vec::new(),
    })
}

impl OracleInstance {
    /// Answers `q` (`true` = dependent) and records it in the log.
    pub fn query(&mut self, q: &QueryKey) -> Result<bool> {
        let idx = query_index(self.truth.n(), q)?;
        let answer = self.effective.get(idx);
        self.log.push((*q, answer));
        Ok(answer)
    }

    /// The table every query is answered from.
    pub fn full_table(&self) -> AnswerTable {
        self.effective.clone()
    }

    pub fn truth(&self) -> &AnswerTable {
        &self.truth
    }

    /// Canonical indices answered incorrectly, ascending.
    pub fn flipped_indices(&self) -> &[usize] {
        &self.flips
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.truth.n()
    }

    pub fn log(&self) -> &[(QueryKey, bool)] {
        &self.log
    }

    pub fn queries_served(&self) -> usize {
        self.log.len()
    }
}
