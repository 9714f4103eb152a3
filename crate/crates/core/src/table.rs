//! Answer tables: the complete vector of conditional-independence outcomes
//! implied by a graph, one bit per query, and the Hamming distance between
//! tables.
//!
//! Queries `(u, v | S)` with `u < v` and `S ⊆ V \ {u, v}` are laid out pair
//! by pair in lexicographic `(u, v)` order. Within a pair, `S` is ranked as
//! the integer whose bit `t` stands for the `t`-th smallest vertex of
//! `V \ {u, v}`. A set bit means *dependent* (not separated).

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_count, Dag, UndirectedGraph, VertexSet};
use crate::separation::{check_query, d_separates_unchecked, separates_unchecked};

/// Largest vertex count for which full tables are materialised
/// (`C(24, 2) * 2^22` bits, about 145 MB).
pub const MAX_TABLE_VERTICES: usize = 24;

/// A single CI query `(u, v | cond)`, normalised so that `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QueryKey {
    pub u: usize,
    pub v: usize,
    pub cond: VertexSet,
}

impl QueryKey {
    /// Validates the query against `n` and orders the pair.
    pub fn new(n: usize, u: usize, v: usize, cond: VertexSet) -> Result<Self> {
        check_query(n, u, v, cond)?;
        Ok(QueryKey {
            u: u.min(v),
            v: u.max(v),
            cond,
        })
    }

    /// The query conditioning on every other vertex.
    pub fn full_conditioning(n: usize, u: usize, v: usize) -> Result<Self> {
        let cond = VertexSet::full(n).without(u).without(v);
        Self::new(n, u, v, cond)
    }
}

impl fmt::Display for QueryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {} | {:?})", self.u, self.v, self.cond)
    }
}

fn check_table_size(n: usize) -> Result<()> {
    if !(2..=MAX_TABLE_VERTICES).contains(&n) {
        return Err(Error::TooManyVertices {
            n,
            max: MAX_TABLE_VERTICES,
        });
    }
    Ok(())
}

/// Number of queries on `n` vertices, `C(n, 2) * 2^(n-2)`.
pub fn query_count(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    pair_count(n) << (n - 2)
}

/// Inverse of [`query_count`].
pub fn vertices_for_query_count(len: usize) -> Option<usize> {
    (2..=MAX_TABLE_VERTICES).find(|&n| query_count(n) == len)
}

fn pair_index(n: usize, u: usize, v: usize) -> usize {
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Squeezes bits `u` and `v` out of `cond` (`u < v`).
#[inline]
pub(crate) fn compress(cond: u64, u: usize, v: usize) -> u64 {
    let low = cond & ((1u64 << u) - 1);
    let mid = (cond >> (u + 1)) & ((1u64 << (v - u - 1)) - 1);
    let high = cond >> (v + 1);
    low | mid << u | high << (v - 1)
}

/// Inverse of [`compress`].
#[inline]
pub(crate) fn expand(rank: u64, u: usize, v: usize) -> u64 {
    let low = rank & ((1u64 << u) - 1);
    let mid = (rank >> u) & ((1u64 << (v - u - 1)) - 1);
    let high = rank >> (v - 1);
    low | mid << (u + 1) | high << (v + 1)
}

/// Canonical position of `q` in a table on `n` vertices.
pub fn query_index(n: usize, q: &QueryKey) -> Result<usize> {
    check_table_size(n)?;
    check_query(n, q.u, q.v, q.cond)?;
    let (u, v) = (q.u.min(q.v), q.u.max(q.v));
    Ok(pair_index(n, u, v) << (n - 2) | compress(q.cond.bits(), u, v) as usize)
}

/// Inverse of [`query_index`].
pub fn query_at(n: usize, index: usize) -> Result<QueryKey> {
    check_table_size(n)?;
    let len = query_count(n);
    if index >= len {
        return Err(Error::IndexOutOfRange { index, len });
    }
    let mut pair = index >> (n - 2);
    let rank = (index & ((1 << (n - 2)) - 1)) as u64;
    let mut u = 0;
    while pair >= n - 1 - u {
        pair -= n - 1 - u;
        u += 1;
    }
    let v = u + 1 + pair;
    Ok(QueryKey {
        u,
        v,
        cond: VertexSet::from_bits(expand(rank, u, v)),
    })
}

/// Every query on `n` vertices in canonical order.
pub fn all_queries(n: usize) -> Result<impl Iterator<Item = QueryKey>> {
    check_table_size(n)?;
    Ok((0..n).flat_map(move |u| {
        (u + 1..n).flat_map(move |v| {
            (0..1u64 << (n - 2)).map(move |rank| QueryKey {
                u,
                v,
                cond: VertexSet::from_bits(expand(rank, u, v)),
            })
        })
    }))
}

/// Bit vector of query outcomes in canonical order; bit = 1 means the pair
/// is dependent (not (d-)separated) given the conditioning set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnswerTable {
    n: usize,
    len: usize,
    words: Vec<u64>,
}

impl AnswerTable {
    pub fn zeros(n: usize) -> Result<Self> {
        check_table_size(n)?;
        let len = query_count(n);
        Ok(AnswerTable {
            n,
            len,
            words: vec![0; len.div_ceil(64)],
        })
    }

    pub fn ones(n: usize) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        t.words.fill(u64::MAX);
        t.clear_padding();
        Ok(t)
    }

    /// Builds from packed little-endian words; padding bits must be zero.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        if words.len() != t.words.len() {
            return Err(Error::Format(format!(
                "expected {} words for n = {n}, got {}",
                t.words.len(),
                words.len()
            )));
        }
        t.words = words;
        let before = t.words.clone();
        t.clear_padding();
        if before != t.words {
            return Err(Error::Format("padding bits beyond the table length are set".into()));
        }
        Ok(t)
    }

    fn clear_padding(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "index {index} out of range");
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "index {index} out of range");
        let mask = 1u64 << (index % 64);
        if value {
            self.words[index / 64] |= mask;
        } else {
            self.words[index / 64] &= !mask;
        }
    }

    pub fn toggle(&mut self, index: usize) {
        assert!(index < self.len, "index {index} out of range");
        self.words[index / 64] ^= 1u64 << (index % 64);
    }

    /// Outcome for a query; `true` means dependent.
    pub fn answer(&self, q: &QueryKey) -> Result<bool> {
        Ok(self.get(query_index(self.n, q)?))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices where the two tables disagree, ascending.
    pub fn differing_indices(&self, other: &AnswerTable) -> Result<Vec<usize>> {
        self.check_same_n(other)?;
        let mut out = Vec::new();
        for (i, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let mut x = a ^ b;
            while x != 0 {
                out.push(i * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        Ok(out)
    }

    fn check_same_n(&self, other: &AnswerTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Number of queries answered differently (XOR + popcount).
    pub fn distance(&self, other: &AnswerTable) -> Result<usize> {
        self.check_same_n(other)?;
        Ok(hamming(&self.words, &other.words))
    }

    /// Like [`AnswerTable::distance`] but stops counting once `limit` is
    /// exceeded; returns `None` in that case.
    pub fn distance_within(&self, other: &AnswerTable, limit: usize) -> Result<Option<usize>> {
        self.check_same_n(other)?;
        let mut acc = 0usize;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc += (a ^ b).count_ones() as usize;
            if acc > limit {
                return Ok(None);
            }
        }
        Ok(Some(acc))
    }
}

#[inline]
pub(crate) fn hamming(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

impl fmt::Debug for AnswerTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnswerTable(n={}, ", self.n)?;
        for i in 0..self.len.min(256) {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        if self.len > 256 {
            f.write_str("..")?;
        }
        write!(f, ")")
    }
}

/// Hamming distance between two answer tables.
pub fn table_distance(a: &AnswerTable, b: &AnswerTable) -> Result<usize> {
    a.distance(b)
}

/// Copy of `t` with exactly the listed entries toggled. Indices must be in
/// range and distinct.
pub fn apply_flips(t: &AnswerTable, indices: &[usize]) -> Result<AnswerTable> {
    let mut out = t.clone();
    let mut seen = std::collections::HashSet::with_capacity(indices.len());
    for &i in indices {
        if i >= t.len() {
            return Err(Error::IndexOutOfRange { index: i, len: t.len() });
        }
        if !seen.insert(i) {
            return Err(Error::DuplicateIndex(i));
        }
        out.toggle(i);
    }
    Ok(out)
}

/// Fills a table by evaluating `dependent(u, v, cond)` for every query.
/// Large tables are filled in parallel, one vertex pair per task.
fn build_table<F>(n: usize, dependent: F) -> Result<AnswerTable>
where
    F: Fn(usize, usize, VertexSet) -> bool + Sync,
{
    let mut t = AnswerTable::zeros(n)?;
    let per_pair = 1usize << (n - 2);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    if per_pair >= 64 && n > 8 {
        let words_per_pair = per_pair / 64;
        t.words
            .par_chunks_mut(words_per_pair)
            .zip(pairs.par_iter())
            .for_each(|(chunk, &(u, v))| {
                for (rank, word) in (0..per_pair as u64).step_by(64).zip(chunk.iter_mut()) {
                    let mut w = 0u64;
                    for bit in 0..64 {
                        let cond = VertexSet::from_bits(expand(rank + bit, u, v));
                        if dependent(u, v, cond) {
                            w |= 1 << bit;
                        }
                    }
                    *word = w;
                }
            });
    } else {
        let mut index = 0;
        for &(u, v) in &pairs {
            for rank in 0..per_pair as u64 {
                if dependent(u, v, VertexSet::from_bits(expand(rank, u, v))) {
                    t.words[index / 64] |= 1 << (index % 64);
                }
                index += 1;
            }
        }
    }
    Ok(t)
}

/// Answer table of a Markov network: dependent iff not separated.
pub fn table_of_markov(g: &UndirectedGraph) -> Result<AnswerTable> {
    build_table(g.n(), |u, v, s| !separates_unchecked(g, u, v, s))
}

/// Answer table of a Bayesian network: dependent iff d-connected.
pub fn table_of_bayes(d: &Dag) -> Result<AnswerTable> {
    build_table(d.n(), |u, v, s| !d_separates_unchecked(d, u, v, s))
}
