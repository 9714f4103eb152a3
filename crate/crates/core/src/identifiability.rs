//! Exhaustive enumeration of graphs, DAGs and Markov equivalence classes,
//! nearest-neighbour distances, k-identifiability, and the closed forms for
//! chains.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    make_chain_dag, make_chain_undirected, max_pairwise_connectivity, pair_count, Dag, MecKey,
    UndirectedGraph, VertexSet,
};
use crate::table::{hamming, table_of_bayes, table_of_markov, AnswerTable};

/// Largest vertex count accepted by the exhaustive enumerators.
pub const MAX_ENUM_VERTICES: usize = 6;

/// Largest vertex count for sweeps over every Markov equivalence class.
pub const MAX_MEC_SWEEP_VERTICES: usize = 5;

fn check_enum(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::TooManyVertices { n, max });
    }
    Ok(())
}

/// Every undirected graph on `n` vertices, ordered by edge code.
pub fn enumerate_undirected(n: usize) -> Result<impl Iterator<Item = UndirectedGraph>> {
    check_enum(n, MAX_ENUM_VERTICES)?;
    let total = 1u64 << pair_count(n);
    Ok((0..total).map(move |code| UndirectedGraph::from_edge_code(n, code).unwrap()))
}

fn is_acyclic(children: &[u64]) -> bool {
    let n = children.len();
    let mut parents = vec![0u64; n];
    for (u, &row) in children.iter().enumerate() {
        for v in VertexSet::from_bits(row) {
            parents[v] |= 1 << u;
        }
    }
    let mut remaining = VertexSet::full(n).bits();
    while remaining != 0 {
        let source = VertexSet::from_bits(remaining)
            .iter()
            .find(|&v| parents[v] & remaining == 0);
        match source {
            Some(v) => remaining &= !(1 << v),
            None => return false,
        }
    }
    true
}

/// Every labelled DAG on `n` vertices: each skeleton in edge-code order,
/// then each acyclic orientation of its edges.
pub fn enumerate_dags(n: usize) -> Result<impl Iterator<Item = Dag>> {
    Ok(enumerate_undirected(n)?.flat_map(|g| {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let n = g.n();
        (0..1u64 << edges.len()).filter_map(move |orient| {
            let mut children = vec![0u64; n];
            for (i, &(u, v)) in edges.iter().enumerate() {
                if orient >> i & 1 == 0 {
                    children[u] |= 1 << v;
                } else {
                    children[v] |= 1 << u;
                }
            }
            is_acyclic(&children).then(|| Dag::from_children_unchecked(children))
        })
    }))
}

/// One representative per Markov equivalence class, the first DAG of the
/// class in [`enumerate_dags`] order.
pub fn enumerate_mecs(n: usize) -> Result<Vec<(MecKey, Dag)>> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for d in enumerate_dags(n)? {
        let key = d.mec_key();
        if !seen.contains_key(&key) {
            seen.insert(key.clone(), out.len());
            out.push((key, d));
        }
    }
    Ok(out)
}

/// All graphs on `n` vertices together with their answer tables, stored as
/// one flat word array. Index `i` is the graph with edge code `i`.
pub struct MarkovCatalog {
    n: usize,
    words: usize,
    tables: Vec<u64>,
}

impl MarkovCatalog {
    pub fn build(n: usize) -> Result<Self> {
        check_enum(n, MAX_ENUM_VERTICES)?;
        if n < 2 {
            return Err(Error::InvalidArgument("catalogs need n >= 2".into()));
        }
        let words = AnswerTable::zeros(n)?.words().len();
        let total = 1usize << pair_count(n);
        let tables: Vec<u64> = (0..total as u64)
            .into_par_iter()
            .flat_map_iter(|code| {
                let g = UndirectedGraph::from_edge_code(n, code).unwrap();
                table_of_markov(&g).unwrap().words().to_vec()
            })
            .collect();
        Ok(MarkovCatalog { n, words, tables })
    }

    /// Process-wide cached catalog for `n`.
    pub fn shared(n: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<MarkovCatalog>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(&n) {
            return Ok(c.clone());
        }
        let built = Arc::new(Self::build(n)?);
        Ok(cache.lock().unwrap().entry(n).or_insert(built).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tables.len() / self.words
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn graph(&self, i: usize) -> UndirectedGraph {
        UndirectedGraph::from_edge_code(self.n, i as u64).unwrap()
    }

    fn table_words(&self, i: usize) -> &[u64] {
        &self.tables[i * self.words..(i + 1) * self.words]
    }

    pub fn table(&self, i: usize) -> AnswerTable {
        AnswerTable::from_words(self.n, self.table_words(i).to_vec()).unwrap()
    }

    /// Distance from every graph to `t`.
    pub fn distances_to(&self, t: &AnswerTable) -> Result<Vec<usize>> {
        if t.n() != self.n {
            return Err(Error::SizeMismatch(t.n(), self.n));
        }
        Ok(self
            .tables
            .chunks_exact(self.words)
            .map(|w| hamming(w, t.words()))
            .collect())
    }
}

/// Every Markov equivalence class on `n` vertices with a representative DAG
/// and its answer table.
pub struct MecCatalog {
    n: usize,
    words: usize,
    keys: Vec<MecKey>,
    reps: Vec<Dag>,
    tables: Vec<u64>,
    index: HashMap<MecKey, usize>,
}

impl MecCatalog {
    pub fn build(n: usize) -> Result<Self> {
        check_enum(n, MAX_ENUM_VERTICES)?;
        if n < 2 {
            return Err(Error::InvalidArgument("catalogs need n >= 2".into()));
        }
        let words = AnswerTable::zeros(n)?.words().len();
        let (keys, reps): (Vec<_>, Vec<_>) = enumerate_mecs(n)?.into_iter().unzip();
        let tables: Vec<u64> = reps
            .par_iter()
            .flat_map_iter(|d| table_of_bayes(d).unwrap().words().to_vec())
            .collect();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(MecCatalog {
            n,
            words,
            keys,
            reps,
            tables,
            index,
        })
    }

    /// Process-wide cached catalog for `n`.
    pub fn shared(n: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<MecCatalog>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(&n) {
            return Ok(c.clone());
        }
        let built = Arc::new(Self::build(n)?);
        Ok(cache.lock().unwrap().entry(n).or_insert(built).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, i: usize) -> &MecKey {
        &self.keys[i]
    }

    pub fn representative(&self, i: usize) -> &Dag {
        &self.reps[i]
    }

    pub fn index_of(&self, key: &MecKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    fn table_words(&self, i: usize) -> &[u64] {
        &self.tables[i * self.words..(i + 1) * self.words]
    }

    pub fn table(&self, i: usize) -> AnswerTable {
        AnswerTable::from_words(self.n, self.table_words(i).to_vec()).unwrap()
    }

    /// Distance from every class to `t`.
    pub fn distances_to(&self, t: &AnswerTable) -> Result<Vec<usize>> {
        if t.n() != self.n {
            return Err(Error::SizeMismatch(t.n(), self.n));
        }
        Ok(self
            .tables
            .chunks_exact(self.words)
            .map(|w| hamming(w, t.words()))
            .collect())
    }

    /// Nearest-neighbour distance of every class to any other class.
    pub fn nearest_distances(&self) -> Vec<usize> {
        (0..self.len())
            .into_par_iter()
            .map(|i| {
                let own = self.table_words(i);
                self.tables
                    .chunks_exact(self.words)
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, w)| hamming(w, own))
                    .min()
                    .unwrap_or(usize::MAX)
            })
            .collect()
    }
}

/// Distance to a nearest neighbour and one witness achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearestResult<W> {
    pub distance: usize,
    pub witness: W,
}

/// Nearest other graph (by separation distance) and every graph tied at
/// that distance, in edge-code order.
pub fn nearest_mn_all(g: &UndirectedGraph) -> Result<(usize, Vec<UndirectedGraph>)> {
    let cat = MarkovCatalog::shared(g.n())?;
    let own = g.edge_code() as usize;
    let dist = cat.distances_to(&table_of_markov(g)?)?;
    let best = dist
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != own)
        .map(|(_, &d)| d)
        .min()
        .ok_or(Error::NoNeighbor)?;
    let ties = dist
        .iter()
        .enumerate()
        .filter(|&(i, &d)| i != own && d == best)
        .map(|(i, _)| cat.graph(i))
        .collect();
    Ok((best, ties))
}

/// Nearest other undirected graph; ties broken by edge-code order.
pub fn nearest_mn(g: &UndirectedGraph) -> Result<NearestResult<UndirectedGraph>> {
    let (distance, ties) = nearest_mn_all(g)?;
    Ok(NearestResult {
        distance,
        witness: ties.into_iter().next().expect("ties are non-empty"),
    })
}

/// Nearest other equivalence class and the representatives of every class
/// tied at that distance.
pub fn nearest_bn_all(d: &Dag) -> Result<(usize, Vec<Dag>)> {
    check_enum(d.n(), MAX_MEC_SWEEP_VERTICES)?;
    let cat = MecCatalog::shared(d.n())?;
    let own = cat.index_of(&d.mec_key()).expect("every DAG belongs to a catalogued class");
    let dist = cat.distances_to(&table_of_bayes(d)?)?;
    let best = dist
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != own)
        .map(|(_, &x)| x)
        .min()
        .ok_or(Error::NoNeighbor)?;
    let ties = dist
        .iter()
        .enumerate()
        .filter(|&(i, &x)| i != own && x == best)
        .map(|(i, _)| cat.representative(i).clone())
        .collect();
    Ok((best, ties))
}

/// Nearest non-equivalent class; the witness is that class's representative.
pub fn nearest_bn(d: &Dag) -> Result<NearestResult<Dag>> {
    let (distance, ties) = nearest_bn_all(d)?;
    Ok(NearestResult {
        distance,
        witness: ties.into_iter().next().expect("ties are non-empty"),
    })
}

/// Largest `k` with `2k + 1 <= distance`.
pub fn max_identifiable_k(nearest_distance: usize) -> Result<usize> {
    if nearest_distance == 0 {
        return Err(Error::InvalidArgument(
            "a nearest-neighbour distance is at least 1".into(),
        ));
    }
    Ok((nearest_distance - 1) / 2)
}

/// Guaranteed identifiability `2^(n - κ - 3) - 1` from the maximum pairwise
/// connectivity κ; 0 when the exponent is negative.
pub fn kappa_identifiability_bound(g: &UndirectedGraph) -> usize {
    let kappa = max_pairwise_connectivity(g);
    let exp = g.n() as i64 - kappa as i64 - 3;
    if exp < 0 {
        0
    } else {
        (1usize << exp) - 1
    }
}

/// Separation-distance lower bound `2^(n - 2 - κ)` between `g` and any
/// other graph.
pub fn kappa_distance_bound(g: &UndirectedGraph) -> f64 {
    let kappa = max_pairwise_connectivity(g);
    2f64.powi(g.n() as i32 - 2 - kappa as i32)
}

/// Nearest neighbour of the chain `0 - 1 - .. - (n-1)` in closed form:
/// distance `2^(n-2) - 1`, reached by joining the leaf `0` to vertex `2`.
pub fn chain_mn_nearest_closed_form(n: usize) -> Result<NearestResult<UndirectedGraph>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("chain closed form needs n >= 3, got {n}")));
    }
    let witness = make_chain_undirected(n)?.toggled(0, 2);
    Ok(NearestResult {
        distance: (1usize << (n - 2)) - 1,
        witness,
    })
}

/// Swaps the first two vertices of the chain underlying `d`. The first
/// vertex becomes internal and is made a non-collider (it points at the
/// former second vertex), its new edge to the third vertex takes the
/// orientation the second vertex had, and the rest of the chain is copied.
/// Colliders are preserved except the former second vertex.
pub fn chain_swap_construction(d: &Dag) -> Result<Dag> {
    let order = d.skeleton().chain_order().ok_or(Error::NotChain)?;
    let n = order.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("chain swap needs n >= 3, got {n}")));
    }
    let forward: Vec<bool> = order.windows(2).map(|w| d.has_arc(w[0], w[1])).collect();
    let mut new_order = order.clone();
    new_order.swap(0, 1);
    let mut dirs = Vec::with_capacity(n - 1);
    // new_order[0] = old second, new_order[1] = old first: arc first -> second.
    dirs.push(false);
    // Edge old first - old third copies the orientation of old second - old third.
    dirs.push(forward[1]);
    dirs.extend_from_slice(&forward[2..]);
    make_chain_dag(&new_order, &dirs)
}

/// Closest chain-skeleton class to a chain DAG in closed form: distance
/// `2^(n-1) - 2`, witnessed by [`chain_swap_construction`].
pub fn chain_bn_nearest_in_family(d: &Dag) -> Result<NearestResult<Dag>> {
    let witness = chain_swap_construction(d)?;
    Ok(NearestResult {
        distance: (1usize << (d.n() - 1)) - 2,
        witness,
    })
}

/// Every DAG whose skeleton is a chain through all `n` vertices, each once.
pub fn chain_dags(n: usize) -> Result<Vec<Dag>> {
    check_enum(n, 8)?;
    if n == 0 {
        return Err(Error::InvalidArgument("chains need n >= 1".into()));
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    permute(&mut order, 0, &mut |order| {
        // Each undirected chain appears as two orders; keep the one
        // starting at the smaller end.
        if n > 1 && order[0] > order[n - 1] {
            return;
        }
        for bits in 0..1u32 << (n - 1) {
            let dirs: Vec<bool> = (0..n - 1).map(|i| bits >> i & 1 == 1).collect();
            let d = make_chain_dag(order, &dirs).unwrap();
            if seen.insert(d.clone()) {
                out.push(d);
            }
        }
    });
    Ok(out)
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// A fixed family of DAGs with precomputed tables, for repeated
/// closest-member queries.
pub struct Family {
    members: Vec<(MecKey, AnswerTable, Dag)>,
}

impl Family {
    pub fn new<I: IntoIterator<Item = Dag>>(dags: I) -> Result<Self> {
        let members = dags
            .into_iter()
            .map(|d| Ok((d.mec_key(), table_of_bayes(&d)?, d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Family { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Minimum distance from `d` to a member not Markov equivalent to it;
    /// ties go to the earliest member.
    pub fn closest(&self, d: &Dag) -> Result<NearestResult<Dag>> {
        let key = d.mec_key();
        let table = table_of_bayes(d)?;
        let mut best: Option<(usize, &Dag)> = None;
        for (k, t, member) in &self.members {
            if *k == key {
                continue;
            }
            let dist = table.distance(t)?;
            if best.is_none_or(|(b, _)| dist < b) {
                best = Some((dist, member));
            }
        }
        best.map(|(distance, w)| NearestResult {
            distance,
            witness: w.clone(),
        })
        .ok_or(Error::NoNeighbor)
    }
}

/// Closest family member outside the equivalence class of `d`.
pub fn closest_in_family<I: IntoIterator<Item = Dag>>(d: &Dag, family: I) -> Result<NearestResult<Dag>> {
    Family::new(family)?.closest(d)
}

/// One row of the nearest-neighbour statistics, grouped by skeleton edge
/// count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub edges: usize,
    pub mecs: usize,
    pub min: usize,
    pub max: usize,
    /// Sum of nearest distances over the group; `mean = distance_sum / mecs`.
    pub distance_sum: usize,
}

impl StatsRow {
    pub fn mean(&self) -> f64 {
        self.distance_sum as f64 / self.mecs as f64
    }

    /// Mean rounded to one decimal, printed without a trailing `.0`.
    pub fn mean_display(&self) -> String {
        let s = format!("{:.1}", self.mean());
        s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
    }

    /// Exact mean as a reduced fraction `p/q` (or `p` when integral).
    pub fn mean_exact(&self) -> String {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let g = gcd(self.distance_sum, self.mecs).max(1);
        let (p, q) = (self.distance_sum / g, self.mecs / g);
        if q == 1 {
            p.to_string()
        } else {
            format!("{p}/{q}")
        }
    }
}

/// Nearest-neighbour distance statistics over all equivalence classes on
/// `n` vertices, one row per skeleton edge count.
pub fn mec_distance_stats(n: usize) -> Result<Vec<StatsRow>> {
    check_enum(n, MAX_MEC_SWEEP_VERTICES)?;
    let cat = MecCatalog::shared(n)?;
    if cat.len() < 2 {
        return Err(Error::NoNeighbor);
    }
    let nearest = cat.nearest_distances();
    let mut rows: Vec<StatsRow> = (0..=pair_count(n))
        .map(|edges| StatsRow {
            edges,
            mecs: 0,
            min: usize::MAX,
            max: 0,
            distance_sum: 0,
        })
        .collect();
    for (i, &d) in nearest.iter().enumerate() {
        let row = &mut rows[cat.key(i).skeleton.edge_count()];
        row.mecs += 1;
        row.min = row.min.min(d);
        row.max = row.max.max(d);
        row.distance_sum += d;
    }
    rows.retain(|r| r.mecs > 0);
    Ok(rows)
}

/// Which structure the single-edge experiment is run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Mn,
    Bn,
}

/// A graph (or class representative) none of whose nearest neighbours is a
/// single edge edit away.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    /// Edges (mn) or arcs (bn) of the source.
    pub source: Vec<(usize, usize)>,
    pub nearest_distance: usize,
}

/// Outcome of checking "some nearest neighbour differs by one edge
/// operation" over every graph or class on `n` vertices.
#[derive(Clone, Debug, Serialize)]
pub struct SingleEdgeReport {
    pub mode: Mode,
    pub n: usize,
    pub checked: usize,
    pub satisfied: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SingleEdgeReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// For undirected graphs the edge operations are adding or removing one
/// edge. For DAGs they are adding, removing or reversing one arc of any
/// member of the source class, keeping the result acyclic.
pub fn single_edge_neighbor_report(n: usize, mode: Mode) -> Result<SingleEdgeReport> {
    check_enum(n, MAX_MEC_SWEEP_VERTICES)?;
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    match mode {
        Mode::Mn => {
            let cat = MarkovCatalog::shared(n)?;
            let results: Vec<Option<Counterexample>> = (0..cat.len())
                .into_par_iter()
                .map(|i| {
                    let dist = cat.distances_to(&cat.table(i)).unwrap();
                    let best = dist
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &d)| d)
                        .min()
                        .unwrap();
                    let one_edge = (0..pair_count(n)).any(|b| dist[i ^ (1 << b)] == best);
                    (!one_edge).then(|| Counterexample {
                        source: cat.graph(i).edges().collect(),
                        nearest_distance: best,
                    })
                })
                .collect();
            Ok(report(mode, n, results))
        }
        Mode::Bn => {
            let cat = MecCatalog::shared(n)?;
            let nearest = cat.nearest_distances();
            let mut satisfied = vec![false; cat.len()];
            for d in enumerate_dags(n)? {
                let i = cat.index_of(&d.mec_key()).unwrap();
                if satisfied[i] {
                    continue;
                }
                let own = cat.table_words(i);
                let hit = single_arc_edits(&d).any(|e| {
                    let j = cat.index_of(&e.mec_key()).unwrap();
                    j != i && hamming(cat.table_words(j), own) == nearest[i]
                });
                satisfied[i] = hit;
            }
            let results = (0..cat.len())
                .map(|i| {
                    (!satisfied[i]).then(|| Counterexample {
                        source: cat.representative(i).arcs().collect(),
                        nearest_distance: nearest[i],
                    })
                })
                .collect();
            Ok(report(mode, n, results))
        }
    }
}

fn report(mode: Mode, n: usize, results: Vec<Option<Counterexample>>) -> SingleEdgeReport {
    let checked = results.len();
    let counterexamples: Vec<_> = results.into_iter().flatten().collect();
    SingleEdgeReport {
        mode,
        n,
        checked,
        satisfied: checked - counterexamples.len(),
        counterexamples,
    }
}

/// Every DAG reachable from `d` by adding, removing or reversing one arc.
pub fn single_arc_edits(d: &Dag) -> impl Iterator<Item = Dag> + '_ {
    let n = d.n();
    (0..n).flat_map(move |u| {
        (0..n).filter(move |&v| v != u).flat_map(move |v| {
            let mut out = Vec::new();
            if d.has_arc(u, v) {
                out.extend(d.without_arc(u, v));
                out.extend(d.with_reversed(u, v));
            } else if !d.adjacent(u, v) {
                out.extend(d.with_arc(u, v));
            }
            out
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_dag, d1, empty_dag};

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_undirected(2).unwrap().count(), 2);
        assert_eq!(enumerate_undirected(3).unwrap().count(), 8);
        assert_eq!(enumerate_undirected(5).unwrap().count(), 1024);
        assert!(enumerate_undirected(7).is_err());
        assert_eq!(enumerate_dags(2).unwrap().count(), 3);
        assert_eq!(enumerate_dags(3).unwrap().count(), 25);
        assert_eq!(enumerate_dags(4).unwrap().count(), 543);
    }

    /// Labelled DAG counts from the recurrence
    /// `a(n) = sum_{k=1..n} (-1)^(k+1) C(n,k) 2^(k(n-k)) a(n-k)`.
    fn dag_count_recurrence(n: usize) -> i128 {
        let mut a = vec![1i128];
        for m in 1..=n {
            let mut total = 0i128;
            let mut binom = 1i128;
            for k in 1..=m {
                binom = binom * (m - k + 1) as i128 / k as i128;
                let term = binom * (1i128 << (k * (m - k))) * a[m - k];
                total += if k % 2 == 1 { term } else { -term };
            }
            a.push(total);
        }
        a[n]
    }

    #[test]
    fn dag_enumeration_matches_recurrence() {
        assert_eq!(dag_count_recurrence(3), 25);
        for n in 1..=5 {
            assert_eq!(enumerate_dags(n).unwrap().count() as i128, dag_count_recurrence(n), "n={n}");
        }
    }

    #[test]
    fn dags_are_distinct_and_acyclic() {
        let dags: Vec<_> = enumerate_dags(4).unwrap().collect();
        let set: std::collections::HashSet<_> = dags.iter().cloned().collect();
        assert_eq!(set.len(), dags.len());
        assert!(dags.iter().all(|d| d.topological_order().is_some()));
    }

    #[test]
    fn mec_counts_small() {
        assert_eq!(enumerate_mecs(2).unwrap().len(), 2);
        assert_eq!(enumerate_mecs(3).unwrap().len(), 11);
        assert_eq!(enumerate_mecs(4).unwrap().len(), 185);
    }

    #[test]
    fn distinct_classes_have_distinct_tables() {
        for n in 2..=4 {
            let cat = MecCatalog::build(n).unwrap();
            let tables: std::collections::HashSet<_> = (0..cat.len()).map(|i| cat.table(i)).collect();
            assert_eq!(tables.len(), cat.len());
            let mc = MarkovCatalog::build(n).unwrap();
            let tables: std::collections::HashSet<_> = (0..mc.len()).map(|i| mc.table(i)).collect();
            assert_eq!(tables.len(), mc.len());
        }
    }

    #[test]
    fn max_k_examples() {
        assert_eq!(max_identifiable_k(1).unwrap(), 0);
        assert_eq!(max_identifiable_k(8).unwrap(), 3);
        assert_eq!(max_identifiable_k(3).unwrap(), 1);
        assert!(max_identifiable_k(0).is_err());
    }

    #[test]
    fn kappa_bound_examples() {
        assert_eq!(kappa_identifiability_bound(&make_chain_undirected(5).unwrap()), 1);
        assert_eq!(kappa_identifiability_bound(&UndirectedGraph::empty(5).unwrap()), 3);
        assert_eq!(kappa_identifiability_bound(&UndirectedGraph::complete(5).unwrap()), 0);
    }

    #[test]
    fn nearest_mn_examples() {
        assert_eq!(nearest_mn(&make_chain_undirected(4).unwrap()).unwrap().distance, 3);
        assert_eq!(nearest_mn(&UndirectedGraph::complete(4).unwrap()).unwrap().distance, 1);
        let r = nearest_mn(&make_chain_undirected(5).unwrap()).unwrap();
        assert_eq!(r.distance, 7);
        let chain = make_chain_undirected(5).unwrap();
        assert_eq!(r.witness.edge_difference(&chain), 1);
        assert_eq!(r.witness.edge_count(), 5);
    }

    #[test]
    fn nearest_bn_examples() {
        assert_eq!(nearest_bn(&empty_dag(5).unwrap()).unwrap().distance, 8);
        assert_eq!(nearest_bn(&d1(5).unwrap()).unwrap().distance, 1);
        assert_eq!(nearest_bn(&complete_dag(5).unwrap()).unwrap().distance, 1);
        assert!(nearest_bn(&empty_dag(6).unwrap()).is_err());
    }

    #[test]
    fn nearest_witness_realises_the_distance() {
        for g in enumerate_undirected(4).unwrap() {
            let r = nearest_mn(&g).unwrap();
            let d = table_of_markov(&g).unwrap().distance(&table_of_markov(&r.witness).unwrap()).unwrap();
            assert_eq!(d, r.distance);
            assert_ne!(r.witness, g);
        }
        for (_, d) in enumerate_mecs(4).unwrap() {
            let r = nearest_bn(&d).unwrap();
            let dist = table_of_bayes(&d).unwrap().distance(&table_of_bayes(&r.witness).unwrap()).unwrap();
            assert_eq!(dist, r.distance);
            assert!(r.distance >= 1);
        }
    }

    #[test]
    fn chain_closed_forms() {
        assert_eq!(chain_mn_nearest_closed_form(3).unwrap().distance, 1);
        let r = chain_mn_nearest_closed_form(4).unwrap();
        assert_eq!(r.distance, 3);
        assert!(r.witness.has_edge(0, 2));
        assert_eq!(chain_mn_nearest_closed_form(6).unwrap().distance, 15);
        assert!(chain_mn_nearest_closed_form(2).is_err());
        let d = make_chain_dag(&[0, 1, 2], &[true, false]).unwrap();
        assert_eq!(chain_bn_nearest_in_family(&d).unwrap().distance, 2);
        assert!(chain_bn_nearest_in_family(&empty_dag(3).unwrap()).is_err());
    }

    #[test]
    fn swap_construction_reproduces_both_figure_examples() {
        // v1 -> v2 <- v3 -> v4 <- v5 -> v6
        let d = make_chain_dag(&[0, 1, 2, 3, 4, 5], &[true, false, true, false, true]).unwrap();
        let expected = make_chain_dag(&[1, 0, 2, 3, 4, 5], &[false, false, true, false, true]).unwrap();
        assert_eq!(chain_swap_construction(&d).unwrap(), expected);
        // v1 <- v2 -> v3 <- v4 -> v5 <- v6
        let d = make_chain_dag(&[0, 1, 2, 3, 4, 5], &[false, true, false, true, false]).unwrap();
        let expected = make_chain_dag(&[1, 0, 2, 3, 4, 5], &[false, true, false, true, false]).unwrap();
        let got = chain_swap_construction(&d).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got.colliders(), d.colliders());
    }

    #[test]
    fn chain_family_sizes() {
        assert_eq!(chain_dags(3).unwrap().len(), 12);
        assert_eq!(chain_dags(4).unwrap().len(), 96);
        assert_eq!(chain_dags(5).unwrap().len(), 960);
    }

    #[test]
    fn closest_in_family_edge_cases() {
        let d = d1(4).unwrap();
        let prime = crate::graph::d1_prime(4).unwrap();
        assert_eq!(closest_in_family(&d, [prime]).unwrap().distance, 1);
        assert!(matches!(closest_in_family(&d, [d.clone()]), Err(Error::NoNeighbor)));
        let chain = make_chain_dag(&[0, 1, 2, 3], &[true, true, true]).unwrap();
        let chains = closest_in_family(&chain, chain_dags(4).unwrap()).unwrap().distance;
        assert_eq!(chains, 6);
        let all = closest_in_family(&chain, enumerate_dags(4).unwrap()).unwrap().distance;
        assert!(all <= chains);
    }

    #[test]
    fn stats_row_formatting() {
        let row = StatsRow { edges: 2, mecs: 75, min: 4, max: 8, distance_sum: 360 };
        assert_eq!(row.mean_display(), "4.8");
        assert_eq!(row.mean_exact(), "24/5");
        let row = StatsRow { edges: 8, mecs: 690, min: 1, max: 1, distance_sum: 690 };
        assert_eq!(row.mean_display(), "1");
        assert_eq!(row.mean_exact(), "1");
    }

    #[test]
    fn single_edge_reports_small() {
        let r = single_edge_neighbor_report(2, Mode::Mn).unwrap();
        assert!(r.holds() && r.checked == 2);
        let r = single_edge_neighbor_report(3, Mode::Mn).unwrap();
        assert!(r.holds() && r.checked == 8);
    }
}
