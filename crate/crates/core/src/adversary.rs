//! A query game between a learner and an adaptive oracle.
//!
//! The learner knows that the hidden table is within `k` errors of one of
//! two candidate graphs whose tables differ in a single critical query. It
//! asks queries one at a time and eventually announces which candidate is
//! the unique one within distance `k`, or that both are. The oracle picks
//! its answers lazily according to an [`AdversaryPolicy`].

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{d1, d1_prime, hub_pair, Dag, UndirectedGraph, VertexSet};
use crate::learners::for_each_small_subset;
use crate::table::{query_at, query_index, table_of_bayes, table_of_markov, AnswerTable, QueryKey};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidates {
    Markov(UndirectedGraph, UndirectedGraph),
    Bayes(Dag, Dag),
}

/// Two candidates whose tables differ only at `critical`, with error
/// budget `k`.
#[derive(Clone, Debug)]
pub struct PromiseInstance {
    candidates: Candidates,
    tables: [AnswerTable; 2],
    critical: QueryKey,
    critical_index: usize,
    k: usize,
}

impl PromiseInstance {
    /// Checks that the two tables differ exactly at `critical`.
    pub fn new(candidates: Candidates, critical: QueryKey, k: usize) -> Result<Self> {
        let tables = match &candidates {
            Candidates::Markov(a, b) => [table_of_markov(a)?, table_of_markov(b)?],
            Candidates::Bayes(a, b) => [table_of_bayes(a)?, table_of_bayes(b)?],
        };
        let n = tables[0].n();
        let critical_index = query_index(n, &critical)?;
        if tables[0].differing_indices(&tables[1])? != [critical_index] {
            return Err(Error::InvalidArgument(format!(
                "candidate tables do not differ exactly at {critical}"
            )));
        }
        Ok(PromiseInstance {
            candidates,
            tables,
            critical,
            critical_index,
            k,
        })
    }

    /// Same instance with a different error budget.
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn n(&self) -> usize {
        self.tables[0].n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn candidates(&self) -> &Candidates {
        &self.candidates
    }

    /// Table of candidate `i` (0 or 1).
    pub fn table(&self, i: usize) -> &AnswerTable {
        &self.tables[i]
    }

    pub fn critical_query(&self) -> QueryKey {
        self.critical
    }

    pub fn critical_index(&self) -> usize {
        self.critical_index
    }

    pub fn query_space(&self) -> usize {
        self.tables[0].len()
    }

    /// The correct answer for a complete table: the candidate that is the
    /// only one within distance `k`, or whether none or both are.
    pub fn classify(&self, t: &AnswerTable) -> Result<Decision> {
        let mut within = Vec::new();
        for (i, c) in self.tables.iter().enumerate() {
            if c.distance_within(t, self.k)?.is_some() {
                within.push(i);
            }
        }
        Ok(match within[..] {
            [] => Decision::NoneWithin,
            [i] => Decision::Candidate(i),
            _ => Decision::NotUnique,
        })
    }
}

/// The hub graphs on `n` vertices: 0 and 1 are joined to every other
/// vertex, and the second candidate also joins 0 to 1. Only the query
/// `(0, 1 | V \ {0, 1})` tells them apart.
pub fn promise_mn(n: usize) -> Result<PromiseInstance> {
    require_three(n)?;
    let (a, b) = hub_pair(n)?;
    PromiseInstance::new(Candidates::Markov(a, b), QueryKey::full_conditioning(n, 0, 1)?, 1)
}

/// The DAG with collider `0 -> 2 <- 1` followed by a directed path, and the
/// same DAG with the arc `0 -> 1` added. Only `(0, 1 | {})` tells them
/// apart.
pub fn promise_bn(n: usize) -> Result<PromiseInstance> {
    require_three(n)?;
    PromiseInstance::new(
        Candidates::Bayes(d1(n)?, d1_prime(n)?),
        QueryKey::new(n, 0, 1, VertexSet::empty())?,
        1,
    )
}

fn require_three(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("promise instances need n >= 3, got {n}")));
    }
    Ok(())
}

/// What the learner announces at the end of a game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Candidate 0 or 1 is the unique one within distance `k`.
    Candidate(usize),
    NotUnique,
    NoneWithin,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Query(QueryKey),
    Decide(Decision),
}

/// What a strategy sees before each move.
#[derive(Clone, Copy, Debug)]
pub struct GameView<'a> {
    pub instance: &'a PromiseInstance,
    pub history: &'a [(QueryKey, bool)],
}

impl GameView<'_> {
    /// Candidate 0's table with every observed answer written over it.
    pub fn optimistic_completion(&self) -> AnswerTable {
        let n = self.instance.n();
        let mut t = self.instance.table(0).clone();
        for (q, a) in self.history {
            t.set(query_index(n, q).expect("history holds valid queries"), *a);
        }
        t
    }
}

/// A learner. Implemented for any `FnMut(&GameView) -> Action`.
pub trait Strategy {
    fn name(&self) -> String {
        "custom".to_string()
    }

    fn next_action(&mut self, view: &GameView<'_>) -> Action;
}

impl<F: FnMut(&GameView<'_>) -> Action> Strategy for F {
    fn next_action(&mut self, view: &GameView<'_>) -> Action {
        self(view)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryPolicy {
    /// Answers every query from candidate 0's table.
    TruthfulG1,
    /// Answers from candidate 0's table, except that the last non-critical
    /// query left unasked is answered wrongly. If the learner stops before
    /// that, the error is placed on the largest unasked non-critical index.
    LateError,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameTranscript {
    pub strategy: String,
    pub policy: AdversaryPolicy,
    pub queries: Vec<(QueryKey, bool)>,
    pub queries_used: usize,
    pub decision: Decision,
    /// Correct classification of the table the oracle committed to.
    pub truth: Decision,
    pub fooled: bool,
    /// Whether every table consistent with the answers seen (and within
    /// `k` of some candidate) has the announced classification.
    pub justified: bool,
}

/// Plays one game. Repeated queries are answered from the transcript and
/// not counted; a strategy making more than twice the query space in moves
/// is stopped with [`Error::QueryBudgetExceeded`].
pub fn run_game(
    strategy: &mut dyn Strategy,
    inst: &PromiseInstance,
    policy: AdversaryPolicy,
) -> Result<GameTranscript> {
    if policy == AdversaryPolicy::LateError && inst.k == 0 {
        return Err(Error::InvalidArgument("late_error needs an error budget of at least 1".into()));
    }
    let n = inst.n();
    let len = inst.query_space();
    let base = inst.table(0);
    let mut committed = base.clone();
    let mut asked = vec![false; len];
    let mut open_noncritical = len - 1;
    let mut flipped = false;
    let mut history: Vec<(QueryKey, bool)> = Vec::new();
    let mut answered: HashMap<usize, bool> = HashMap::new();
    let move_cap = 2 * len;
    let mut moves = 0;
    let decision = loop {
        if moves >= move_cap {
            return Err(Error::QueryBudgetExceeded(move_cap));
        }
        moves += 1;
        let view = GameView {
            instance: inst,
            history: &history,
        };
        match strategy.next_action(&view) {
            Action::Decide(d) => break d,
            Action::Query(q) => {
                let idx = query_index(n, &q)?;
                if answered.contains_key(&idx) {
                    continue;
                }
                if idx != inst.critical_index {
                    open_noncritical -= 1;
                    if policy == AdversaryPolicy::LateError && open_noncritical == 0 {
                        committed.toggle(idx);
                        flipped = true;
                    }
                }
                asked[idx] = true;
                let a = committed.get(idx);
                answered.insert(idx, a);
                history.push((query_at(n, idx)?, a));
            }
        }
    };
    if policy == AdversaryPolicy::LateError && !flipped {
        let last = (0..len)
            .rev()
            .find(|&i| !asked[i] && i != inst.critical_index)
            .expect("an unasked non-critical index remains");
        committed.toggle(last);
    }
    let truth = inst.classify(&committed)?;
    let justified = consistent_classifications(inst, &answered)? == [decision];
    Ok(GameTranscript {
        strategy: strategy.name(),
        policy,
        queries_used: history.len(),
        queries: history,
        decision,
        truth,
        fooled: decision != truth,
        justified,
    })
}

/// Distinct classifications over all tables within `k` of a candidate that
/// agree with `seen`.
fn consistent_classifications(inst: &PromiseInstance, seen: &HashMap<usize, bool>) -> Result<Vec<Decision>> {
    let mut out = Vec::new();
    let mut failure = None;
    for c in &inst.tables {
        let mut t = c.clone();
        for_each_small_subset(t.len(), inst.k, &mut |flips| {
            for &i in flips {
                t.toggle(i);
            }
            if seen.iter().all(|(&i, &a)| t.get(i) == a) {
                match inst.classify(&t) {
                    Ok(d) if !out.contains(&d) => out.push(d),
                    Ok(_) => {}
                    Err(e) => failure = Some(e),
                }
            }
            for &i in flips {
                t.toggle(i);
            }
        });
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Asks every query in canonical order, then classifies the full table.
#[derive(Clone, Debug, Default)]
pub struct Exhaustive;

impl Strategy for Exhaustive {
    fn name(&self) -> String {
        "exhaustive".into()
    }

    fn next_action(&mut self, view: &GameView<'_>) -> Action {
        let inst = view.instance;
        let i = view.history.len();
        if i < inst.query_space() {
            return Action::Query(query_at(inst.n(), i).expect("index within query space"));
        }
        Action::Decide(inst.classify(&view.optimistic_completion()).expect("sizes match"))
    }
}

/// Asks only the critical query. With no error budget its answer settles
/// the game; otherwise it concludes that both candidates remain possible.
#[derive(Clone, Debug, Default)]
pub struct EarlyStop;

impl Strategy for EarlyStop {
    fn name(&self) -> String {
        "early-stop".into()
    }

    fn next_action(&mut self, view: &GameView<'_>) -> Action {
        let inst = view.instance;
        match view.history.first() {
            None => Action::Query(inst.critical_query()),
            Some(&(_, a)) if inst.k() == 0 => {
                let pick = if inst.table(0).get(inst.critical_index()) == a { 0 } else { 1 };
                Action::Decide(Decision::Candidate(pick))
            }
            Some(_) => Action::Decide(Decision::NotUnique),
        }
    }
}

/// Asks the given queries in order, then classifies candidate 0's table
/// overwritten with the answers seen.
#[derive(Clone, Debug)]
pub struct Scripted {
    name: String,
    order: Vec<QueryKey>,
}

impl Scripted {
    pub fn new(name: impl Into<String>, order: Vec<QueryKey>) -> Self {
        Scripted {
            name: name.into(),
            order,
        }
    }

    /// The first `m` queries in canonical order.
    pub fn prefix(inst: &PromiseInstance, m: usize) -> Self {
        let n = inst.n();
        let order = (0..m.min(inst.query_space())).map(|i| query_at(n, i).unwrap()).collect();
        Scripted::new(format!("prefix-{m}"), order)
    }

    /// The critical query first, then `m - 1` others in a seeded random
    /// order.
    pub fn random_order(inst: &PromiseInstance, m: usize, seed: u64) -> Self {
        let n = inst.n();
        let mut rest: Vec<usize> = (0..inst.query_space()).filter(|&i| i != inst.critical_index()).collect();
        rest.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let order = std::iter::once(inst.critical_index())
            .chain(rest)
            .take(m)
            .map(|i| query_at(n, i).unwrap())
            .collect();
        Scripted::new(format!("random-{m}-seed{seed}"), order)
    }

    /// Every query except the last non-critical one.
    pub fn all_but_one(inst: &PromiseInstance) -> Self {
        let n = inst.n();
        let skip = (0..inst.query_space()).rev().find(|&i| i != inst.critical_index()).unwrap();
        let order = (0..inst.query_space())
            .filter(|&i| i != skip)
            .map(|i| query_at(n, i).unwrap())
            .collect();
        Scripted::new("all-but-one", order)
    }
}

impl Strategy for Scripted {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn next_action(&mut self, view: &GameView<'_>) -> Action {
        match self.order.get(view.history.len()) {
            Some(&q) => Action::Query(q),
            None => Action::Decide(
                view.instance
                    .classify(&view.optimistic_completion())
                    .expect("sizes match"),
            ),
        }
    }
}

/// Strategies shipped for exercising the lower bound on an instance.
pub fn strategy_zoo(inst: &PromiseInstance) -> Vec<Box<dyn Strategy>> {
    let len = inst.query_space();
    let mut zoo: Vec<Box<dyn Strategy>> = vec![Box::new(Exhaustive), Box::new(EarlyStop)];
    for m in [0, 1, len / 2, len - 1] {
        zoo.push(Box::new(Scripted::prefix(inst, m)));
    }
    for seed in 0..3 {
        zoo.push(Box::new(Scripted::random_order(inst, len / 2, seed)));
        zoo.push(Box::new(Scripted::random_order(inst, len - 1, seed)));
    }
    zoo.push(Box::new(Scripted::all_but_one(inst)));
    zoo
}
