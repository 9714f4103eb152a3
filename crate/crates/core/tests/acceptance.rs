//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::time::Instant;

use kident::adversary::{promise_bn, promise_mn, run_game, AdversaryPolicy, Decision, EarlyStop, Exhaustive};
use kident::graph::{
    clique_dag, complete_dag, d1, d1_prime, empty_dag, make_chain_undirected, max_pairwise_connectivity,
    UndirectedGraph,
};
use kident::identifiability::{
    chain_dags, chain_swap_construction, enumerate_dags, enumerate_undirected, mec_distance_stats, nearest_bn,
    nearest_mn_all, Family, MecCatalog,
};
use kident::learners::{brute_force_bnsl, brute_force_mnsl, solve_bnsl, solve_mnsl, LearnResultBn};
use kident::oracle::{make_oracle, ErrorModel};
use kident::separation::{chain_d_connected, d_separates, reference};
use kident::table::{all_queries, apply_flips, query_count, table_distance, table_of_bayes, table_of_markov};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Table 1 of nearest-neighbour distances over 5-vertex classes.
const TABLE1: [(usize, usize, usize, f64, usize); 11] = [
    (0, 1, 8, 8.0, 8),
    (1, 10, 8, 8.0, 8),
    (2, 75, 4, 4.8, 8),
    (3, 350, 2, 4.7, 6),
    (4, 1120, 1, 3.8, 7),
    (5, 2130, 1, 2.3, 6),
    (6, 2595, 1, 1.5, 4),
    (7, 1730, 1, 1.1, 3),
    (8, 690, 1, 1.0, 1),
    (9, 80, 1, 1.0, 1),
    (10, 1, 1, 1.0, 1),
];
const MEAN_TOLERANCE: f64 = 0.1;

fn table1() -> Check {
    let rows = mec_distance_stats(5).map_err(|e| e.to_string())?;
    ensure(rows.len() == TABLE1.len(), || format!("{} rows", rows.len()))?;
    for (r, &(edges, mecs, min, mean, max)) in rows.iter().zip(&TABLE1) {
        ensure(
            r.edges == edges && r.mecs == mecs && r.min == min && r.max == max,
            || format!("row {edges}: got {r:?}"),
        )?;
        ensure((r.mean() - mean).abs() <= MEAN_TOLERANCE, || {
            format!("row {edges}: mean {} vs {mean}", r.mean())
        })?;
    }
    let total: usize = rows.iter().map(|r| r.mecs).sum();
    Ok(format!("11 rows match, {total} classes"))
}

fn chain_markov() -> Check {
    for n in 3..=6 {
        let chain = make_chain_undirected(n).map_err(|e| e.to_string())?;
        let (d, ties) = nearest_mn_all(&chain).map_err(|e| e.to_string())?;
        let expected = (1 << (n - 2)) - 1;
        ensure(d == expected, || format!("n={n}: {d} vs {expected}"))?;
        let leaf_edge = ties
            .iter()
            .any(|g| *g == chain.toggled(0, 2) || *g == chain.toggled(n - 3, n - 1));
        ensure(leaf_edge, || format!("n={n}: no leaf-to-distance-2 witness"))?;
    }
    Ok("n=3..6 distances 1, 3, 7, 15 with leaf-edge witnesses".into())
}

fn chain_bayes() -> Check {
    let mut checked = 0;
    for n in 3..=5 {
        let dags = chain_dags(n).map_err(|e| e.to_string())?;
        let family = Family::new(dags.iter().cloned()).map_err(|e| e.to_string())?;
        let expected = (1 << (n - 1)) - 2;
        for d in &dags {
            let got = family.closest(d).map_err(|e| e.to_string())?.distance;
            ensure(got == expected, || format!("n={n} {d:?}: {got} vs {expected}"))?;
            let w = chain_swap_construction(d).map_err(|e| e.to_string())?;
            let wd = table_distance(&table_of_bayes(d).unwrap(), &table_of_bayes(&w).unwrap()).unwrap();
            ensure(wd == expected, || format!("n={n} {d:?}: swap witness at {wd}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} chain DAGs, swap witness attains 2^(n-1)-2"))
}

fn kappa_bound() -> Check {
    let check_pair = |g1: &UndirectedGraph, g2: &UndirectedGraph| -> Result<(), String> {
        let n = g1.n() as i32;
        let kappa = max_pairwise_connectivity(g1) as i32;
        let d = table_distance(&table_of_markov(g1).unwrap(), &table_of_markov(g2).unwrap()).unwrap();
        ensure(d as f64 >= 2f64.powi(n - 2 - kappa), || {
            format!("{:?} vs {:?}: distance {d}, kappa {kappa}", g1.edges().collect::<Vec<_>>(), g2.edges().collect::<Vec<_>>())
        })
    };
    let all: Vec<_> = enumerate_undirected(4).unwrap().collect();
    let mut pairs = 0;
    for a in &all {
        for b in &all {
            if a != b {
                check_pair(a, b)?;
                pairs += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut random = 0;
    while random < 10_000 {
        let a = UndirectedGraph::from_edge_code(6, rng.gen_range(0..1 << 15)).unwrap();
        let b = UndirectedGraph::from_edge_code(6, rng.gen_range(0..1 << 15)).unwrap();
        if a == b {
            continue;
        }
        check_pair(&a, &b)?;
        random += 1;
    }
    Ok(format!("{pairs} pairs at n=4 and {random} random pairs at n=6, no violations"))
}

fn chain_d_separation() -> Check {
    let mut queries = 0;
    for n in 2..=5 {
        for d in chain_dags(n).unwrap() {
            for q in all_queries(n).unwrap() {
                let fast = chain_d_connected(&d, q.u, q.v, q.cond).map_err(|e| e.to_string())?;
                let slow = d_separates(&d, q.u, q.v, q.cond).unwrap();
                ensure(fast != slow, || format!("{d:?} {q}"))?;
                queries += 1;
            }
        }
    }
    Ok(format!("{queries} chain queries, zero mismatches"))
}

fn d_separation_engines() -> Check {
    let mut queries = 0;
    for n in 2..=4 {
        for d in enumerate_dags(n).unwrap() {
            for q in all_queries(n).unwrap() {
                let a = d_separates(&d, q.u, q.v, q.cond).unwrap();
                let b = reference::d_separates_by_paths(&d, q.u, q.v, q.cond).unwrap();
                ensure(a == b, || format!("{d:?} {q}"))?;
                queries += 1;
            }
        }
    }
    Ok(format!("{queries} queries over all DAGs with n <= 4, zero mismatches"))
}

fn spot_values() -> Check {
    let e = nearest_bn(&empty_dag(5).unwrap()).unwrap();
    ensure(e.distance == 8, || format!("empty: {}", e.distance))?;
    let r = nearest_bn(&d1(5).unwrap()).unwrap();
    ensure(r.distance == 1, || format!("d1: {}", r.distance))?;
    ensure(r.witness.mec_key() == d1_prime(5).unwrap().mec_key(), || {
        format!("d1 witness {:?}", r.witness)
    })?;
    let c = nearest_bn(&complete_dag(5).unwrap()).unwrap();
    ensure(c.distance == 1, || format!("complete: {}", c.distance))?;
    let cl = nearest_bn(&clique_dag(4, 2).unwrap()).unwrap();
    ensure(cl.distance >= 4, || format!("two cliques: {}", cl.distance))?;
    Ok(format!(
        "empty 8, d1 1 (witness d1'), complete 1, two 2-cliques {}",
        cl.distance
    ))
}

fn same_bn(a: &LearnResultBn, b: &LearnResultBn) -> bool {
    match (a, b) {
        (LearnResultBn::Unique { dag: x, distance: dx }, LearnResultBn::Unique { dag: y, distance: dy }) => {
            x.mec_key() == y.mec_key() && dx == dy
        }
        (LearnResultBn::NoneWithin, LearnResultBn::NoneWithin) => true,
        (
            LearnResultBn::NotUnique { witnesses: x, total: tx },
            LearnResultBn::NotUnique { witnesses: y, total: ty },
        ) => x == y && tx == ty,
        _ => false,
    }
}

fn solver_agreement() -> Check {
    const INSTANCES: usize = 500;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dags: Vec<_> = enumerate_dags(4).unwrap().collect();
    for i in 0..INSTANCES {
        let k = i % 2;
        let count = rng.gen_range(0..=k);
        let seed = rng.gen();
        let g = UndirectedGraph::from_edge_code(4, rng.gen_range(0..64)).unwrap();
        let o = make_oracle(table_of_markov(&g).unwrap(), ErrorModel::RandomFlips { count, seed }, k).unwrap();
        let t = o.full_table();
        let (fast, slow) = (solve_mnsl(&t, k).unwrap(), brute_force_mnsl(&t, k).unwrap());
        ensure(fast == slow, || format!("mn instance {i}: {fast:?} vs {slow:?}"))?;

        let d = &dags[rng.gen_range(0..dags.len())];
        let o = make_oracle(table_of_bayes(d).unwrap(), ErrorModel::RandomFlips { count, seed }, k).unwrap();
        let t = o.full_table();
        let (fast, slow) = (solve_bnsl(&t, k).unwrap(), brute_force_bnsl(&t, k).unwrap());
        ensure(same_bn(&fast, &slow), || format!("bn instance {i}: {fast:?} vs {slow:?}"))?;
    }
    Ok(format!("{INSTANCES} mn and {INSTANCES} bn instances at n=4, k in {{0, 1}}"))
}

fn identifiable_recovery() -> Check {
    let cat = MecCatalog::shared(5).unwrap();
    let nearest = cat.nearest_distances();
    let identifiable: Vec<usize> = (0..cat.len()).filter(|&i| nearest[i] >= 3).collect();
    ensure(identifiable.len() >= 100, || format!("only {} identifiable classes", identifiable.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let picked = sample(&mut rng, identifiable.len(), 100);
    let mut runs = 0;
    for p in picked.iter() {
        let i = identifiable[p];
        let t = cat.table(i);
        for b in 0..t.len() {
            let noisy = apply_flips(&t, &[b]).unwrap();
            let r = solve_bnsl(&noisy, 1).unwrap();
            ensure(r.unique_key().as_ref() == Some(cat.key(i)), || {
                format!("class {:?}, flip {b}: {r:?}", cat.representative(i))
            })?;
            runs += 1;
        }
    }
    let chain = make_chain_undirected(4).unwrap();
    let t = table_of_markov(&chain).unwrap();
    for b in 0..query_count(4) {
        let r = solve_mnsl(&apply_flips(&t, &[b]).unwrap(), 1).unwrap();
        ensure(
            matches!(&r, kident::learners::LearnResultMn::Unique { graph, .. } if *graph == chain),
            || format!("chain flip {b}: {r:?}"),
        )?;
    }
    Ok(format!(
        "{runs} corrupted tables of 100 of {} 1-identifiable classes, 24 chain flips",
        identifiable.len()
    ))
}

fn adversary_game() -> Check {
    for (name, inst) in [("mn", promise_mn(5).unwrap()), ("bn", promise_bn(5).unwrap())] {
        let t = run_game(&mut Exhaustive, &inst, AdversaryPolicy::TruthfulG1).unwrap();
        ensure(t.queries_used == 80 && !t.fooled && t.justified, || {
            format!("{name} exhaustive: {} queries, fooled {}", t.queries_used, t.fooled)
        })?;
        let t = run_game(&mut EarlyStop, &inst, AdversaryPolicy::LateError).unwrap();
        ensure(t.fooled, || format!("{name} early-stop not fooled"))?;
        ensure(t.decision == Decision::NotUnique && t.truth == Decision::Candidate(0), || {
            format!("{name} early-stop: {:?} vs {:?}", t.decision, t.truth)
        })?;
    }
    Ok("exhaustive certifies with 80 queries, early-stop fooled in mn and bn".into())
}

fn pc_correctness() -> Check {
    let cat = MecCatalog::shared(5).unwrap();
    for i in 0..cat.len() {
        let r = solve_bnsl(&cat.table(i), 0).unwrap();
        ensure(r.unique_key().as_ref() == Some(cat.key(i)), || {
            format!("{:?}: {r:?}", cat.representative(i))
        })?;
    }
    Ok(format!("all {} classes at n=5 recovered", cat.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Table 1 reproduction (n=5)", table1),
        ("chain Markov nearest distance", chain_markov),
        ("chain Bayesian closest class", chain_bayes),
        ("connectivity distance bound", kappa_bound),
        ("chain d-separation lemma", chain_d_separation),
        ("d-separation engine equivalence", d_separation_engines),
        ("spot nearest-class values", spot_values),
        ("solvers match brute force", solver_agreement),
        ("identifiable classes recovered", identifiable_recovery),
        ("adversary game (n=5)", adversary_game),
        ("PC recovers every class (n=5)", pc_correctness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
