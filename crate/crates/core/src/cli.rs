//! The `kident` command-line tool. Parsing lives here so the commands can
//! be driven from tests; the binary only sets up the thread pool and maps
//! the result to an exit code.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::adversary::{promise_bn, promise_mn, run_game, AdversaryPolicy, EarlyStop, Exhaustive, Strategy};
use crate::error::{Error, Result};
use crate::graph::{make_chain_undirected, Graph};
use crate::identifiability::{
    chain_dags, chain_mn_nearest_closed_form, chain_swap_construction, max_identifiable_k, mec_distance_stats,
    nearest_bn, nearest_mn, single_edge_neighbor_report, Family, Mode, MAX_ENUM_VERTICES, MAX_MEC_SWEEP_VERTICES,
};
use crate::io::{
    dag_json, graph_json, learn_bn_json, learn_mn_json, load_oracle, nearest_json, read_graph, read_table,
    undirected_json, write_stats_csv, write_table,
};
use crate::learners::{solve_bnsl_with, solve_mnsl_with, SolverOptions, DEFAULT_MAX_WITNESSES};
use crate::oracle::{make_oracle, ErrorModel};
use crate::table::{table_of_bayes, table_of_markov, table_distance};

#[derive(Debug, Parser)]
#[command(name = "kident", version, about = "Structure learning from CI oracles with up to k wrong answers")]
pub struct Cli {
    /// Worker threads for parallel library calls (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nearest-neighbour distance statistics over all equivalence classes,
    /// grouped by edge count, as CSV.
    Table1 {
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Output file; standard output when omitted or `-`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance to the nearest other graph (mn) or class (bn).
    Nearest {
        #[arg(long)]
        graph: PathBuf,
        /// Defaults to mn for undirected input and bn for DAGs.
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Solve MNSL/BNSL. Exit code 0 unique, 2 none, 3 not unique.
    Learn {
        /// Answer table (CSV or binary).
        #[arg(long, conflicts_with = "oracle", required_unless_present = "oracle")]
        table: Option<PathBuf>,
        /// Oracle specification JSON; its committed table is used.
        #[arg(long)]
        oracle: Option<PathBuf>,
        /// Error budget; defaults to the oracle's k.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_MAX_WITNESSES)]
        max_witnesses: usize,
    },
    /// Check the chain nearest-neighbour formulas against brute force.
    ChainVerify {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Play the query game on a two-candidate promise instance and print
    /// the transcript.
    AdversaryDemo {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = StrategyArg::EarlyStop)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::LateError)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Does every graph (class) have a nearest neighbour one edge edit
    /// away?
    Conjectures {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Both modes when omitted.
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Write the answer table of a graph, optionally corrupted.
    Table {
        #[arg(long)]
        graph: PathBuf,
        /// `.csv` for CSV, anything else for the binary format.
        #[arg(long)]
        out: PathBuf,
        /// Canonical indices to flip.
        #[arg(long, value_delimiter = ',')]
        flips: Vec<usize>,
        /// Number of uniformly random indices to flip instead.
        #[arg(long, conflicts_with = "flips")]
        random_flips: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    EarlyStop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    TruthfulG1,
    LateError,
}

/// Runs a parsed command, writing its report to `out`, and returns the
/// process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Table1 { n, out: path } => {
            let rows = mec_distance_stats(n)?;
            match path {
                Some(p) if p.as_os_str() != "-" => write_stats_csv(fs::File::create(p)?, &rows)?,
                _ => write_stats_csv(&mut *out, &rows)?,
            }
            Ok(0)
        }
        Command::Nearest { graph, mode } => {
            let g = read_graph(&graph)?;
            let report = match (g, mode) {
                (Graph::Undirected(g), None | Some(Mode::Mn)) => {
                    let r = nearest_mn(&g)?;
                    nearest_json(r.distance, max_identifiable_k(r.distance)?, undirected_json(&r.witness))
                }
                (Graph::Directed(d), None | Some(Mode::Bn)) => {
                    let r = nearest_bn(&d)?;
                    nearest_json(r.distance, max_identifiable_k(r.distance)?, dag_json(&r.witness))
                }
                (Graph::Undirected(_), Some(Mode::Bn)) => {
                    return Err(Error::InvalidArgument("bn mode needs a graph with \"arcs\"".into()))
                }
                (Graph::Directed(_), Some(Mode::Mn)) => {
                    return Err(Error::InvalidArgument("mn mode needs a graph with \"edges\"".into()))
                }
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(0)
        }
        Command::Learn {
            table,
            oracle,
            k,
            mode,
            max_witnesses,
        } => {
            let (t, k) = match (table, oracle) {
                (Some(p), None) => {
                    let k = k.ok_or_else(|| Error::InvalidArgument("--k is required with --table".into()))?;
                    (read_table(&p)?, k)
                }
                (None, Some(p)) => {
                    let o = load_oracle(&p)?;
                    (o.full_table(), k.unwrap_or(o.k()))
                }
                _ => return Err(Error::InvalidArgument("give exactly one of --table and --oracle".into())),
            };
            let opts = SolverOptions { max_witnesses };
            let (report, status) = match mode {
                Mode::Mn => {
                    let r = solve_mnsl_with(&t, k, &opts)?;
                    (learn_mn_json(&r), r.status())
                }
                Mode::Bn => {
                    let r = solve_bnsl_with(&t, k, &opts)?;
                    (learn_bn_json(&r), r.status())
                }
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(status.exit_code())
        }
        Command::ChainVerify { n_max } => chain_verify(n_max, out),
        Command::AdversaryDemo {
            n,
            mode,
            strategy,
            policy,
            k,
        } => {
            let inst = match mode {
                Mode::Mn => promise_mn(n)?,
                Mode::Bn => promise_bn(n)?,
            }
            .with_k(k);
            let mut s: Box<dyn Strategy> = match strategy {
                StrategyArg::Exhaustive => Box::new(Exhaustive),
                StrategyArg::EarlyStop => Box::new(EarlyStop),
            };
            let policy = match policy {
                PolicyArg::TruthfulG1 => AdversaryPolicy::TruthfulG1,
                PolicyArg::LateError => AdversaryPolicy::LateError,
            };
            let t = run_game(s.as_mut(), &inst, policy)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&t)?)?;
            Ok(0)
        }
        Command::Conjectures { n, mode } => {
            let modes = match mode {
                Some(m) => vec![m],
                None => vec![Mode::Mn, Mode::Bn],
            };
            let reports = modes
                .into_iter()
                .map(|m| single_edge_neighbor_report(n, m))
                .collect::<Result<Vec<_>>>()?;
            let summary: Vec<_> = reports
                .iter()
                .map(|r| json!({ "holds": r.holds(), "report": r }))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
            Ok(0)
        }
        Command::Table {
            graph,
            out: path,
            flips,
            random_flips,
            seed,
        } => {
            let g = read_graph(&graph)?;
            let truth = match &g {
                Graph::Undirected(u) => table_of_markov(u)?,
                Graph::Directed(d) => table_of_bayes(d)?,
            };
            let model = match random_flips {
                Some(count) => ErrorModel::RandomFlips { count, seed },
                None if flips.is_empty() => ErrorModel::None,
                None => ErrorModel::ExplicitFlips { flips },
            };
            let budget = match &model {
                ErrorModel::None => 0,
                ErrorModel::ExplicitFlips { flips } => flips.len(),
                ErrorModel::RandomFlips { count, .. } => *count,
            };
            let o = make_oracle(truth, model, budget)?;
            write_table(&path, &o.full_table())?;
            let summary = json!({
                "graph": graph_json(&g),
                "queries": o.full_table().len(),
                "flipped": o.flipped_indices(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
            Ok(0)
        }
    }
}

fn chain_verify(n_max: usize, out: &mut dyn Write) -> Result<i32> {
    if n_max > MAX_ENUM_VERTICES {
        return Err(Error::TooManyVertices {
            n: n_max,
            max: MAX_ENUM_VERTICES,
        });
    }
    let mut all_pass = true;
    for n in 3..=n_max {
        let chain = make_chain_undirected(n)?;
        let brute = nearest_mn(&chain)?.distance;
        let closed = chain_mn_nearest_closed_form(n)?;
        let witness_ok = table_distance(&table_of_markov(&chain)?, &table_of_markov(&closed.witness)?)? == brute;
        let pass = brute == closed.distance && witness_ok;
        all_pass &= pass;
        writeln!(
            out,
            "mn n={n}: brute {brute} vs closed-form {} -> {}",
            closed.distance,
            verdict(pass)
        )?;
    }
    for n in 3..=n_max.min(MAX_MEC_SWEEP_VERTICES) {
        let dags = chain_dags(n)?;
        let family = Family::new(dags.iter().cloned())?;
        let closed = (1usize << (n - 1)) - 2;
        let (mut lo, mut hi, mut witness_ok) = (usize::MAX, 0, true);
        for d in &dags {
            let brute = family.closest(d)?.distance;
            lo = lo.min(brute);
            hi = hi.max(brute);
            let w = chain_swap_construction(d)?;
            witness_ok &= table_distance(&table_of_bayes(d)?, &table_of_bayes(&w)?)? == closed;
        }
        let pass = lo == closed && hi == closed && witness_ok;
        all_pass &= pass;
        let brute = if lo == hi { lo.to_string() } else { format!("{lo}..{hi}") };
        writeln!(
            out,
            "bn n={n}: brute {brute} vs closed-form {closed} over {} chain DAGs -> {}",
            dags.len(),
            verdict(pass)
        )?;
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}
