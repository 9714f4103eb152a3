//! File formats: graph JSON, answer tables as CSV or packed bits, oracle
//! specifications, and the JSON reports written by the command-line tool.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{Dag, Graph, MecKey, UndirectedGraph, VertexSet};
use crate::identifiability::StatsRow;
use crate::learners::{LearnResultBn, LearnResultMn};
use crate::oracle::{make_oracle, ErrorModel, OracleInstance};
use crate::table::{query_at, query_index, vertices_for_query_count, AnswerTable, QueryKey};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Option<Vec<(usize, usize)>>,
    arcs: Option<Vec<(usize, usize)>>,
}

/// Parses `{"n": .., "edges": [[u, v], ..]}` or `{"n": .., "arcs": [..]}`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let f: GraphFile = serde_json::from_str(text)?;
    match (f.edges, f.arcs) {
        (Some(e), None) => Ok(Graph::Undirected(UndirectedGraph::from_edges(f.n, &e)?)),
        (None, Some(a)) => Ok(Graph::Directed(Dag::from_arcs(f.n, &a)?)),
        _ => Err(Error::Format("graph needs exactly one of \"edges\" or \"arcs\"".into())),
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn undirected_json(g: &UndirectedGraph) -> Value {
    json!({ "n": g.n(), "edges": g.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>() })
}

pub fn dag_json(d: &Dag) -> Value {
    json!({ "n": d.n(), "arcs": d.arcs().map(|(u, v)| [u, v]).collect::<Vec<_>>() })
}

pub fn graph_json(g: &Graph) -> Value {
    match g {
        Graph::Undirected(g) => undirected_json(g),
        Graph::Directed(d) => dag_json(d),
    }
}

/// A class as its skeleton plus its v-structures `[u, v, w]` (`u -> v <- w`).
pub fn mec_json(key: &MecKey) -> Value {
    json!({
        "n": key.skeleton.n(),
        "edges": key.skeleton.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
        "v_structures": key.vstructs.iter().map(|&(u, v, w)| [u, v, w]).collect::<Vec<_>>(),
    })
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&graph_json(g))? + "\n")?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TableRow {
    u: usize,
    v: usize,
    cond_mask: u64,
    answer: u8,
}

/// One row per query in canonical order: `u,v,cond_mask,answer`, where
/// `cond_mask` is the compressed rank of the conditioning set.
pub fn write_table_csv<W: Write>(w: W, t: &AnswerTable) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let per_pair = 1usize << (t.n() - 2);
    for i in 0..t.len() {
        let q = query_at(t.n(), i)?;
        out.serialize(TableRow {
            u: q.u,
            v: q.v,
            cond_mask: (i % per_pair) as u64,
            answer: t.get(i) as u8,
        })?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a complete table in any row order. Every query must appear once.
pub fn read_table_csv<R: Read>(r: R) -> Result<AnswerTable> {
    let mut rows = Vec::new();
    for row in csv::Reader::from_reader(r).deserialize() {
        let row: TableRow = row?;
        rows.push(row);
    }
    let n = vertices_for_query_count(rows.len())
        .ok_or_else(|| Error::Format(format!("{} rows is not a complete table", rows.len())))?;
    let mut t = AnswerTable::zeros(n)?;
    let mut seen = vec![false; t.len()];
    let per_pair = 1u64 << (n - 2);
    for row in rows {
        if row.answer > 1 {
            return Err(Error::Format(format!("answer must be 0 or 1, got {}", row.answer)));
        }
        if row.cond_mask >= per_pair {
            return Err(Error::Format(format!("cond_mask {} out of range", row.cond_mask)));
        }
        if row.u >= row.v {
            return Err(Error::Format(format!("row ({}, {}) must have u < v", row.u, row.v)));
        }
        let first = query_index(n, &QueryKey::new(n, row.u, row.v, VertexSet::empty())?)?;
        let idx = first + row.cond_mask as usize;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::DuplicateIndex(idx));
        }
        t.set(idx, row.answer == 1);
    }
    Ok(t)
}

/// Bit length as a little-endian `u64`, then the bits packed least
/// significant first.
pub fn write_table_bin<W: Write>(mut w: W, t: &AnswerTable) -> Result<()> {
    w.write_all(&(t.len() as u64).to_le_bytes())?;
    let bytes: Vec<u8> = t.words().iter().flat_map(|x| x.to_le_bytes()).take(t.len().div_ceil(8)).collect();
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_table_bin<R: Read>(mut r: R) -> Result<AnswerTable> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() < 8 {
        return Err(Error::Format("binary table shorter than its header".into()));
    }
    let len = u64::from_le_bytes(buf[..8].try_into().unwrap()) as usize;
    let n = vertices_for_query_count(len)
        .ok_or_else(|| Error::Format(format!("{len} bits is not a complete table")))?;
    let body = &buf[8..];
    if body.len() != len.div_ceil(8) {
        return Err(Error::Format(format!(
            "expected {} payload bytes, found {}",
            len.div_ceil(8),
            body.len()
        )));
    }
    let words = body
        .chunks(8)
        .map(|c| {
            let mut b = [0u8; 8];
            b[..c.len()].copy_from_slice(c);
            u64::from_le_bytes(b)
        })
        .collect();
    AnswerTable::from_words(n, words)
}

/// Reads a table file, choosing CSV when it starts with the CSV header and
/// the binary format otherwise.
pub fn read_table(path: &Path) -> Result<AnswerTable> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"u,v,cond_mask,answer") {
        read_table_csv(&bytes[..])
    } else {
        read_table_bin(&bytes[..])
    }
}

/// Writes CSV for a `.csv` path and the binary format otherwise.
pub fn write_table(path: &Path, t: &AnswerTable) -> Result<()> {
    let f = std::io::BufWriter::new(fs::File::create(path)?);
    if path.extension().is_some_and(|e| e == "csv") {
        write_table_csv(f, t)
    } else {
        write_table_bin(f, t)
    }
}

/// `{"truth": <table file>, "k": .., "model": {...}}`. A relative `truth`
/// path is resolved against the spec's directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleSpec {
    pub truth: PathBuf,
    pub k: usize,
    #[serde(default = "no_errors")]
    pub model: ErrorModel,
}

fn no_errors() -> ErrorModel {
    ErrorModel::None
}

pub fn load_oracle(spec_path: &Path) -> Result<OracleInstance> {
    let spec: OracleSpec = serde_json::from_str(&fs::read_to_string(spec_path)?)?;
    let truth_path = match spec_path.parent() {
        Some(dir) if spec.truth.is_relative() => dir.join(&spec.truth),
        _ => spec.truth.clone(),
    };
    make_oracle(read_table(&truth_path)?, spec.model, spec.k)
}

pub fn nearest_json(distance: usize, max_k: usize, witness: Value) -> Value {
    json!({ "distance": distance, "max_k": max_k, "witness": witness })
}

pub fn learn_mn_json(r: &LearnResultMn) -> Value {
    match r {
        LearnResultMn::Unique { graph, distance } => json!({
            "status": r.status(), "graph": undirected_json(graph), "witnesses": [], "distance": distance,
        }),
        LearnResultMn::NoneWithin => json!({
            "status": r.status(), "graph": null, "witnesses": [], "distance": null,
        }),
        LearnResultMn::NotUnique { witnesses, total } => json!({
            "status": r.status(),
            "graph": null,
            "witnesses": witnesses.iter().map(|(g, d)| json!({"graph": undirected_json(g), "distance": d})).collect::<Vec<_>>(),
            "total": total,
            "distance": witnesses.iter().map(|w| w.1).min(),
        }),
    }
}

pub fn learn_bn_json(r: &LearnResultBn) -> Value {
    match r {
        LearnResultBn::Unique { dag, distance } => json!({
            "status": r.status(),
            "graph": dag_json(dag),
            "mec": mec_json(&dag.mec_key()),
            "witnesses": [],
            "distance": distance,
        }),
        LearnResultBn::NoneWithin => json!({
            "status": r.status(), "graph": null, "witnesses": [], "distance": null,
        }),
        LearnResultBn::NotUnique { witnesses, total } => json!({
            "status": r.status(),
            "graph": null,
            "witnesses": witnesses.iter().map(|(k, d)| json!({"mec": mec_json(k), "distance": d})).collect::<Vec<_>>(),
            "total": total,
            "distance": witnesses.iter().map(|w| w.1).min(),
        }),
    }
}

/// Columns `edges,mecs,min,mean,max,mean_exact`, one row per edge count.
pub fn write_stats_csv<W: Write>(w: W, rows: &[StatsRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["edges", "mecs", "min", "mean", "max", "mean_exact"])?;
    for r in rows {
        out.write_record([
            r.edges.to_string(),
            r.mecs.to_string(),
            r.min.to_string(),
            r.mean_display(),
            r.max.to_string(),
            r.mean_exact(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
