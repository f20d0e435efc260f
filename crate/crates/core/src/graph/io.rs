// SPDX-License-Identifier: Apache-2.0

//! Edge-list and Matrix-Market ingestion, edge-list output.
//!
//! Edge lists are whitespace separated `u v` pairs, one per line; anything
//! after the second column is ignored and lines starting with `#` or `%` are
//! comments. Ids may be arbitrary non-negative integers and are densified in
//! first-appearance order, unless the file carries the header comment
//! `# n=<vertices>` written by [`write_edge_list`], in which case ids are
//! taken verbatim and must be below the declared count.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    EdgeList,
    MatrixMarket,
    #[default]
    Auto,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "el" => Ok(GraphFormat::EdgeList),
            "matrix-market" | "mtx" | "mm" => Ok(GraphFormat::MatrixMarket),
            "auto" => Ok(GraphFormat::Auto),
            other => Err(Error::InvalidParameter(format!("unknown graph format '{other}'"))),
        }
    }
}

/// A parsed graph plus the original id of each dense vertex when the file
/// used sparse ids.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub original_ids: Option<Vec<u64>>,
}

pub fn load_graph(path: impl AsRef<Path>, format: GraphFormat) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|f| BufReader::new(f).read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    read_graph(&text, format)
}

pub fn read_graph(text: &str, format: GraphFormat) -> Result<LoadedGraph> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    let Some(first) = first else {
        return Err(Error::EmptyInput("graph file has no content".into()));
    };
    let is_mm = first.starts_with("%%MatrixMarket");
    match format {
        GraphFormat::MatrixMarket => read_matrix_market(text),
        GraphFormat::EdgeList => read_edge_list(text),
        GraphFormat::Auto if is_mm => read_matrix_market(text),
        GraphFormat::Auto => read_edge_list(text),
    }
}

fn parse_id(token: Option<&str>, line: usize) -> Result<u64> {
    let token = token.ok_or_else(|| Error::parse(line, "expected two vertex ids"))?;
    token
        .parse::<u64>()
        .map_err(|_| Error::parse(line, format!("invalid vertex id '{token}'")))
}

fn declared_vertex_count(comment: &str) -> Option<usize> {
    comment
        .trim_start_matches(['#', '%'])
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("n="))
        .and_then(|v| v.parse().ok())
}

fn read_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut declared = None;
    let mut seen_data = false;
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') || line.starts_with('%') {
            if !seen_data && declared.is_none() {
                declared = declared_vertex_count(line);
            }
            continue;
        }
        seen_data = true;
        let mut tokens = line.split_whitespace();
        let u = parse_id(tokens.next(), line_no)?;
        let v = parse_id(tokens.next(), line_no)?;
        raw.push((u, v, line_no));
    }

    if let Some(n) = declared {
        let mut edges = Vec::with_capacity(raw.len());
        for (u, v, line_no) in raw {
            for id in [u, v] {
                if id >= n as u64 {
                    return Err(Error::parse(
                        line_no,
                        format!("vertex id {id} exceeds declared vertex count {n}"),
                    ));
                }
            }
            edges.push((u as u32, v as u32));
        }
        return Ok(LoadedGraph {
            graph: Graph::from_edges(n, edges)?,
            original_ids: None,
        });
    }

    if raw.is_empty() {
        return Err(Error::EmptyInput("edge list contains no edges".into()));
    }
    let mut dense: HashMap<u64, u32> = HashMap::new();
    let mut original = Vec::new();
    let mut intern = |id: u64| {
        *dense.entry(id).or_insert_with(|| {
            original.push(id);
            (original.len() - 1) as u32
        })
    };
    let edges: Vec<_> = raw.into_iter().map(|(u, v, _)| (intern(u), intern(v))).collect();
    let n = original.len();
    let identity = original.iter().enumerate().all(|(i, &id)| id == i as u64);
    Ok(LoadedGraph {
        graph: Graph::from_edges(n, edges)?,
        original_ids: (!identity).then_some(original),
    })
}

fn read_matrix_market(text: &str) -> Result<LoadedGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let banner_ok = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .is_some_and(|(_, l)| l.starts_with("%%MatrixMarket"));
    if !banner_ok {
        return Err(Error::parse(1, "missing %%MatrixMarket banner"));
    }
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));

    let (size_line, size) = body
        .next()
        .ok_or_else(|| Error::EmptyInput("matrix-market file has no size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parse(size_line, "invalid size line"))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(Error::parse(size_line, "size line must be 'rows cols nnz'"));
    };
    let n = rows.max(cols);

    let mut edges = Vec::with_capacity(nnz);
    for (line_no, line) in body {
        let mut tokens = line.split_whitespace();
        let u = parse_id(tokens.next(), line_no)?;
        let v = parse_id(tokens.next(), line_no)?;
        for id in [u, v] {
            if id == 0 || id > n as u64 {
                return Err(Error::parse(
                    line_no,
                    format!("vertex id {id} outside 1..={n}"),
                ));
            }
        }
        edges.push(((u - 1) as u32, (v - 1) as u32));
    }
    if edges.len() != nnz {
        return Err(Error::parse(
            size_line,
            format!("declared {nnz} entries but found {}", edges.len()),
        ));
    }
    Ok(LoadedGraph {
        graph: Graph::from_edges(n, edges)?,
        original_ids: None,
    })
}

/// Writes `g` as an edge list with an `n=` header so isolated vertices and
/// ids survive a reload unchanged.
pub fn write_edge_list<W: Write>(g: &Graph, out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "# n={} m={}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

/// Writes `dense original` pairs, one per line.
pub fn write_id_map<W: Write>(original_ids: &[u64], out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "# dense original")?;
    for (dense, orig) in original_ids.iter().enumerate() {
        writeln!(out, "{dense} {orig}")?;
    }
    out.flush()
}
