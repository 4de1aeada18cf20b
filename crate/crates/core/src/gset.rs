// SPDX-License-Identifier: Apache-2.0
//! G-set benchmark files and instance registry.
//!
//! Files use the community format: a header `N M` followed by `M` lines
//! `u v w` with 1-based node indices. Blank lines and lines starting with
//! `#` or `c` are skipped.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::WeightedGraph;
use crate::rng::BitStream;

/// Environment variable naming a directory of G-set files.
pub const GSET_DIR_ENV: &str = "SSQA_GSET_DIR";

fn is_skipped(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#') || t.starts_with('c')
}

fn parse_fields<const K: usize>(line: &str, lineno: usize) -> Result<[i64; K]> {
    let mut out = [0i64; K];
    let mut it = line.split_whitespace();
    for slot in out.iter_mut() {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("expected {K} integers"),
        })?;
        *slot = tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("`{tok}` is not an integer"),
        })?;
    }
    if let Some(extra) = it.next() {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("unexpected trailing token `{extra}`"),
        });
    }
    Ok(out)
}

pub fn parse_gset(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !is_skipped(l));
    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let [n, m] = parse_fields::<2>(header, header_line)?;
    if n < 1 || m < 0 {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("invalid header `{n} {m}`"),
        });
    }
    let (n, m) = (n as usize, m as usize);

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last_line = header_line;
    for (lineno, line) in lines {
        last_line = lineno;
        if edges.len() == m {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("more than the {m} edges declared in the header"),
            });
        }
        let [u, v, w] = parse_fields::<3>(line, lineno)?;
        for x in [u, v] {
            if x < 1 || x as usize > n {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("node {x} outside 1..={n}"),
                });
            }
        }
        if u == v {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("self-loop on node {u}"),
            });
        }
        let (a, b) = ((u.min(v) - 1) as usize, (u.max(v) - 1) as usize);
        if !seen.insert((a, b)) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("duplicate edge {u} {v}"),
            });
        }
        edges.push((a, b, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("header declares {m} edges but {} were found", edges.len()),
        });
    }
    WeightedGraph::new(n, edges)
}

pub fn read_gset(path: &Path) -> Result<WeightedGraph> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_gset(&text)
}

/// Writes the graph back in G-set format with 1-based indices.
/// A `rows × cols` 2-D torus with uniformly random ±1 weights, the same
/// family as G11–G13 (`2·rows·cols` edges). Rows and columns must be ≥ 3.
pub fn toroidal_grid(rows: usize, cols: usize, seed: u64) -> Result<WeightedGraph> {
    if rows < 3 || cols < 3 {
        return Err(Error::Config(format!(
            "torus needs at least 3x3 nodes, got {rows}x{cols}"
        )));
    }
    let mut bits = BitStream::for_stream(seed, 0);
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            edges.push((id(r, c), id(r, (c + 1) % cols), bits.next_sign() as i64));
            edges.push((id(r, c), id((r + 1) % rows, c), bits.next_sign() as i64));
        }
    }
    WeightedGraph::new(rows * cols, edges)
}

pub fn write_gset(graph: &WeightedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", graph.n_nodes(), graph.edges().len()).unwrap();
    for e in graph.edges() {
        writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.w).unwrap();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Toroidal,
    Planar,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightDomain {
    /// Weights in {+1, -1}.
    PlusMinusOne,
    /// Weights all +1.
    PlusOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsetRecord {
    pub name: String,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub structure: Structure,
    pub weights: WeightDomain,
    pub best_known_cut: i64,
}

const REGISTRY: [(&str, usize, usize, Structure, WeightDomain, i64); 5] = [
    (
        "G11",
        800,
        1600,
        Structure::Toroidal,
        WeightDomain::PlusMinusOne,
        564,
    ),
    (
        "G12",
        800,
        1600,
        Structure::Toroidal,
        WeightDomain::PlusMinusOne,
        566,
    ),
    (
        "G13",
        800,
        1600,
        Structure::Toroidal,
        WeightDomain::PlusMinusOne,
        582,
    ),
    (
        "G14",
        800,
        4694,
        Structure::Planar,
        WeightDomain::PlusOne,
        3064,
    ),
    (
        "G15",
        800,
        4661,
        Structure::Planar,
        WeightDomain::PlusOne,
        3050,
    ),
];

pub fn registry() -> Vec<GsetRecord> {
    REGISTRY
        .iter()
        .map(
            |&(name, n_nodes, n_edges, structure, weights, best)| GsetRecord {
                name: name.to_string(),
                n_nodes,
                n_edges,
                structure,
                weights,
                best_known_cut: best,
            },
        )
        .collect()
}

/// Case-insensitive lookup by instance name.
pub fn registry_lookup(name: &str) -> Result<GsetRecord> {
    registry()
        .into_iter()
        .find(|r| r.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Lookup(name.to_string()))
}

/// Registry as a JSON array of `{name, nodes, edges, best_value, structure, weights}`.
pub fn registry_json() -> serde_json::Value {
    serde_json::Value::Array(
        registry()
            .into_iter()
            .map(|r| {
                serde_json::json!({
                    "name": r.name,
                    "nodes": r.n_nodes,
                    "edges": r.n_edges,
                    "best_value": r.best_known_cut,
                    "structure": r.structure,
                    "weights": r.weights,
                })
            })
            .collect(),
    )
}

/// Checks a parsed graph against its registry row.
pub fn check_against_record(graph: &WeightedGraph, record: &GsetRecord) -> Result<()> {
    if graph.n_nodes() != record.n_nodes || graph.edges().len() != record.n_edges {
        return Err(Error::Integrity(format!(
            "{}: expected {} nodes / {} edges, file has {} / {}",
            record.name,
            record.n_nodes,
            record.n_edges,
            graph.n_nodes(),
            graph.edges().len()
        )));
    }
    let ok = graph.edges().iter().all(|e| match record.weights {
        WeightDomain::PlusMinusOne => e.w == 1 || e.w == -1,
        WeightDomain::PlusOne => e.w == 1,
    });
    if !ok {
        return Err(Error::Integrity(format!(
            "{}: weights outside {:?}",
            record.name, record.weights
        )));
    }
    Ok(())
}

/// Candidate locations for a registry instance file inside `dir`.
fn candidates(dir: &Path, name: &str) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for stem in [
        name.to_string(),
        name.to_ascii_lowercase(),
        name.to_ascii_uppercase(),
    ] {
        for ext in ["", ".txt", ".rud", ".gset"] {
            out.push(dir.join(format!("{stem}{ext}")));
        }
    }
    out
}

/// Directories searched for registry instances: `$SSQA_GSET_DIR`, then
/// `data/gset` relative to the working directory.
pub fn search_dirs() -> Vec<PathBuf> {
    let mut dirs = Vec::new();
    if let Some(d) = std::env::var_os(GSET_DIR_ENV) {
        dirs.push(PathBuf::from(d));
    }
    dirs.push(PathBuf::from("data/gset"));
    dirs
}

/// Finds the file for a registry instance, if present in a search directory.
pub fn locate_instance(name: &str) -> Option<PathBuf> {
    search_dirs()
        .iter()
        .flat_map(|d| candidates(d, name))
        .find(|p| p.is_file())
}

/// A loaded instance: the graph plus its registry row when it has one.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: WeightedGraph,
    pub record: Option<GsetRecord>,
}

/// Resolves `source` as a file path, or as a registry name searched in
/// [`search_dirs`]. Registry instances are checked against their row.
pub fn load_instance(source: &str) -> Result<Instance> {
    let path = Path::new(source);
    if path.is_file() {
        let graph = read_gset(path)?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or(source)
            .to_string();
        let record = registry_lookup(&stem).ok();
        if let Some(r) = &record {
            check_against_record(&graph, r)?;
        }
        return Ok(Instance {
            name: stem,
            graph,
            record,
        });
    }
    let record = registry_lookup(source)
        .map_err(|_| Error::Io(format!("no such file or registry instance `{source}`")))?;
    let file = locate_instance(&record.name).ok_or_else(|| {
        Error::Io(format!(
            "instance {} not found; place the G-set file in data/gset/ or set {GSET_DIR_ENV}",
            record.name
        ))
    })?;
    let graph = read_gset(&file)?;
    check_against_record(&graph, &record)?;
    Ok(Instance {
        name: record.name.clone(),
        graph,
        record: Some(record),
    })
}
