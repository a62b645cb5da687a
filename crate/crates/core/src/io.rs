//! Text formats for graphs, Steiner trees and Gomory-Hu trees.
//!
//! Graph (DIMACS-like, 0-based ids):
//!
//! ```text
//! p <n> <m>
//! e <u> <v> <w>     (m lines, w >= 1)
//! ```
//!
//! Tree: `t <k>`, then `k - 1` lines `e <u> <v>` and one line `s <source>`.
//! A Gomory-Hu tree adds one `w <v> <weight>` line per non-root vertex,
//! where the edge `e <v> <parent>` is listed with the child first.
//!
//! Blank lines and lines starting with `c` are ignored everywhere.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gomory_hu::GHTree;
use crate::graph::{Edge, Graph};
use crate::steiner::SteinerTree;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Dimacs,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dimacs" => Ok(Format::Dimacs),
            "json" => Ok(Format::Json),
            other => Err(invalid(format!("unknown format {other:?}, expected dimacs or json"))),
        }
    }
}

/// JSON shape of a graph file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub m: usize,
    pub edges: Vec<Edge>,
}

/// JSON shape of a tree file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub k: usize,
    pub source: usize,
    pub edges: Vec<(usize, usize)>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-comment lines, numbered from 1, split into a tag and its fields.
fn records(text: &str) -> impl Iterator<Item = (usize, &str, Vec<&str>)> + '_ {
    text.lines().enumerate().filter_map(|(i, line)| {
        let mut parts = line.split_whitespace();
        let tag = parts.next()?;
        (tag != "c").then(|| (i + 1, tag, parts.collect()))
    })
}

fn fields<const N: usize>(line: usize, tag: &str, raw: &[&str]) -> Result<[u64; N]> {
    if raw.len() != N {
        return Err(parse_err(line, format!("'{tag}' expects {N} fields, found {}", raw.len())));
    }
    let mut out = [0u64; N];
    for (slot, s) in out.iter_mut().zip(raw) {
        *slot = s.parse().map_err(|_| parse_err(line, format!("not a non-negative integer: {s:?}")))?;
    }
    Ok(out)
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph> {
    match format {
        Format::Json => {
            let file: GraphFile = serde_json::from_str(text)?;
            if file.m != file.edges.len() {
                return Err(invalid(format!(
                    "header declares {} edges but {} were given",
                    file.m,
                    file.edges.len()
                )));
            }
            if let Some(e) = file.edges.iter().find(|e| e.w == 0) {
                return Err(invalid(format!("edge ({}, {}) has weight 0", e.u, e.v)));
            }
            Graph::new(file.n, file.edges.iter().map(|e| (e.u, e.v, e.w)))
        }
        Format::Dimacs => {
            let mut header: Option<(usize, usize, usize)> = None;
            let mut edges = Vec::new();
            let mut last_line = 0;
            for (line, tag, raw) in records(text) {
                last_line = line;
                match tag {
                    "p" => {
                        if header.is_some() {
                            return Err(parse_err(line, "second 'p' header"));
                        }
                        let [n, m] = fields::<2>(line, tag, &raw)?;
                        header = Some((n as usize, m as usize, line));
                    }
                    "e" => {
                        let Some((n, _, _)) = header else {
                            return Err(parse_err(line, "edge before the 'p' header"));
                        };
                        let [u, v, w] = fields::<3>(line, tag, &raw)?;
                        let (u, v) = (u as usize, v as usize);
                        if w == 0 {
                            return Err(parse_err(line, "edge weight must be at least 1, found 0"));
                        }
                        if u >= n || v >= n {
                            return Err(parse_err(line, format!("edge ({u}, {v}) outside 0..{n}")));
                        }
                        edges.push((u, v, w));
                    }
                    other => return Err(parse_err(line, format!("unknown record type {other:?}"))),
                }
            }
            let (n, m, hline) = header.ok_or_else(|| parse_err(last_line.max(1), "missing 'p' header"))?;
            if m != edges.len() {
                return Err(parse_err(
                    hline,
                    format!("header declares {m} edges but the file has {}", edges.len()),
                ));
            }
            Graph::new(n, edges)
        }
    }
}

pub fn write_graph(g: &Graph, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let file = GraphFile { n: g.n(), m: g.m(), edges: g.edges().to_vec() };
            Ok(serde_json::to_string_pretty(&file)? + "\n")
        }
        Format::Dimacs => {
            let mut out = format!("p {} {}\n", g.n(), g.m());
            for e in g.edges() {
                let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.w);
            }
            Ok(out)
        }
    }
}

pub fn load_graph(path: impl AsRef<Path>, format: Format) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?, format)
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>, format: Format) -> Result<()> {
    std::fs::write(path, write_graph(g, format)?)?;
    Ok(())
}

pub fn parse_tree(text: &str, format: Format) -> Result<SteinerTree> {
    let file = match format {
        Format::Json => serde_json::from_str::<TreeFile>(text)?,
        Format::Dimacs => {
            let mut k = None;
            let mut source = None;
            let mut edges = Vec::new();
            let mut last_line = 0;
            for (line, tag, raw) in records(text) {
                last_line = line;
                match tag {
                    "t" => k = Some(fields::<1>(line, tag, &raw)?[0] as usize),
                    "s" => source = Some(fields::<1>(line, tag, &raw)?[0] as usize),
                    "e" => {
                        let [u, v] = fields::<2>(line, tag, &raw)?;
                        edges.push((u as usize, v as usize));
                    }
                    "w" => {}
                    other => return Err(parse_err(line, format!("unknown record type {other:?}"))),
                }
            }
            let line = last_line.max(1);
            TreeFile {
                k: k.ok_or_else(|| parse_err(line, "missing 't' header"))?,
                source: source.ok_or_else(|| parse_err(line, "missing 's' line"))?,
                edges,
            }
        }
    };
    tree_from_file(file)
}

fn tree_from_file(file: TreeFile) -> Result<SteinerTree> {
    if file.edges.len() + 1 != file.k {
        return Err(invalid(format!(
            "tree header declares {} vertices but lists {} edges",
            file.k,
            file.edges.len()
        )));
    }
    let mut vertices: Vec<usize> = file.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    vertices.push(file.source);
    SteinerTree::new(vertices, file.edges, file.source)
}

pub fn write_tree(t: &SteinerTree, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let file = TreeFile { k: t.len(), source: t.source(), edges: t.edges().to_vec() };
            Ok(serde_json::to_string_pretty(&file)? + "\n")
        }
        Format::Dimacs => {
            let mut out = format!("t {}\n", t.len());
            for &(u, v) in t.edges() {
                let _ = writeln!(out, "e {u} {v}");
            }
            let _ = writeln!(out, "s {}", t.source());
            Ok(out)
        }
    }
}

pub fn load_tree(path: impl AsRef<Path>, format: Format) -> Result<SteinerTree> {
    parse_tree(&std::fs::read_to_string(path)?, format)
}

pub fn write_gh_tree(t: &GHTree, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(t)? + "\n"),
        Format::Dimacs => {
            let mut out = format!("t {}\n", t.n());
            for (v, p) in t.parent.iter().enumerate() {
                if let Some(p) = p {
                    let _ = writeln!(out, "e {v} {p}");
                }
            }
            let root = t.parent.iter().position(Option::is_none).unwrap_or(0);
            let _ = writeln!(out, "s {root}");
            for (v, p) in t.parent.iter().enumerate() {
                if p.is_some() {
                    let _ = writeln!(out, "w {v} {}", t.weight[v]);
                }
            }
            Ok(out)
        }
    }
}

pub fn parse_gh_tree(text: &str, format: Format) -> Result<GHTree> {
    let t = match format {
        Format::Json => serde_json::from_str::<GHTree>(text)?,
        Format::Dimacs => {
            let mut n = None;
            let mut root = None;
            let mut edges = Vec::new();
            let mut weights = Vec::new();
            for (line, tag, raw) in records(text) {
                match tag {
                    "t" => n = Some(fields::<1>(line, tag, &raw)?[0] as usize),
                    "s" => root = Some(fields::<1>(line, tag, &raw)?[0] as usize),
                    "e" => {
                        let [v, p] = fields::<2>(line, tag, &raw)?;
                        edges.push((line, v as usize, p as usize));
                    }
                    "w" => {
                        let [v, w] = fields::<2>(line, tag, &raw)?;
                        weights.push((line, v as usize, w));
                    }
                    other => return Err(parse_err(line, format!("unknown record type {other:?}"))),
                }
            }
            let n = n.ok_or_else(|| invalid("missing 't' header"))?;
            let root = root.ok_or_else(|| invalid("missing 's' line"))?;
            let mut parent = vec![None; n];
            let mut weight = vec![0u64; n];
            for (line, v, p) in edges {
                if v >= n || p >= n || v == root {
                    return Err(parse_err(line, format!("bad tree edge {v} -> {p}")));
                }
                parent[v] = Some(p);
            }
            for (line, v, w) in weights {
                if v >= n || parent[v].is_none() {
                    return Err(parse_err(line, format!("weight for {v}, which has no parent edge")));
                }
                weight[v] = w;
            }
            GHTree { parent, weight }
        }
    };
    t.validate()?;
    Ok(t)
}
