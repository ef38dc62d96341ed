//! Text graph files and JSON partition files.

use crate::digraph::{Digraph, GraphError, VertexId, VertexKind};
use crate::partition::Partition;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

pub const PARTITION_FORMAT: &str = "kecc-partition-v1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing `p kec <n> <m>` header")]
    MissingHeader,
    #[error("header declares {declared} edges, file has {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("unsupported partition format `{0}`")]
    UnknownFormat(String),
    #[error("partition blocks do not cover 1..={n} exactly once")]
    BadBlocks { n: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, FormatError> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

/// Parses a graph file. Without `o` lines every vertex is ordinary.
pub fn parse_graph(text: &str) -> Result<Digraph, FormatError> {
    let mut g: Option<Digraph> = None;
    let mut declared = 0;
    let mut total = 0;
    let mut marked: Vec<VertexId> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if g.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                if toks.next() != Some("kec") {
                    return Err(parse_err(line, "expected `p kec <n> <m>`"));
                }
                let n: usize = field(toks.next(), line, "vertex count")?;
                declared = field(toks.next(), line, "edge count")?;
                g = Some(Digraph::with_vertices(n));
            }
            "a" | "o" => {
                let g = g
                    .as_mut()
                    .ok_or_else(|| parse_err(line, "record before header"))?;
                let n = g.vertex_bound();
                let mut vertex = |what: &str| -> Result<VertexId, FormatError> {
                    let v: usize = field(toks.next(), line, what)?;
                    if v == 0 || v > n {
                        return Err(parse_err(line, format!("{what} {v} out of range 1..={n}")));
                    }
                    Ok(v - 1)
                };
                if tag == "o" {
                    marked.push(vertex("vertex")?);
                } else {
                    let u = vertex("tail")?;
                    let v = vertex("head")?;
                    let mult: usize = field(toks.next(), line, "multiplicity")?;
                    g.add_edge(u, v, mult)
                        .map_err(|e| parse_err(line, e.to_string()))?;
                    total += mult;
                }
            }
            other => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing fields"));
        }
    }
    let mut g = g.ok_or(FormatError::MissingHeader)?;
    if total != declared {
        return Err(FormatError::EdgeCount {
            declared,
            found: total,
        });
    }
    if !marked.is_empty() {
        for v in 0..g.vertex_bound() {
            g.set_kind(v, VertexKind::AuxOther);
        }
        for v in marked {
            g.set_kind(v, VertexKind::Ordinary);
        }
    }
    Ok(g)
}

/// Writes live vertices densely renumbered, parallel edges grouped into one
/// arc line, and `o` lines only when some vertex is auxiliary.
pub fn write_graph(g: &Digraph, comment: Option<&str>) -> String {
    let (h, _) = g.compact();
    let mut arcs: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for e in h.edges() {
        *arcs.entry((h.tail(e), h.head(e))).or_default() += 1;
    }
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(out, "c {l}");
        }
    }
    let _ = writeln!(out, "p kec {} {}", h.vertex_bound(), h.m_live());
    for ((u, v), mult) in arcs {
        let _ = writeln!(out, "a {} {} {}", u + 1, v + 1, mult);
    }
    if h.vertices().any(|v| !h.is_ordinary(v)) {
        for v in h.ordinary_vertices() {
            let _ = writeln!(out, "o {}", v + 1);
        }
    }
    out
}

/// JSON partition file; vertex ids are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub format: String,
    pub n: usize,
    pub k: usize,
    pub mode: String,
    pub seed: u64,
    pub delta: f64,
    pub blocks: Vec<Vec<usize>>,
    pub ordinary: Vec<usize>,
}

impl PartitionFile {
    pub fn new(
        p: &Partition,
        ordinary: &[VertexId],
        k: usize,
        mode: &str,
        seed: u64,
        delta: f64,
    ) -> Self {
        let blocks = p
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|v| v + 1).collect())
            .collect();
        let mut ordinary: Vec<usize> = ordinary.iter().map(|v| v + 1).collect();
        ordinary.sort_unstable();
        Self {
            format: PARTITION_FORMAT.into(),
            n: p.len(),
            k,
            mode: mode.into(),
            seed,
            delta,
            blocks,
            ordinary,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let f: PartitionFile = serde_json::from_str(text)?;
        if f.format != PARTITION_FORMAT {
            return Err(FormatError::UnknownFormat(f.format));
        }
        f.partition()?;
        Ok(f)
    }

    /// Zero-based partition; blocks must cover 1..=n exactly once.
    pub fn partition(&self) -> Result<Partition, FormatError> {
        let mut seen = vec![false; self.n];
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let mut zb = Vec::with_capacity(b.len());
            for &v in b {
                if v == 0 || v > self.n || seen[v - 1] {
                    return Err(FormatError::BadBlocks { n: self.n });
                }
                seen[v - 1] = true;
                zb.push(v - 1);
            }
            blocks.push(zb);
        }
        if seen.iter().any(|s| !s) {
            return Err(FormatError::BadBlocks { n: self.n });
        }
        Ok(Partition::from_blocks(self.n, &blocks))
    }

    /// Blocks restricted to the ordinary vertices (1-based), by smallest member.
    pub fn ordinary_blocks(&self) -> Result<Vec<Vec<usize>>, FormatError> {
        let p = self.partition()?;
        let ord: Vec<VertexId> = self.ordinary.iter().map(|v| v - 1).collect();
        Ok(p.restricted_blocks(&ord)
            .into_iter()
            .map(|b| b.into_iter().map(|v| v + 1).collect())
            .collect())
    }
}
