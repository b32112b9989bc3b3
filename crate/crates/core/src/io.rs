//! Text formats: edge lists, node cost files and propagation logs.
//!
//! All three are UTF-8, tab-separated, one record per line. Blank lines and lines starting with
//! `#` are skipped. Labels are arbitrary strings; they are remapped to dense ids in order of
//! first appearance and kept on the graph for output.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphBuilder, NodeId};

#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeListOptions {
    /// Probability for arcs whose line has no third column.
    pub default_prob: Option<f64>,
    /// Add the reverse of every listed arc (undirected inputs).
    pub symmetrize: bool,
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            return None;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        Some((i + 1, fields))
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_edge_list(path: impl AsRef<Path>, opts: EdgeListOptions) -> Result<DirectedGraph> {
    parse_edge_list(&read(path.as_ref())?, opts)
}

pub fn parse_edge_list(text: &str, opts: EdgeListOptions) -> Result<DirectedGraph> {
    let mut b = GraphBuilder::new();
    for (line, fields) in records(text) {
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line,
                msg: format!("expected `src<TAB>dst[<TAB>prob]`, found {} fields", fields.len()),
            });
        }
        let prob = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad probability {s:?}"),
            })?,
            None => opts.default_prob.ok_or(Error::MissingProbability { line })?,
        };
        if !(0.0..=1.0).contains(&prob) {
            return Err(Error::ProbabilityOutOfRange { line, value: prob });
        }
        if fields[0] == fields[1] {
            return Err(Error::SelfLoop { line, node: fields[0].to_string() });
        }
        let u = b.node(fields[0]);
        let v = b.node(fields[1]);
        b.add_arc_at(line, u, v, prob)?;
        if opts.symmetrize {
            b.add_arc_at(line, v, u, prob)?;
        }
    }
    Ok(b.build())
}

/// Writes `src<TAB>dst<TAB>prob` lines using node labels, arcs in id order.
pub fn write_edge_list(g: &DirectedGraph, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "# {} nodes, {} arcs", g.node_count(), g.arc_count())?;
    for a in g.arcs() {
        writeln!(w, "{}\t{}\t{}", g.label(a.tail), g.label(a.head), a.prob)?;
    }
    Ok(())
}

pub fn save_edge_list(g: &DirectedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("write to Vec");
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Applies a `node<TAB>cost` file; nodes not listed keep their current cost.
pub fn load_costs(g: &DirectedGraph, path: impl AsRef<Path>) -> Result<DirectedGraph> {
    parse_costs(g, &read(path.as_ref())?)
}

pub fn parse_costs(g: &DirectedGraph, text: &str) -> Result<DirectedGraph> {
    let ids = g.label_map();
    let mut cost = g.costs().to_vec();
    for (line, fields) in records(text) {
        if fields.len() != 2 {
            return Err(Error::Parse { line, msg: "expected `node<TAB>cost`".into() });
        }
        let id = *ids.get(fields[0]).ok_or_else(|| Error::UnknownNode(fields[0].to_string()))?;
        let c: f64 = fields[1]
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("bad cost {:?}", fields[1]) })?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Parse { line, msg: format!("cost must be positive, got {c}") });
        }
        cost[id.index()] = c;
    }
    g.with_costs(cost)
}

/// One `repost(reposter, source, item, time)` event. A record whose reposter equals its source
/// marks an original post.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepostRecord {
    pub reposter: NodeId,
    pub source: NodeId,
    pub item: String,
    pub time: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropagationLog {
    pub records: Vec<RepostRecord>,
}

pub fn load_propagation_log(g: &DirectedGraph, path: impl AsRef<Path>) -> Result<PropagationLog> {
    parse_propagation_log(g, &read(path.as_ref())?)
}

pub fn parse_propagation_log(g: &DirectedGraph, text: &str) -> Result<PropagationLog> {
    let ids = g.label_map();
    let lookup = |s: &str| ids.get(s).copied().ok_or_else(|| Error::UnknownNode(s.to_string()));
    let mut out = Vec::new();
    for (line, fields) in records(text) {
        if fields.len() != 4 {
            return Err(Error::Parse { line, msg: "expected `reposter<TAB>source<TAB>item<TAB>time`".into() });
        }
        let time = fields[3]
            .parse::<i64>()
            .map_err(|_| Error::Parse { line, msg: format!("bad time {:?}", fields[3]) })?;
        out.push(RepostRecord {
            reposter: lookup(fields[0])?,
            source: lookup(fields[1])?,
            item: fields[2].to_string(),
            time,
        });
    }
    Ok(PropagationLog { records: out })
}
