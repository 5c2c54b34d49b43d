//! `radiograph v1` edge-list files.
//!
//! ```text
//! radiograph v1 <n> <m>
//! <u> <v>            (m lines, edge u -> v)
//! # label <node> <role>
//! ```

use std::io::{BufRead, Write};

use super::{DirectedGraph, Role};
use crate::{Error, NodeId, Result};

pub const GRAPH_HEADER: &str = "radiograph";
const VERSION: &str = "v1";

pub fn write_graph<W: Write>(g: &DirectedGraph, mut w: W) -> Result<()> {
    writeln!(w, "{GRAPH_HEADER} {VERSION} {} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    for (node, role) in g.labels() {
        writeln!(w, "# label {node} {role}")?;
    }
    w.flush()?;
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what}")))
}

pub fn read_graph<R: BufRead>(r: R) -> Result<DirectedGraph> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty graph file"))?;
    let header = header?;
    let mut toks = header.split_whitespace();
    match (toks.next(), toks.next()) {
        (Some(GRAPH_HEADER), Some(VERSION)) => {}
        (Some(GRAPH_HEADER), v) => {
            return Err(Error::VersionMismatch {
                expected: format!("{GRAPH_HEADER} {VERSION}"),
                found: format!("{GRAPH_HEADER} {}", v.unwrap_or("")),
            })
        }
        _ => return Err(parse_err(1, format!("not a radiograph file: {header:?}"))),
    }
    let n: usize = parse_num(toks.next(), 1, "node count")?;
    let m: usize = parse_num(toks.next(), 1, "edge count")?;
    if n == 0 {
        return Err(Error::EmptyGraph);
    }

    let mut g = DirectedGraph::empty(n);
    let mut seen = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut toks = rest.split_whitespace();
            if toks.next() == Some("label") {
                let node: NodeId = parse_num(toks.next(), lineno, "label node")?;
                let role: Role = toks
                    .next()
                    .ok_or_else(|| parse_err(lineno, "missing role"))?
                    .parse()
                    .map_err(|e: String| parse_err(lineno, e))?;
                g.set_label(node, role)?;
            }
            continue;
        }
        let mut toks = line.split_whitespace();
        let u: NodeId = parse_num(toks.next(), lineno, "source id")?;
        let v: NodeId = parse_num(toks.next(), lineno, "target id")?;
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
        g.try_add_edge(u, v).map_err(|e| parse_err(lineno, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(1, format!("header declares {m} edges, found {seen}")));
    }
    Ok(g)
}
