//! Line-oriented interchange format for embedded graphs.
//!
//! `N E ; 0: a b c | 1: d e f | ...` with each vertex's neighbors in
//! clockwise order. Lines starting with `#` and blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{canonical_code, is_toroidal_cellular, EmbeddedGraph};
use crate::error::{Error, Result};

pub fn format_graph(g: &EmbeddedGraph) -> String {
    let mut s = format!("{} {} ;", g.n(), g.edge_count());
    for v in 0..g.n() {
        if v > 0 {
            s.push_str(" |");
        }
        write!(s, " {v}:").unwrap();
        for w in g.neighbors(v) {
            write!(s, " {w}").unwrap();
        }
    }
    s
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parse one graph line; `line` is only used for error messages.
pub fn parse_graph(text: &str, line: usize) -> Result<EmbeddedGraph> {
    let (header, body) = text
        .split_once(';')
        .ok_or_else(|| parse_err(line, "missing ';'"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(line, format!("bad integer {t:?}")))
        })
        .collect::<Result<_>>()?;
    let [n, e] = nums[..] else {
        return Err(parse_err(line, "header must be 'N E'"));
    };
    let mut adj = Vec::with_capacity(n);
    for (i, part) in body.split('|').enumerate() {
        let (v, list) = part
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("vertex block {i} lacks ':'")))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| parse_err(line, format!("bad vertex label {:?}", v.trim())))?;
        if v != i {
            return Err(parse_err(line, format!("expected vertex {i}, found {v}")));
        }
        let nbrs = list
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(line, format!("bad neighbor {t:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        adj.push(nbrs);
    }
    if adj.len() != n {
        return Err(parse_err(
            line,
            format!("{} vertex blocks for N = {n}", adj.len()),
        ));
    }
    let g =
        EmbeddedGraph::from_neighbor_lists(&adj).map_err(|err| parse_err(line, err.to_string()))?;
    if g.edge_count() != e {
        return Err(parse_err(
            line,
            format!("{} edges listed, header says {e}", g.edge_count()),
        ));
    }
    Ok(g)
}

/// Parse a whole file. Graphs that are not cellular on the torus are skipped
/// and reported in the second component.
pub fn parse_graphs(text: &str) -> Result<(Vec<EmbeddedGraph>, Vec<String>)> {
    let mut graphs = Vec::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let g = parse_graph(line, i + 1)?;
        if is_toroidal_cellular(&g) {
            graphs.push(g);
        } else {
            warnings.push(format!(
                "line {}: graph is not cellular on the torus, skipped",
                i + 1
            ));
        }
    }
    Ok((graphs, warnings))
}

pub fn load_graphs(path: &Path) -> Result<(Vec<EmbeddedGraph>, Vec<String>)> {
    parse_graphs(&std::fs::read_to_string(path)?)
}

/// Write graphs one per line after an optional comment header. Fails if a
/// graph would not survive the round trip (parallel edges whose pairing the
/// format cannot express).
pub fn save_graphs(graphs: &[EmbeddedGraph], header: &str, path: &Path) -> Result<()> {
    let mut out = String::new();
    for l in header.lines() {
        writeln!(out, "# {l}").unwrap();
    }
    for (i, g) in graphs.iter().enumerate() {
        let line = format_graph(g);
        let back = parse_graph(&line, i + 1)?;
        if canonical_code(&back) != canonical_code(g) {
            return Err(Error::MalformedRotation(format!(
                "graph {i} uses a parallel-edge pairing the interchange format cannot express"
            )));
        }
        out.push_str(&line);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
