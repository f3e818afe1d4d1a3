//! Plain-text graph format in the style of DIMACS shortest-path files.
//!
//! ```text
//! c optional comments
//! p <n> <m>
//! a <u> <v> <w>      (m arc lines, 1-indexed endpoints)
//! ```
//!
//! The header may also be written `p sp <n> <m>`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, Length, VertexId};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn number<T: std::str::FromStr>(token: Option<&str>, what: &str, line: usize) -> Result<T> {
    let token = token.ok_or_else(|| parse_error(line, format!("missing {what}")))?;
    token.parse().map_err(|_| parse_error(line, format!("invalid {what} `{token}`")))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs: Vec<(VertexId, VertexId, Length)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        match tokens.next() {
            None | Some("c") => {}
            Some("p") => {
                if header.is_some() {
                    return Err(parse_error(line, "duplicate `p` line"));
                }
                let mut first = tokens.next();
                if first == Some("sp") {
                    first = tokens.next();
                }
                let n = number(first, "vertex count", line)?;
                let m = number(tokens.next(), "edge count", line)?;
                header = Some((n, m));
                arcs.reserve(m);
            }
            Some("a") => {
                let (n, _) = header.ok_or_else(|| parse_error(line, "arc before `p` line"))?;
                let u: usize = number(tokens.next(), "source", line)?;
                let v: usize = number(tokens.next(), "target", line)?;
                let w: i128 = number(tokens.next(), "weight", line)?;
                for id in [u, v] {
                    if id == 0 || id > n {
                        return Err(parse_error(line, format!("vertex {id} outside 1..={n}")));
                    }
                }
                if w < 0 {
                    return Err(parse_error(line, format!("negative weight {w}")));
                }
                let w = Length::try_from(w)
                    .map_err(|_| parse_error(line, format!("weight {w} too large")))?;
                arcs.push((u - 1, v - 1, w));
            }
            Some(other) => {
                return Err(parse_error(line, format!("unknown line type `{other}`")));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_error(0, "missing `p` line"))?;
    if arcs.len() != m {
        return Err(parse_error(0, format!("header declares {m} arcs, found {}", arcs.len())));
    }
    Graph::new(n, arcs)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Serializes every edge and self-loop; `parse_graph` inverts this exactly.
pub fn format_graph(g: &Graph) -> String {
    let mut out = String::new();
    let arcs = g.m() + g.self_loops().len();
    writeln!(out, "p {} {}", g.n(), arcs).unwrap();
    for e in g.edges() {
        writeln!(out, "a {} {} {}", e.from + 1, e.to + 1, e.weight).unwrap();
    }
    for &(v, w) in g.self_loops() {
        writeln!(out, "a {} {} {}", v + 1, v + 1, w).unwrap();
    }
    out
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_graph(g))?;
    Ok(())
}
