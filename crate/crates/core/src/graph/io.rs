//! Plain-text edge lists: a header line `n m`, then `m` lines `u v` with
//! 0-based vertices. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use super::{Graph, GraphError};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(
                lineno,
                format!("expected two integers, found {:?}", line),
            ));
        }
        let a: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad integer {:?}", fields[0])))?;
        let b: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad integer {:?}", fields[1])))?;
        if header.is_none() {
            header = Some((a, b));
        } else {
            edges.push((a, b));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing \"n m\" header"))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
