//! Coloring certificates: one line `u v c` per edge, 0-based vertices and a
//! 1-based color. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use super::{ArrowingError, EdgeColoring};
use crate::graph::Graph;

pub fn write_certificate(g: &Graph, c: &EdgeColoring) -> String {
    let mut out = String::with_capacity(g.m() * 8);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(out, "{u} {v} {}", c.color(e)).unwrap();
    }
    out
}

pub fn parse_certificate(g: &Graph, text: &str) -> Result<EdgeColoring, ArrowingError> {
    let err = |line: usize, message: String| ArrowingError::Certificate { line, message };
    let mut colors = vec![0u8; g.m()];
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(lineno, format!("expected \"u v c\", found {line:?}")));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(lineno, format!("bad integer {s:?}")))
        };
        let (u, v, c) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
        let e = g
            .edge_index(u, v)
            .ok_or_else(|| err(lineno, format!("({u}, {v}) is not an edge of the graph")))?;
        if c == 0 || c > u8::MAX as usize {
            return Err(err(lineno, format!("color {c} out of range")));
        }
        if colors[e] != 0 {
            return Err(err(lineno, format!("edge ({u}, {v}) colored twice")));
        }
        colors[e] = c as u8;
    }
    if let Some(e) = colors.iter().position(|&c| c == 0) {
        let (u, v) = g.edges()[e];
        return Err(ArrowingError::MissingEdge(u, v));
    }
    Ok(EdgeColoring::new(colors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let k4 = Graph::complete(4).unwrap();
        let c = EdgeColoring::new(vec![1, 2, 3, 1, 2, 3]);
        let text = write_certificate(&k4, &c);
        assert!(text.starts_with("0 1 1\n0 2 2\n"));
        assert_eq!(parse_certificate(&k4, &text).unwrap(), c);
        // order and endpoint orientation do not matter
        let shuffled = "# reversed\n3 2 3\n1 0 1\n0 2 2\n0 3 3\n1 2 1\n\n1 3 2\n";
        assert_eq!(parse_certificate(&k4, shuffled).unwrap(), c);
    }

    #[test]
    fn malformed_certificates() {
        let k3 = Graph::complete(3).unwrap();
        assert!(matches!(
            parse_certificate(&k3, "0 1 1\n0 2 1\n"),
            Err(ArrowingError::MissingEdge(1, 2))
        ));
        assert!(matches!(
            parse_certificate(&k3, "0 1 1\n0 1 2\n0 2 1\n1 2 1\n"),
            Err(ArrowingError::Certificate { line: 2, .. })
        ));
        assert!(matches!(
            parse_certificate(&k3, "0 3 1\n"),
            Err(ArrowingError::Certificate { line: 1, .. })
        ));
        assert!(matches!(
            parse_certificate(&k3, "0 1 0\n"),
            Err(ArrowingError::Certificate { line: 1, .. })
        ));
        assert!(matches!(
            parse_certificate(&k3, "0 1\n"),
            Err(ArrowingError::Certificate { line: 1, .. })
        ));
    }
}
