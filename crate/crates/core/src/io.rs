//! Line-oriented text formats for graphs and vectors.
//!
//! Graph files:
//!
//! ```text
//! # comment
//! p <n> <m>
//! e <u> <v> <w>      (m lines, 0 <= u < v < n, w > 0)
//! ```
//!
//! Vector files hold one decimal per line in vertex order. Numbers are written
//! in the shortest representation that parses back to the same `f64`, so
//! canonical files survive a read/write round trip byte for byte.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let tag = toks.next().unwrap_or_default();
        match (tag, header) {
            ("p", None) => {
                let n: usize = field(toks.next(), lineno, "vertex count")?;
                let m: usize = field(toks.next(), lineno, "edge count")?;
                if n == 0 {
                    return Err(parse_err(lineno, "vertex count must be positive"));
                }
                header = Some((n, m));
            }
            ("p", Some(_)) => return Err(parse_err(lineno, "duplicate header line")),
            ("e", Some((n, m))) => {
                if edges.len() == m {
                    return Err(parse_err(lineno, format!("more than the declared {m} edges")));
                }
                let u: usize = field(toks.next(), lineno, "endpoint")?;
                let v: usize = field(toks.next(), lineno, "endpoint")?;
                let w: f64 = field(toks.next(), lineno, "weight")?;
                if u == v {
                    return Err(parse_err(lineno, format!("self-loop at vertex {u}")));
                }
                if u > v {
                    return Err(parse_err(
                        lineno,
                        format!("endpoints must satisfy u < v, got {u} {v}"),
                    ));
                }
                if v >= n {
                    return Err(parse_err(lineno, format!("vertex {v} out of range for n = {n}")));
                }
                if !(w.is_finite() && w > 0.0) {
                    return Err(parse_err(lineno, format!("weight must be positive, got {w}")));
                }
                edges.push((lineno, u, v, w));
            }
            ("e", None) => return Err(parse_err(lineno, "edge before header line")),
            _ => return Err(parse_err(lineno, format!("unrecognized line '{line}'"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing 'p' header line"))?;
    if edges.len() != m {
        return Err(parse_err(0, format!("declared {m} edges, found {}", edges.len())));
    }
    let mut seen = std::collections::HashSet::new();
    for &(lineno, u, v, _) in &edges {
        if !seen.insert((u, v)) {
            return Err(parse_err(lineno, format!("duplicate edge ({u},{v})")));
        }
    }
    Graph::new(n, edges.into_iter().map(|(_, u, v, w)| (u, v, w)))
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.w);
    }
    out
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let x: f64 = field(Some(l.trim()), i + 1, "vector entry")?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(parse_err(i + 1, "vector entries must be finite"))
            }
        })
        .collect()
}

pub fn format_vector(x: &[f64]) -> String {
    let mut out = String::with_capacity(x.len() * 20);
    for v in x {
        let _ = writeln!(out, "{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_graph("# path\np 3 2\ne 0 1 1\n\ne 1 2 2.5\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.degrees(), &[1.0, 3.5, 2.5]);
    }

    #[test]
    fn writes_canonical_text() {
        let g = Graph::new(3, [(1, 2, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(format_graph(&g), "p 3 2\ne 0 1 1\ne 1 2 1\n");
        let d = g.demand_graph().unwrap();
        assert_eq!(format_graph(&d), "p 3 3\ne 0 1 0.5\ne 0 2 0.25\ne 1 2 0.5\n");
    }

    #[test]
    fn rejects_bad_files() {
        let cases = [
            "e 0 1 1\n",                 // edge before header
            "p 3 2\ne 0 1 1\ne 0 1 2\n", // duplicate
            "p 3 1\ne 1 1 1\n",          // self-loop
            "p 3 1\ne 0 3 1\n",          // out of range
            "p 3 1\ne 0 1 0\n",          // zero weight
            "p 3 1\ne 0 1 -2\n",         // negative weight
            "p 3 2\ne 0 1 1\n",          // too few edges
            "p 3 1\ne 0 1 1\ne 1 2 1\n", // too many edges
            "p 3 1\ne 1 0 1\n",          // reversed endpoints
            "p 3 1\ne 0 1 1 extra\n",    // trailing tokens
            "p 3 1\nx 0 1 1\n",          // unknown tag
            "",                          // no header
        ];
        for text in cases {
            assert!(
                matches!(parse_graph(text), Err(Error::Parse { .. })),
                "accepted {text:?}"
            );
        }
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1\n0\n-1\n").unwrap(), vec![1.0, 0.0, -1.0]);
        assert_eq!(format_vector(&[1.0, 0.0, -1.0]), "1\n0\n-1\n");
        assert!(parse_vector("1\nabc\n").is_err());
        assert!(parse_vector("inf\n").is_err());
    }
}
