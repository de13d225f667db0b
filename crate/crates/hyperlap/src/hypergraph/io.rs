use std::fmt::Write as _;
use std::path::Path;

use super::Hypergraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reads a hypergraph from the text format: a header `n m`, then `m` lines `w k v1 .. vk`.
/// Blank lines and lines starting with `#` are ignored.
pub fn load_hypergraph<T: Scalar>(path: impl AsRef<Path>) -> Result<Hypergraph<T>> {
    let text = std::fs::read_to_string(path)?;
    parse_hypergraph(&text)
}

pub fn parse_hypergraph<T: Scalar>(text: &str) -> Result<Hypergraph<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let head: Vec<usize> = parse_fields(hline, header)?;
    let [n, m] = head[..] else {
        return Err(Error::Parse { line: hline, msg: "header must be `n m`".into() });
    };
    let mut edges = Vec::with_capacity(m);
    for (line, content) in lines {
        if edges.len() == m {
            return Err(Error::Parse { line, msg: format!("more than the declared {m} edges") });
        }
        let mut tokens = content.split_whitespace();
        let weight: f64 = parse_token(line, tokens.next(), "edge weight")?;
        let k: usize = parse_token(line, tokens.next(), "edge size")?;
        let vertices: Vec<usize> = tokens
            .map(|t| t.parse().map_err(|_| Error::Parse { line, msg: format!("bad vertex `{t}`") }))
            .collect::<Result<_>>()?;
        if vertices.len() != k {
            return Err(Error::Parse { line, msg: format!("declared {k} vertices, found {}", vertices.len()) });
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
            return Err(Error::Parse { line, msg: format!("vertex {v} out of range for n = {n}") });
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::invalid(format!("line {line}: edge weight {weight} must be positive")));
        }
        if k == 0 {
            return Err(Error::invalid(format!("line {line}: empty edge")));
        }
        edges.push((vertices, T::of(weight)));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: 0, msg: format!("declared {m} edges, found {}", edges.len()) });
    }
    Hypergraph::new(n, edges)
}

fn parse_fields<F: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<F>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line, msg: format!("bad number `{t}`") }))
        .collect()
}

fn parse_token<F: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<F> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} `{tok}`") })
}

/// Serializes in the format read by [`parse_hypergraph`].
pub fn write_hypergraph<T: Scalar>(h: &Hypergraph<T>) -> String {
    let mut out = format!("{} {}\n", h.n(), h.m());
    for e in h.edges() {
        write!(out, "{} {}", e.weight().f64(), e.len()).unwrap();
        for v in e.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}
