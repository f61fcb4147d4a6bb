//! Plain-text file formats.
//!
//! Edge list: optional `#` comment lines, a header `n m`, then `m` lines
//! `u v` with `0 <= u, v < n`. Blank lines are ignored.
//!
//! Witness: line 1 is `n`, line 2 the modulator as space-separated ids
//! (possibly empty), then one `u v` line per edge of the root.
//!
//! Metadata: `key=value` lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::ParseError;
use crate::graph::Graph;
use crate::instance::Witness;

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>, ParseError> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| ParseError::syntax(lineno, format!("not a vertex id: {t:?}")))
        })
        .collect()
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_edge_line(g: &mut Graph, line: &str, lineno: usize) -> Result<(), ParseError> {
    let [u, v] = numbers(line, lineno)?[..] else {
        return Err(ParseError::syntax(lineno, "expected two vertex ids"));
    };
    if !g.try_add_edge(u, v)? {
        return Err(ParseError::syntax(lineno, format!("duplicate edge {u} {v}")));
    }
    Ok(())
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let Some((lineno, header)) = lines.next() else {
        return Err(ParseError::syntax(1, "missing `n m` header"));
    };
    let [n, m] = numbers(header, lineno)?[..] else {
        return Err(ParseError::syntax(lineno, "header must be `n m`"));
    };
    let mut g = Graph::new(n);
    let mut last = lineno;
    for (lineno, line) in lines {
        parse_edge_line(&mut g, line, lineno)?;
        last = lineno;
    }
    if g.edge_count() != m {
        return Err(ParseError::syntax(
            last,
            format!("header declares {m} edges, found {}", g.edge_count()),
        ));
    }
    Ok(g)
}

/// Edge list with optional leading comment lines.
pub fn format_edge_list(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{} {}", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_witness(text: &str) -> Result<Witness, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, first) = lines
        .next()
        .ok_or_else(|| ParseError::syntax(1, "missing vertex count"))?;
    let [n] = numbers(first, 1)?[..] else {
        return Err(ParseError::syntax(1, "first line must be the vertex count"));
    };
    let (_, second) = lines.next().unwrap_or((2, ""));
    let modulator = numbers(second, 2)?;
    let mut root = Graph::new(n);
    for (lineno, line) in lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('#')) {
        parse_edge_line(&mut root, line, lineno)?;
    }
    Ok(Witness::new(root, modulator))
}

pub fn format_witness(w: &Witness) -> String {
    let mut out = String::new();
    let s: Vec<String> = w.modulator.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "{}", w.root.vertex_count());
    let _ = writeln!(out, "{}", s.join(" "));
    for (u, v) in w.root.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Whitespace-separated vertex ids, `#` comments allowed.
pub fn parse_vertex_list(text: &str) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in content_lines(text) {
        out.extend(numbers(line, lineno)?);
    }
    Ok(out)
}

pub fn format_metadata<K: AsRef<str>, V: AsRef<str>>(entries: impl IntoIterator<Item = (K, V)>) -> String {
    entries
        .into_iter()
        .map(|(k, v)| format!("{}={}\n", k.as_ref(), v.as_ref()))
        .collect()
}

pub fn parse_metadata(text: &str) -> Result<BTreeMap<String, String>, ParseError> {
    content_lines(text)
        .map(|(lineno, line)| {
            line.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| ParseError::syntax(lineno, "expected key=value"))
        })
        .collect()
}
