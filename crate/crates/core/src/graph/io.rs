//! Edge-list and label file formats.
//!
//! Graph files: a header line `n m`, then `m` lines `u v` (0-indexed).
//! Label files: one label per line, line `i` labelling vertex `i`.

use std::fmt::Write as _;

use thiserror::Error;

use super::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), ParseError> {
    let mut parts = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize, ParseError> {
        let tok = parts
            .next()
            .ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
        tok.parse().map_err(|_| {
            ParseError::new(
                line,
                format!("{what} `{tok}` is not a non-negative integer"),
            )
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if parts.next().is_some() {
        return Err(ParseError::new(line, "expected exactly two fields"));
    }
    Ok((a, b))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "missing `n m` header"))?;
    let (n, m) = parse_pair(hline, header)?;
    let mut g = Graph::new(n);
    let mut last = hline;
    for (line, body) in lines.by_ref().take(m) {
        let (u, v) = parse_pair(line, body)?;
        if u >= n || v >= n {
            return Err(ParseError::new(
                line,
                format!("endpoint out of range for n = {n}"),
            ));
        }
        g.add_edge(u, v);
        last = line;
    }
    if g.m() != m {
        return Err(ParseError::new(
            last + 1,
            format!("expected {m} edges, found {}", g.m()),
        ));
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::new(
            line,
            "trailing content after the declared edges",
        ));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_labels(text: &str) -> Result<Vec<usize>, ParseError> {
    content_lines(text)
        .map(|(line, body)| {
            body.parse().map_err(|_| {
                ParseError::new(
                    line,
                    format!("label `{body}` is not a non-negative integer"),
                )
            })
        })
        .collect()
}

pub fn write_labels(labels: &[usize]) -> String {
    let mut out = String::new();
    for l in labels {
        let _ = writeln!(out, "{l}");
    }
    out
}
