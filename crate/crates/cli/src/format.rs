//! Text formats for graphs and models.
//!
//! Graph: `p <n> <m>`, optionally `b <a>` (the first `a` vertices form
//! side A), then `m` lines `e <u> <v>` with `u < v` in lexicographic
//! order. Model: `model <k>` then `k` lines `f <i> <v1> <v2> ...` with
//! sorted vertex lists.

use std::fmt::{self, Write as _};

use minorforge::{Graph, MinorModel, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// A parsed graph file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    /// Size of side A when the header declares a bipartition.
    pub side_a: Option<usize>,
}

impl GraphFile {
    pub fn sides(&self) -> Option<(VertexSet, VertexSet)> {
        let a = self.side_a?;
        Some(((0..a).collect(), (a..self.graph.n()).collect()))
    }
}

pub fn write_graph(g: &Graph, side_a: Option<usize>) -> String {
    let mut out = format!("p {} {}\n", g.n(), g.m());
    if let Some(a) = side_a {
        writeln!(out, "b {a}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

/// Lines with their 1-based numbers, skipping blanks and `c` comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, w)| !w.is_empty() && w[0] != "c")
}

fn number(line: usize, word: &str) -> Result<usize, ParseError> {
    word.parse()
        .or_else(|_| err(line, format!("`{word}` is not a nonnegative integer")))
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut lines = content_lines(text).peekable();
    let Some((ln, head)) = lines.next() else {
        return err(1, "missing `p <n> <m>` header");
    };
    if head.len() != 3 || head[0] != "p" {
        return err(ln, "expected `p <n> <m>`");
    }
    let n = number(ln, head[1])?;
    let m = number(ln, head[2])?;
    let mut side_a = None;
    if let Some((ln, w)) = lines.peek() {
        if w[0] == "b" {
            if w.len() != 2 {
                return err(*ln, "expected `b <a>`");
            }
            let a = number(*ln, w[1])?;
            if a > n {
                return err(*ln, format!("side of size {a} in a graph on {n} vertices"));
            }
            side_a = Some(a);
            lines.next();
        }
    }
    let mut edges = Vec::with_capacity(m);
    let mut last: Option<(usize, usize)> = None;
    for (ln, w) in lines {
        if w.len() != 3 || w[0] != "e" {
            return err(ln, "expected `e <u> <v>`");
        }
        let (u, v) = (number(ln, w[1])?, number(ln, w[2])?);
        if u == v {
            return err(ln, format!("loop at {u}"));
        }
        if u > v {
            return err(ln, format!("edge {u} {v} must list the smaller endpoint first"));
        }
        if v >= n {
            return err(ln, format!("vertex {v} out of range for {n} vertices"));
        }
        match last {
            Some(prev) if prev == (u, v) => return err(ln, format!("duplicate edge {u} {v}")),
            Some(prev) if prev > (u, v) => return err(ln, format!("edge {u} {v} is out of order")),
            _ => {}
        }
        last = Some((u, v));
        edges.push((u, v));
    }
    if edges.len() != m {
        return err(1, format!("header declares {m} edges, found {}", edges.len()));
    }
    let graph = Graph::from_edges(n, edges).map_err(|e| ParseError {
        line: 1,
        msg: e.to_string(),
    })?;
    Ok(GraphFile { graph, side_a })
}

pub fn write_model(m: &MinorModel) -> String {
    let mut out = format!("model {}\n", m.len());
    for (i, f) in m.fragments.iter().enumerate() {
        write!(out, "f {i}").unwrap();
        for v in f {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_model(text: &str) -> Result<MinorModel, ParseError> {
    let mut lines = content_lines(text);
    let Some((ln, head)) = lines.next() else {
        return err(1, "missing `model <k>` header");
    };
    if head.len() != 2 || head[0] != "model" {
        return err(ln, "expected `model <k>`");
    }
    let k = number(ln, head[1])?;
    let mut fragments = Vec::with_capacity(k);
    for (ln, w) in lines {
        if w.len() < 2 || w[0] != "f" {
            return err(ln, "expected `f <i> <v1> ...`");
        }
        let i = number(ln, w[1])?;
        if i != fragments.len() {
            return err(ln, format!("fragment {i} where {} was expected", fragments.len()));
        }
        let vs = w[2..].iter().map(|x| number(ln, x)).collect::<Result<Vec<_>, _>>()?;
        if vs.windows(2).any(|p| p[0] >= p[1]) {
            return err(ln, "fragment vertices must be strictly increasing");
        }
        fragments.push(vs.into_iter().collect::<VertexSet>());
    }
    if fragments.len() != k {
        return err(1, format!("header declares {k} fragments, found {}", fragments.len()));
    }
    Ok(MinorModel::new(fragments))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_text() {
        let text = write_graph(&Graph::complete(3), None);
        assert_eq!(text, "p 3 3\ne 0 1\ne 0 2\ne 1 2\n");
        assert_eq!(parse_graph(&text).unwrap().graph, Graph::complete(3));
    }

    #[test]
    fn rejects_malformed_edges() {
        for bad in [
            "p 3 1\ne 1 1\n",
            "p 3 1\ne 0 3\n",
            "p 3 2\ne 0 1\ne 0 1\n",
            "p 3 1\ne 2 1\n",
            "p 3 2\ne 0 1\n",
        ] {
            assert!(parse_graph(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn bipartition_header() {
        let g = Graph::complete_bipartite(2, 3);
        let file = parse_graph(&write_graph(&g, Some(2))).unwrap();
        assert_eq!(file.side_a, Some(2));
        assert_eq!(file.sides().unwrap().1.len(), 3);
    }

    #[test]
    fn model_round_trip() {
        let m = MinorModel::new(vec![VertexSet::from([0, 2]), VertexSet::from([1])]);
        let text = write_model(&m);
        assert_eq!(text, "model 2\nf 0 0 2\nf 1 1\n");
        assert_eq!(parse_model(&text).unwrap(), m);
        assert!(parse_model("model 1\nf 0 2 1\n").is_err());
    }
}
