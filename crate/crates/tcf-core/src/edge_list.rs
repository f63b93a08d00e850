//! The edge-list text format, the interchange format of every subcommand.
//!
//! A document is: optional `#`-comment lines, a header `r n m`, then `m`
//! lines of `r` strictly ascending space-separated vertex indices, edges in
//! lexicographic order, newline-terminated. Two comment conventions carry
//! structure through the format:
//!
//! * `# partition a..b c..d ...` — partition metadata of a hypergraph;
//! * `# bipartite L R` — marks a 2-uniform document as a bipartite graph
//!   with side X = `0..L` and side Y = `L..L+R`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bipartite::BipartiteGraph;
use crate::hypergraph::{CoreError, Hypergraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing header line")]
    MissingHeader,
    #[error("malformed input at line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("index out of range at line {line}")]
    IndexOutOfRange { line: usize },
    #[error("wrong edge arity at line {line}: expected {expected} indices, got {got}")]
    WrongArity {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("edge not strictly ascending at line {line}")]
    NotAscending { line: usize },
    #[error("header declares {declared} edges but {found} edge lines found")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] CoreError),
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    if let Some(parts) = h.partition() {
        out.push_str("# partition");
        for p in parts {
            let _ = write!(out, " {}..{}", p.start, p.end);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "{} {} {}", h.r(), h.n_vertices(), h.edge_count());
    for e in h.edges() {
        let mut it = e.iter();
        if let Some(v) = it.next() {
            let _ = write!(out, "{v}");
        }
        for v in it {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut cursor = Cursor::new(text);
    let h = parse_hypergraph_at(&mut cursor)?;
    cursor.expect_end()?;
    Ok(h)
}

pub fn serialize_bipartite(g: &BipartiteGraph) -> String {
    let mut out = format!("# bipartite {} {}\n", g.n_left(), g.n_right());
    let body = serialize_hypergraph(&strip_partition(g.to_hypergraph()));
    out.push_str(&body);
    out
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph, ParseError> {
    let mut cursor = Cursor::new(text);
    let g = parse_bipartite_at(&mut cursor)?;
    cursor.expect_end()?;
    Ok(g)
}

fn strip_partition(h: Hypergraph) -> Hypergraph {
    // bipartite documents carry their structure in the comment line instead
    Hypergraph::new(h.r(), h.n_vertices(), h.edges().to_vec()).expect("already validated")
}

/// Line-oriented cursor shared by the single-document parsers and the
/// packing-family stream parser.
pub(crate) struct Cursor<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Cursor<'a> {
        Cursor {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    fn line_no(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<&'a str> {
        let l = self.peek();
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    /// Consume and return the comment lines preceding the next header.
    fn take_comments(&mut self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        while let Some(l) = self.peek() {
            let t = l.trim();
            if let Some(rest) = t.strip_prefix('#') {
                out.push((self.line_no(), rest.trim()));
                self.pos += 1;
            } else if t.is_empty() {
                self.pos += 1;
            } else {
                break;
            }
        }
        out
    }

    /// If the next non-blank line is a comment whose body starts with `tag`,
    /// consume it and return the rest of the body.
    pub(crate) fn take_leading_comment(&mut self, tag: &str) -> Option<String> {
        let mut pos = self.pos;
        while let Some(l) = self.lines.get(pos) {
            let t = l.trim();
            if t.is_empty() {
                pos += 1;
                continue;
            }
            let body = t.strip_prefix('#')?.trim().strip_prefix(tag)?;
            self.pos = pos + 1;
            return Some(body.trim().to_string());
        }
        None
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), ParseError> {
        while let Some(l) = self.peek() {
            if !l.trim().is_empty() {
                return Err(ParseError::Malformed {
                    line: self.line_no(),
                    msg: "trailing content after declared edges".into(),
                });
            }
            self.pos += 1;
        }
        Ok(())
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| ParseError::Malformed {
        line,
        msg: format!("expected a non-negative integer, got {tok:?}"),
    })
}

fn parse_partition_comment(body: &str, line: usize) -> Result<Vec<std::ops::Range<u32>>, ParseError> {
    let mut parts = Vec::new();
    for tok in body.split_whitespace() {
        let (a, b) = tok.split_once("..").ok_or_else(|| ParseError::Malformed {
            line,
            msg: format!("bad partition range {tok:?}"),
        })?;
        parts.push(parse_usize(a, line)? as u32..parse_usize(b, line)? as u32);
    }
    Ok(parts)
}

pub(crate) fn parse_hypergraph_at(cursor: &mut Cursor<'_>) -> Result<Hypergraph, ParseError> {
    let comments = cursor.take_comments();
    let mut partition = None;
    for (line, c) in &comments {
        if let Some(body) = c.strip_prefix("partition") {
            partition = Some(parse_partition_comment(body, *line)?);
        }
    }
    let (r, n, m) = parse_header(cursor)?;
    let edges = parse_edge_lines(cursor, r, n, m)?;
    let h = Hypergraph::new(r, n, edges)?;
    match partition {
        Some(p) => Ok(h.with_partition(p)?),
        None => Ok(h),
    }
}

pub(crate) fn parse_bipartite_at(cursor: &mut Cursor<'_>) -> Result<BipartiteGraph, ParseError> {
    let comments = cursor.take_comments();
    let mut sides = None;
    for (line, c) in &comments {
        if let Some(body) = c.strip_prefix("bipartite") {
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(ParseError::Malformed {
                    line: *line,
                    msg: "bipartite comment needs two side sizes".into(),
                });
            }
            sides = Some((parse_usize(toks[0], *line)?, parse_usize(toks[1], *line)?));
        }
    }
    let (n_left, n_right) = sides.ok_or(ParseError::MissingHeader)?;
    let header_line = cursor.line_no();
    let (r, n, m) = parse_header(cursor)?;
    if r != 2 || n != n_left + n_right {
        return Err(ParseError::Malformed {
            line: header_line,
            msg: format!("bipartite body must have r=2, n={}", n_left + n_right),
        });
    }
    let edges = parse_edge_lines(cursor, r, n, m)?;
    let off = n_left as u32;
    let mut pairs = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        if e[0] >= off || e[1] < off {
            return Err(ParseError::Malformed {
                line: header_line + 1 + i,
                msg: "edge does not cross the declared sides".into(),
            });
        }
        pairs.push((e[0], e[1] - off));
    }
    Ok(BipartiteGraph::new(n_left, n_right, pairs)?)
}

fn parse_header(cursor: &mut Cursor<'_>) -> Result<(usize, usize, usize), ParseError> {
    let line = cursor.line_no();
    let l = cursor.bump().ok_or(ParseError::MissingHeader)?;
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(ParseError::Malformed {
            line,
            msg: format!("header must be \"r n m\", got {l:?}"),
        });
    }
    Ok((
        parse_usize(toks[0], line)?,
        parse_usize(toks[1], line)?,
        parse_usize(toks[2], line)?,
    ))
}

fn parse_edge_lines(
    cursor: &mut Cursor<'_>,
    r: usize,
    n: usize,
    m: usize,
) -> Result<Vec<Vec<u32>>, ParseError> {
    let mut edges = Vec::with_capacity(m);
    for found in 0..m {
        let line = cursor.line_no();
        let l = match cursor.bump() {
            Some(l) if !l.trim().is_empty() => l,
            _ => {
                return Err(ParseError::EdgeCountMismatch {
                    declared: m,
                    found,
                })
            }
        };
        let mut edge = Vec::with_capacity(r);
        for tok in l.split_whitespace() {
            let v = parse_usize(tok, line)?;
            if v >= n {
                return Err(ParseError::IndexOutOfRange { line });
            }
            edge.push(v as u32);
        }
        if edge.len() != r {
            return Err(ParseError::WrongArity {
                line,
                expected: r,
                got: edge.len(),
            });
        }
        if edge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ParseError::NotAscending { line });
        }
        edges.push(edge);
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_document() {
        let h = Hypergraph::new(3, 4, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(serialize_hypergraph(&h), "3 4 1\n0 1 2\n");
        assert_eq!(parse_hypergraph("3 4 1\n0 1 2\n").unwrap(), h);
    }

    #[test]
    fn out_of_range_reports_the_line() {
        let err = parse_hypergraph("3 4 1\n0 1 5\n").unwrap_err();
        assert_eq!(err, ParseError::IndexOutOfRange { line: 2 });
        assert_eq!(err.to_string(), "index out of range at line 2");
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(
            parse_hypergraph(""),
            Err(ParseError::MissingHeader)
        ));
        assert!(matches!(
            parse_hypergraph("3 4\n"),
            Err(ParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_hypergraph("3 4 2\n0 1 2\n"),
            Err(ParseError::EdgeCountMismatch {
                declared: 2,
                found: 1
            })
        ));
        assert!(matches!(
            parse_hypergraph("3 4 1\n0 1\n"),
            Err(ParseError::WrongArity { line: 2, .. })
        ));
        assert!(matches!(
            parse_hypergraph("3 4 1\n0 2 1\n"),
            Err(ParseError::NotAscending { line: 2 })
        ));
        assert!(matches!(
            parse_hypergraph("3 4 1\n0 1 2\nstray\n"),
            Err(ParseError::Malformed { line: 3, .. })
        ));
    }

    #[test]
    fn partition_comment_round_trips() {
        let h = Hypergraph::new(3, 6, vec![vec![0, 2, 4], vec![1, 3, 5]])
            .unwrap()
            .with_partition(vec![0..2, 2..4, 4..6])
            .unwrap();
        let text = serialize_hypergraph(&h);
        assert!(text.starts_with("# partition 0..2 2..4 4..6\n"));
        assert_eq!(parse_hypergraph(&text).unwrap(), h);
    }

    #[test]
    fn bipartite_round_trip() {
        let g = BipartiteGraph::new(3, 3, vec![(0, 0), (0, 2), (2, 1)]).unwrap();
        let text = serialize_bipartite(&g);
        assert!(text.starts_with("# bipartite 3 3\n2 6 3\n"));
        assert_eq!(parse_bipartite(&text).unwrap(), g);
    }

    #[test]
    fn bipartite_rejects_in_side_edges() {
        let err = parse_bipartite("# bipartite 2 2\n2 4 1\n0 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 3, .. }));
    }
}
