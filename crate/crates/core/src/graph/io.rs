//! Edge-list and graph6 text formats.
//!
//! Edge list: the first non-blank line holds `n`, each further line one edge
//! `u v`. Lines starting with `#` are comments.
//!
//! graph6: the usual printable encoding, 6 bits per byte offset by 63, upper
//! triangle of the adjacency matrix in column order.

use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Graph6,
}

impl GraphFormat {
    /// Edge lists start with a digit; graph6 never does.
    pub fn sniff(text: &str) -> GraphFormat {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        match first {
            Some(l) if l.starts_with(">>graph6<<") => GraphFormat::Graph6,
            Some(l) if l.as_bytes()[0] >= 63 => GraphFormat::Graph6,
            _ => GraphFormat::EdgeList,
        }
    }
}

fn perr(line: usize, byte: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        byte,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Graph6 => parse_graph6(text),
    }
}

pub fn emit_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => emit_edge_list(g),
        GraphFormat::Graph6 => emit_graph6(g),
    }
}

/// Reads a file in either format, deciding by [`GraphFormat::sniff`].
pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let g = parse_graph(&text, GraphFormat::sniff(&text))?;
    match path.file_stem().and_then(|s| s.to_str()) {
        Some(stem) if g.name().is_none() => Ok(g.with_name(stem)),
        _ => Ok(g),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut offset = 0;
    for (idx, raw) in text.split_inclusive('\n').enumerate() {
        let line_no = idx + 1;
        let line_start = offset;
        offset += raw.len();
        let content = raw.trim_end_matches(['\n', '\r']);
        let trimmed = content.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lead = content.len() - trimmed.len();
        let mut fields = Vec::new();
        let mut pos = 0;
        for token in trimmed.split_whitespace() {
            let at = trimmed[pos..].find(token).unwrap() + pos;
            pos = at + token.len();
            fields.push((line_start + lead + at, token));
        }
        let number = |(byte, tok): (usize, &str)| -> Result<usize> {
            tok.parse::<usize>()
                .map_err(|_| perr(line_no, byte, format!("expected a vertex id, found {tok:?}")))
        };
        match graph.as_mut() {
            None => {
                if fields.len() != 1 {
                    return Err(perr(line_no, fields[0].0, "first line must hold only the vertex count"));
                }
                graph = Some(Graph::new(number(fields[0])?));
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(perr(line_no, fields[0].0, "edge lines must hold exactly two ids"));
                }
                let u = number(fields[0])?;
                let v = number(fields[1])?;
                let n = g.n();
                if u >= n || v >= n {
                    let byte = if u >= n { fields[0].0 } else { fields[1].0 };
                    return Err(perr(line_no, byte, format!("vertex id out of range 0..{n}")));
                }
                if u == v {
                    return Err(perr(line_no, fields[0].0, "self-loop"));
                }
                if !g.add_edge(u, v)? {
                    return Err(perr(line_no, fields[0].0, "duplicate edge"));
                }
            }
        }
    }
    graph.ok_or_else(|| perr(1, 0, "missing vertex count"))
}

pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn emit_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let (line_idx, line) = text
        .lines()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| perr(1, 0, "empty graph6 input"))?;
    let line_no = line_idx + 1;
    let mut body = line.trim().as_bytes();
    let mut base = 0;
    if let Some(rest) = body.strip_prefix(b">>graph6<<") {
        body = rest;
        base = 10;
    }
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(perr(line_no, base + i, format!("byte {b} outside the graph6 range")));
        }
    }
    let take = |from: usize, count: usize| -> Result<usize> {
        if body.len() < from + count {
            return Err(perr(line_no, base + body.len(), "truncated vertex count"));
        }
        Ok(body[from..from + count]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize))
    };
    let (n, start) = match body.first() {
        None => return Err(perr(line_no, base, "empty graph6 line")),
        Some(126) if body.get(1) == Some(&126) => (take(2, 6)?, 8),
        Some(126) => (take(1, 3)?, 4),
        Some(&b) => ((b - 63) as usize, 1),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    let data = &body[start..];
    if data.len() != needed {
        return Err(perr(
            line_no,
            base + start + data.len().min(needed),
            format!("expected {needed} data bytes for n = {n}, found {}", data.len()),
        ));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    if pairs % 6 != 0 {
        let last = data[needed - 1] - 63;
        if last & ((1 << (6 - pairs % 6)) - 1) != 0 {
            return Err(perr(line_no, base + start + needed - 1, "non-zero padding bits"));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_path() {
        let g = parse_edge_list("3\n0 1\n1 2").unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn edge_list_out_of_range() {
        let err = parse_edge_list("3\n0 5\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                byte: 4,
                message: "vertex id out of range 0..3".into()
            }
        );
    }

    #[test]
    fn edge_list_rejects_garbage() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3\n0 x\n").is_err());
        assert!(parse_edge_list("3\n0 1 2\n").is_err());
        assert!(parse_edge_list("3\n1 1\n").is_err());
        assert!(parse_edge_list("3 4\n").is_err());
    }

    #[test]
    fn graph6_known_strings() {
        assert_eq!(emit_graph6(&Graph::complete(4)), "C~");
        assert_eq!(emit_graph6(&Graph::path(3)), "Bg");
        assert_eq!(parse_graph6("C~").unwrap().edge_count(), 6);
        assert_eq!(parse_graph6(">>graph6<<C~").unwrap().edge_count(), 6);
    }

    #[test]
    fn graph6_round_trips_large_n() {
        let g = Graph::cycle(100);
        let text = emit_graph6(&g);
        assert!(text.starts_with('~'));
        assert_eq!(parse_graph6(&text).unwrap().edges(), g.edges());
    }

    #[test]
    fn graph6_errors() {
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("C\u{7}").is_err());
    }

    #[test]
    fn sniffing() {
        assert_eq!(GraphFormat::sniff("3\n0 1\n"), GraphFormat::EdgeList);
        assert_eq!(GraphFormat::sniff("C~\n"), GraphFormat::Graph6);
        assert_eq!(GraphFormat::sniff("# k4\n4\n"), GraphFormat::EdgeList);
    }
}
