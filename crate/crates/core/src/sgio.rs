//! The `.sg` edge-list text format.
//!
//! One edge per line as `u v s` with `s` one of `+1`, `-1`, `+`, `-`.
//! Lines starting with `#` are comments; an optional `# nodes N` header
//! fixes the node count (otherwise it is `max id + 1`).

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{GraphError, Sign, SignedGraph};

#[derive(Debug, Error)]
pub enum SgError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_error(line: usize, message: impl Into<String>) -> SgError {
    SgError::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_sg<R: BufRead>(reader: R) -> Result<SignedGraph, SgError> {
    let mut edges: Vec<(usize, usize, Sign)> = Vec::new();
    let mut declared_nodes: Option<usize> = None;
    let mut max_id: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("nodes") {
                if let Some(n) = parts.next() {
                    let n: usize = n
                        .parse()
                        .map_err(|_| parse_error(line_no, "invalid node count in header"))?;
                    declared_nodes = Some(n);
                }
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let u: usize = fields
            .next()
            .ok_or_else(|| parse_error(line_no, "missing source node"))?
            .parse()
            .map_err(|_| parse_error(line_no, "invalid source node id"))?;
        let v: usize = fields
            .next()
            .ok_or_else(|| parse_error(line_no, "missing target node"))?
            .parse()
            .map_err(|_| parse_error(line_no, "invalid target node id"))?;
        let sign = match fields.next() {
            Some("+1") | Some("+") => Sign::Plus,
            Some("-1") | Some("-") => Sign::Minus,
            Some(other) => {
                return Err(parse_error(
                    line_no,
                    format!("invalid sign {other:?}, expected one of +1, -1, +, -"),
                ))
            }
            None => return Err(parse_error(line_no, "missing edge sign")),
        };
        if fields.next().is_some() {
            return Err(parse_error(line_no, "trailing fields after edge sign"));
        }
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        edges.push((u, v, sign));
    }

    let node_count = declared_nodes.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    Ok(SignedGraph::new(node_count, edges)?)
}

pub fn write_sg<W: Write>(g: &SignedGraph, mut writer: W) -> io::Result<()> {
    writeln!(writer, "# nodes {}", g.node_count())?;
    for (u, v, s) in g.edges() {
        writeln!(writer, "{u} {v} {s}")?;
    }
    Ok(())
}

pub fn read_sg_path<P: AsRef<Path>>(path: P) -> Result<SignedGraph, SgError> {
    read_sg(BufReader::new(File::open(path)?))
}

pub fn write_sg_path<P: AsRef<Path>>(g: &SignedGraph, path: P) -> Result<(), SgError> {
    let mut file = File::create(path)?;
    write_sg(g, &mut file)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_all_sign_spellings() {
        let text = "# a comment\n0 1 +1\n1 2 -\n2 3 +\n0 3 -1\n";
        let g = read_sg(text.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.positive_edge_count(), 2);
        assert_eq!(g.negative_edge_count(), 2);
    }

    #[test]
    fn header_fixes_node_count() {
        let g = read_sg("# nodes 5\n0 1 +1\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 5);
        let g = read_sg("0 1 +1\n".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = read_sg("0 1 +1\n0 2 *\n".as_bytes()).unwrap_err();
        match err {
            SgError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let g = read_sg("# nodes 6\n0 1 +1\n2 4 -1\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_sg(&g, &mut buf).unwrap();
        let back = read_sg(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }
}
