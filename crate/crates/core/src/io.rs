//! Text and JSON formats for matrices, graphs, rooted trees and path families.
//!
//! Blank lines and anything after `#` are ignored in the text formats.

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::linalg::ExactMatrix;
use crate::path::{PathError, PathFamily, RootedTree};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Path(#[from] PathError),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, IoError> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn parse_entry(tok: &str, line: usize) -> Result<BigRational, IoError> {
    BigRational::from_str(tok).map_err(|_| parse_err(line, format!("bad matrix entry {tok:?}")))
}

pub fn parse_matrix(text: &str) -> Result<ExactMatrix, IoError> {
    let mut lines = content_lines(text);
    let (l0, header) = lines.next().ok_or_else(|| parse_err(1, "missing \"rows cols\" header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_err(l0, "header must be \"rows cols\""));
    }
    let (rows, cols) = (parse_usize(dims[0], l0)?, parse_usize(dims[1], l0)?);
    let mut data = Vec::with_capacity(rows);
    for (line, l) in lines {
        let row = l
            .split_whitespace()
            .map(|t| parse_entry(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != cols {
            return Err(parse_err(line, format!("expected {cols} entries, got {}", row.len())));
        }
        data.push(row);
    }
    if data.len() != rows {
        return Err(parse_err(0, format!("expected {rows} rows, got {}", data.len())));
    }
    if rows == 0 {
        return Ok(ExactMatrix::zeros(0, cols));
    }
    Ok(ExactMatrix::from_rows(data).expect("row lengths checked"))
}

pub fn format_matrix(m: &ExactMatrix) -> String {
    m.to_string()
}

fn entry_json(x: &BigRational) -> Value {
    match x.is_integer().then(|| x.to_integer().to_i64()).flatten() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    let data: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(entry_json).collect()))
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "data": data})
}

pub fn matrix_from_json(text: &str) -> Result<ExactMatrix, IoError> {
    let v: Value = serde_json::from_str(text)?;
    let dim = |key: &str| {
        v.get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| parse_err(1, format!("missing \"{key}\"")))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let data = v
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(1, "missing \"data\""))?;
    if data.len() != rows {
        return Err(parse_err(1, format!("expected {rows} rows, got {}", data.len())));
    }
    let mut out = ExactMatrix::zeros(rows, cols);
    for (i, row) in data.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(1, format!("row {i} is not an array")))?;
        if row.len() != cols {
            return Err(parse_err(1, format!("row {i} has {} entries", row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            out[(i, j)] = match x {
                Value::Number(n) => n
                    .as_i64()
                    .map(|v| BigRational::from_integer(v.into()))
                    .ok_or_else(|| parse_err(1, format!("entry ({i}, {j}) is not an integer")))?,
                Value::String(s) => parse_entry(s, 1)?,
                _ => return Err(parse_err(1, format!("entry ({i}, {j}) has the wrong type"))),
            };
        }
    }
    Ok(out)
}

/// Matrix in either format, chosen by the first non-blank character.
pub fn read_matrix(text: &str) -> Result<ExactMatrix, IoError> {
    if text.trim_start().starts_with('{') {
        matrix_from_json(text)
    } else {
        parse_matrix(text)
    }
}

/// Graph text format, plus the optional `root r` line used for rooted trees.
fn parse_graph_parts(text: &str) -> Result<(Graph, Option<usize>), IoError> {
    let mut lines = content_lines(text);
    let (l0, header) = lines.next().ok_or_else(|| parse_err(1, "missing vertex count"))?;
    let n = parse_usize(header, l0)?;
    let mut edges = Vec::new();
    let mut root = None;
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["root", r] => root = Some(parse_usize(r, line)?),
            [u, v] => edges.push((parse_usize(u, line)?, parse_usize(v, line)?)),
            _ => return Err(parse_err(line, "expected \"u v\"")),
        }
    }
    Ok((Graph::new(n, edges)?, root))
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    let (g, root) = parse_graph_parts(text)?;
    if root.is_some() {
        return Err(parse_err(0, "unexpected root line in a graph file"));
    }
    Ok(g)
}

pub fn format_graph(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn graph_to_json(g: &Graph) -> Value {
    serde_json::to_value(g).expect("graphs serialize")
}

pub fn read_graph(text: &str) -> Result<Graph, IoError> {
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(text)?)
    } else {
        parse_graph(text)
    }
}

/// Tree in graph format; the root defaults to 0 without a `root` line.
pub fn parse_tree(text: &str) -> Result<RootedTree, IoError> {
    let (g, root) = parse_graph_parts(text)?;
    Ok(RootedTree::new(g, root.unwrap_or(0))?)
}

pub fn format_tree(t: &RootedTree) -> String {
    format!("{}root {}\n", format_graph(t.graph()), t.root())
}

pub fn parse_paths(text: &str, tree: &Graph) -> Result<PathFamily, IoError> {
    let paths = content_lines(text)
        .map(|(line, l)| l.split_whitespace().map(|t| parse_usize(t, line)).collect())
        .collect::<Result<Vec<Vec<usize>>, _>>()?;
    Ok(PathFamily::new(tree, paths)?)
}

pub fn format_paths(p: &PathFamily) -> String {
    p.paths()
        .iter()
        .map(|path| {
            let s: Vec<String> = path.iter().map(|v| v.to_string()).collect();
            s.join(" ") + "\n"
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn matrix_text_round_trip() {
        let mut m = ExactMatrix::from_i64_rows(&[[1, -2, 0], [0, 1, 1]]);
        m[(1, 0)] = BigRational::new(3.into(), 4.into());
        let text = format_matrix(&m);
        assert_eq!(text, "2 3\n1 -2 0\n3/4 1 1\n");
        assert_eq!(parse_matrix(&text).unwrap(), m);
        assert_eq!(read_matrix("# comment\n1 1\n\n7 # seven\n").unwrap()[(0, 0)], int(7));
    }

    #[test]
    fn matrix_json_round_trip() {
        let mut m = ExactMatrix::from_i64_rows(&[[1, 0], [0, 1]]);
        m[(0, 1)] = BigRational::new((-1).into(), 2.into());
        let v = matrix_to_json(&m);
        assert_eq!(v.to_string(), r#"{"cols":2,"data":[[1,"-1/2"],[0,1]],"rows":2}"#);
        assert_eq!(read_matrix(&v.to_string()).unwrap(), m);
    }

    #[test]
    fn matrix_parse_errors() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("2 2\n1 0\n").is_err());
        assert!(parse_matrix("1 2\n1 x\n").is_err());
        assert!(parse_matrix("1 2\n1 0 1\n").is_err());
        assert!(matrix_from_json(r#"{"rows":1,"cols":1,"data":[[true]]}"#).is_err());
    }

    #[test]
    fn graph_formats() {
        let g = Graph::cycle(4);
        let text = format_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(read_graph(&graph_to_json(&g).to_string()).unwrap(), g);
        assert_eq!(read_graph(r#"{"n":3,"edges":[[0,1],[1,2]]}"#).unwrap(), Graph::path(3));
        assert!(parse_graph("3\n0 3\n").is_err());
        assert!(parse_graph("3\n0 1 2\n").is_err());
    }

    #[test]
    fn tree_and_paths() {
        let t = parse_tree("4\n0 1\n1 2\n1 3\nroot 3\n").unwrap();
        assert_eq!(t.root(), 3);
        assert_eq!(parse_tree(&format_tree(&t)).unwrap(), t);
        assert!(parse_tree("3\n0 1\n1 2\n2 0\n").is_err());
        let p = parse_paths("0 1 2\n3 1\n", t.graph()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(format_paths(&p), "0 1 2\n3 1\n");
        assert!(parse_paths("0 2\n", t.graph()).is_err());
    }
}
