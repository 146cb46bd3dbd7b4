//! Text formats for graphs, bipartite matrices, partitions and permutations.
//!
//! - Edge list: first line `n m`, then `m` lines `u v` (0-indexed).
//! - Dense matrix: first line `n`, then `n` rows of `n` reals.
//! - Bipartite matrix: first line `nx ny`, then `nx` rows of `ny` reals (a
//!   single `n` header reads an `n × n` block).
//! - Partition: one block per line, space-separated vertex indices.
//! - Permutation: the image list on one line, 0-indexed, or 1-indexed when
//!   it contains no 0.
//!
//! Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::graph::{BipartiteWeightedGraph, VertexPartition, WeightedGraph};
use crate::interval::Permutation;
use crate::matrix::Matrix;
use std::str::FromStr;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
        .collect()
}

fn parse_tok<T: FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {tok:?}")))
}

fn parse_row(line: usize, toks: &[&str], want: usize) -> Result<Vec<f64>> {
    if toks.len() != want {
        return Err(parse_err(line, format!("expected {want} entries, found {}", toks.len())));
    }
    toks.iter()
        .map(|t| {
            let v: f64 = parse_tok(line, t)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(line, format!("non-finite value {t:?}")))
            }
        })
        .collect()
}

fn read_rows(body: &[(usize, Vec<&str>)], rows: usize, cols: usize, header: usize) -> Result<Matrix> {
    if body.len() != rows {
        let at = body.get(rows).map_or(header, |(l, _)| *l);
        return Err(parse_err(at, format!("expected {rows} rows, found {}", body.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (l, toks) in body {
        data.extend(parse_row(*l, toks, cols)?);
    }
    Ok(Matrix::from_vec(rows, cols, data))
}

/// Graph in edge-list or dense-matrix format, told apart by the header.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let ls = lines(text);
    let Some((hl, header)) = ls.first() else {
        return Err(parse_err(1, "empty input"));
    };
    match header.len() {
        1 => {
            let n: usize = parse_tok(*hl, header[0])?;
            let m = read_rows(&ls[1..], n, n, *hl)?;
            WeightedGraph::new(m).map_err(|e| parse_err(*hl, e.to_string()))
        }
        2 => {
            let n: usize = parse_tok(*hl, header[0])?;
            let m: usize = parse_tok(*hl, header[1])?;
            let body = &ls[1..];
            if body.len() != m {
                return Err(parse_err(*hl, format!("expected {m} edges, found {}", body.len())));
            }
            let mut edges = Vec::with_capacity(m);
            for (l, toks) in body {
                if toks.len() != 2 {
                    return Err(parse_err(*l, "expected an edge `u v`"));
                }
                edges.push((parse_tok(*l, toks[0])?, parse_tok(*l, toks[1])?));
            }
            WeightedGraph::from_edges(n, &edges).map_err(|e| parse_err(*hl, e.to_string()))
        }
        _ => Err(parse_err(*hl, "header must be `n` or `n m`")),
    }
}

/// Bipartite weight matrix with an `nx ny` (or `n`) header.
pub fn parse_bipartite(text: &str) -> Result<BipartiteWeightedGraph> {
    let ls = lines(text);
    let Some((hl, header)) = ls.first() else {
        return Err(parse_err(1, "empty input"));
    };
    let (nx, ny) = match header.len() {
        1 => {
            let n = parse_tok(*hl, header[0])?;
            (n, n)
        }
        2 => (parse_tok(*hl, header[0])?, parse_tok(*hl, header[1])?),
        _ => return Err(parse_err(*hl, "header must be `nx ny` or `n`")),
    };
    let m = read_rows(&ls[1..], nx, ny, *hl)?;
    BipartiteWeightedGraph::new(m).map_err(|e| parse_err(*hl, e.to_string()))
}

/// Partition of `0..n`, one block per line.
pub fn parse_partition(text: &str, n: usize) -> Result<VertexPartition> {
    let mut blocks = Vec::new();
    let mut first = 1;
    for (l, toks) in lines(text) {
        if blocks.is_empty() {
            first = l;
        }
        let block: Vec<usize> = toks.iter().map(|t| parse_tok(l, t)).collect::<Result<_>>()?;
        blocks.push(block);
    }
    VertexPartition::from_lists(n, &blocks).map_err(|e| parse_err(first, e.to_string()))
}

pub fn write_partition(p: &VertexPartition) -> String {
    let mut out = String::new();
    for block in p.to_lists() {
        let line: Vec<String> = block.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Permutation on one line; 1-indexed input is detected by the absence of 0.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let ls = lines(text);
    let Some((l, toks)) = ls.first() else {
        return Err(parse_err(1, "empty input"));
    };
    if ls.len() > 1 {
        return Err(parse_err(ls[1].0, "a permutation occupies a single line"));
    }
    let mut v: Vec<usize> = toks.iter().map(|t| parse_tok(*l, t)).collect::<Result<_>>()?;
    if !v.contains(&0) {
        for x in &mut v {
            *x -= 1;
        }
    }
    Permutation::new(v).map_err(|e| parse_err(*l, e.to_string()))
}

/// The 0/1 matrix of a permutation file, or a dense matrix when the input
/// has more than one line.
pub fn parse_perm_or_matrix(text: &str) -> Result<Matrix> {
    if lines(text).len() > 1 {
        let ls = lines(text);
        let (hl, header) = &ls[0];
        if header.len() != 1 {
            return Err(parse_err(*hl, "dense matrix header must be `n`"));
        }
        let n: usize = parse_tok(*hl, header[0])?;
        read_rows(&ls[1..], n, n, *hl)
    } else {
        Ok(crate::interval::perm_to_matrix(&parse_permutation(text)?))
    }
}
