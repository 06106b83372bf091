//! Plain-text interchange format for colored weighted graphs.
//!
//! ```text
//! n n_red n_blue
//! RBRB...          one character per node
//! u v w            one line per edge, u < v, sorted
//! ```
//!
//! Weights are written in the shortest form that parses back to the same
//! `f64`, so write -> read -> write is byte-identical.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, LabeledGraph};

pub fn write_edge_list(g: &LabeledGraph, coloring: &Coloring, mut out: impl Write) -> Result<()> {
    if coloring.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: coloring.len() });
    }
    writeln!(out, "{} {} {}", g.n(), coloring.n_red(), coloring.n_blue())?;
    writeln!(out, "{}", coloring.to_string_compact())?;
    for &(u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}")?;
    }
    Ok(())
}

pub fn edge_list_string(g: &LabeledGraph, coloring: &Coloring) -> Result<String> {
    let mut buf = Vec::new();
    write_edge_list(g, coloring, &mut buf)?;
    Ok(String::from_utf8(buf).expect("writer emits ASCII"))
}

/// Reads the format back. Blank lines and `#` comments are ignored; edges
/// may appear in any order and without a weight (weight 1).
pub fn read_edge_list(input: impl BufRead) -> Result<(LabeledGraph, Coloring)> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim_start().starts_with('#')));

    let (line_no, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let header = header?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|f| f.parse().map_err(|_| Error::parse(line_no, format!("bad header field {f:?}"))))
        .collect::<Result<_>>()?;
    let [n, n_red, n_blue] = fields[..] else {
        return Err(Error::parse(line_no, "header must be `n n_red n_blue`"));
    };

    let (color_line_no, color_line) = match lines.next() {
        Some((i, l)) => (i, l?),
        None if n == 0 => (line_no + 1, String::new()),
        None => return Err(Error::parse(line_no + 1, "missing color line")),
    };
    let colors: Vec<Color> = color_line
        .trim()
        .chars()
        .map(|c| Color::from_char(c).ok_or_else(|| Error::parse(color_line_no, format!("bad color {c:?}"))))
        .collect::<Result<_>>()?;
    if colors.len() != n {
        return Err(Error::parse(color_line_no, format!("expected {n} colors, found {}", colors.len())));
    }
    let coloring = Coloring::new(colors);
    if coloring.n_red() != n_red || coloring.n_blue() != n_blue {
        return Err(Error::parse(
            color_line_no,
            format!("color counts {}/{} disagree with header {n_red}/{n_blue}", coloring.n_red(), coloring.n_blue()),
        ));
    }

    let mut edges = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let node = |f: &str| f.parse::<usize>().map_err(|_| Error::parse(i, format!("bad node id {f:?}")));
        let (u, v, w) = match fields[..] {
            [u, v] => (node(u)?, node(v)?, 1.0),
            [u, v, w] => {
                (node(u)?, node(v)?, w.parse::<f64>().map_err(|_| Error::parse(i, format!("bad weight {w:?}")))?)
            }
            _ => return Err(Error::parse(i, "edge line must be `u v [w]`")),
        };
        if u >= n || v >= n {
            return Err(Error::parse(i, format!("edge ({u}, {v}) out of range for {n} nodes")));
        }
        edges.push((u, v, w));
    }
    let graph = LabeledGraph::from_edges(n, edges)?;
    Ok((graph, coloring))
}
