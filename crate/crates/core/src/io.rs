//! Text and JSON serialisation of coloured k-graphs.
//!
//! Text format: a header line `k n`, then one edge per line as `R|B v…`.
//! Blank lines and everything after `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::edge::{Colour, Edge, Vertex, MAX_N};
use crate::error::{Error, Result};
use crate::graph::ColouredKGraph;

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

pub fn parse_text(input: &str) -> Result<ColouredKGraph> {
    let mut graph: Option<ColouredKGraph> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let Some(g) = graph.as_mut() else {
            let nums: Vec<&str> = tokens.collect();
            if nums.len() != 2 {
                return parse_err(line, "expected header `k n`");
            }
            let k: usize = nums[0].parse().or_else(|_| parse_err(line, "bad uniformity"))?;
            let n: usize = nums[1].parse().or_else(|_| parse_err(line, "bad vertex count"))?;
            graph = Some(ColouredKGraph::new(k, n).or_else(|e| parse_err(line, e.to_string()))?);
            continue;
        };
        let colour = match tokens.next() {
            Some("R") => Colour::Red,
            Some("B") => Colour::Blue,
            Some(t) => return parse_err(line, format!("unknown colour `{t}`")),
            None => unreachable!(),
        };
        let mut verts: Vec<Vertex> = Vec::new();
        for t in tokens {
            let v: Vertex = t.parse().or_else(|_| parse_err(line, format!("bad vertex `{t}`")))?;
            verts.push(v);
        }
        add_edge(g, &verts, colour, line)?;
    }
    graph.map_or_else(|| parse_err(0, "missing header"), Ok)
}

fn add_edge(g: &mut ColouredKGraph, verts: &[Vertex], colour: Colour, line: usize) -> Result<()> {
    if verts.len() != g.k() {
        return parse_err(line, format!("edge has {} vertices, expected {}", verts.len(), g.k()));
    }
    let n = g.label_bound();
    if let Some(&v) = verts.iter().find(|&&v| v >= n) {
        return parse_err(line, format!("vertex {v} out of range 0..{n}"));
    }
    let mut sorted = verts.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return parse_err(line, format!("duplicate vertex {}", w[0]));
    }
    let e = Edge::from_sorted(&sorted);
    if g.contains(e) {
        return parse_err(line, format!("duplicate edge {e:?}"));
    }
    g.set(e, Some(colour));
    Ok(())
}

pub fn to_text(g: &ColouredKGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.k(), g.label_bound()).unwrap();
    for (e, c) in g.edges() {
        writeln!(out, "{} {}", c.letter(), e).unwrap();
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    v: Vec<Vertex>,
    c: Colour,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    k: usize,
    n: usize,
    edges: Vec<JsonEdge>,
}

pub fn parse_json(input: &str) -> Result<ColouredKGraph> {
    let doc: JsonGraph = serde_json::from_str(input)?;
    if doc.n > MAX_N {
        return parse_err(0, format!("{} vertices exceeds the supported {MAX_N}", doc.n));
    }
    let mut g = ColouredKGraph::new(doc.k, doc.n).or_else(|e| parse_err(0, e.to_string()))?;
    for (i, edge) in doc.edges.iter().enumerate() {
        // edges are numbered from 1 in diagnostics
        add_edge(&mut g, &edge.v, edge.c, i + 1)?;
    }
    Ok(g)
}

pub fn to_json(g: &ColouredKGraph) -> String {
    let doc = JsonGraph {
        k: g.k(),
        n: g.label_bound(),
        edges: g.edges().map(|(e, c)| JsonEdge { v: e.to_vec(), c }).collect(),
    };
    serde_json::to_string(&doc).expect("serialisable")
}

/// Parses either format, detected by a leading `{`.
pub fn parse_any(input: &str) -> Result<ColouredKGraph> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn read_graph(path: &Path) -> Result<ColouredKGraph> {
    parse_any(&std::fs::read_to_string(path)?)
}

/// Writes JSON when the path ends in `.json`, text otherwise.
pub fn write_graph(path: &Path, g: &ColouredKGraph) -> Result<()> {
    let body = if path.extension().is_some_and(|x| x == "json") { to_json(g) } else { to_text(g) };
    std::fs::write(path, body)?;
    Ok(())
}
