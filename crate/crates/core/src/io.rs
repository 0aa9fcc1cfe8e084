//! JSON documents for stable graphs, and DOT rendering.
//!
//! A graph document looks like
//!
//! ```json
//! {
//!   "genus_total": 2,
//!   "legs": 1,
//!   "vertices": [{"genus": 0}, {"genus": 1}],
//!   "edges": [[0, 0], [0, 1]],
//!   "leg_map": {"1": 0}
//! }
//! ```
//!
//! Vertex indices are 0-based, edge pairs have the smaller index first, the
//! edge list is sorted, loops are `[v, v]` and parallel edges repeat.
//! `leg_map` keys are exactly `"1"` to `"n"`, written in numeric order.

use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::stable_graph::{StableGraph, Violation};
use crate::strata::StrataPoset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("schema violation at `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("unstable graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Stability(Vec<Violation>),
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Schema { field: field.into(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphDocument {
    pub genus_total: u32,
    pub legs: u32,
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<[usize; 2]>,
    #[serde(serialize_with = "numbered_map")]
    pub leg_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexDocument {
    pub genus: u32,
}

fn numbered_map<S: Serializer>(legs: &[usize], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(legs.len()))?;
    for (i, v) in legs.iter().enumerate() {
        map.serialize_entry(&(i + 1).to_string(), v)?;
    }
    map.end()
}

impl GraphDocument {
    /// Document for a valid graph.
    pub fn from_graph(graph: &StableGraph) -> Self {
        let mut edges: Vec<[usize; 2]> = graph.edges().iter().map(|&(a, b)| [a, b]).collect();
        edges.sort_unstable();
        GraphDocument {
            genus_total: graph.total_genus().unwrap_or(0),
            legs: graph.leg_count() as u32,
            vertices: graph.genera().iter().map(|&genus| VertexDocument { genus }).collect(),
            edges,
            leg_map: graph.leg_vertices().to_vec(),
        }
    }
}

pub fn serialize_graph(graph: &StableGraph) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(graph)).expect("plain data")
}

/// Parses and validates a graph document.
pub fn parse_graph(text: &str) -> Result<StableGraph, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    graph_from_value(&value)
}

pub fn graph_from_value(value: &Value) -> Result<StableGraph, ParseError> {
    let obj = value.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    for key in obj.keys() {
        if !["genus_total", "legs", "vertices", "edges", "leg_map"].contains(&key.as_str()) {
            return Err(schema(key.clone(), "unknown field"));
        }
    }
    let genus_total = uint(obj, "genus_total")?;
    let legs = uint(obj, "legs")? as usize;

    let vertices = array(obj, "vertices")?;
    let mut genera = Vec::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        let field = format!("vertices[{i}]");
        let v = v.as_object().ok_or_else(|| schema(&field, "expected an object"))?;
        if let Some(extra) = v.keys().find(|k| k.as_str() != "genus") {
            return Err(schema(format!("{field}.{extra}"), "unknown field"));
        }
        genera.push(uint(v, "genus").map_err(|e| prefix(e, &field))? as u32);
    }
    let n = genera.len();

    let mut edges = Vec::new();
    for (i, e) in array(obj, "edges")?.iter().enumerate() {
        let field = format!("edges[{i}]");
        let pair = e
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| schema(&field, "expected a pair of vertex indices"))?;
        let mut ends = [0usize; 2];
        for (k, x) in pair.iter().enumerate() {
            let idx = x.as_u64().ok_or_else(|| schema(format!("{field}[{k}]"), "expected a vertex index"))?;
            if idx as usize >= n {
                return Err(schema(format!("{field}[{k}]"), format!("vertex {idx} out of range")));
            }
            ends[k] = idx as usize;
        }
        if ends[0] > ends[1] {
            return Err(schema(&field, "pair must list the smaller index first"));
        }
        edges.push((ends[0], ends[1]));
    }

    let leg_map = obj
        .get("leg_map")
        .ok_or_else(|| schema("leg_map", "missing"))?
        .as_object()
        .ok_or_else(|| schema("leg_map", "expected an object"))?;
    let mut leg_vertices = vec![None; legs];
    for (key, v) in leg_map {
        let field = format!("leg_map.{key}");
        let label: usize = key
            .parse()
            .ok()
            .filter(|&l| (1..=legs).contains(&l) && key == &l.to_string())
            .ok_or_else(|| schema(&field, format!("leg labels are 1..{legs}")))?;
        let idx = v.as_u64().ok_or_else(|| schema(&field, "expected a vertex index"))?;
        if idx as usize >= n {
            return Err(schema(&field, format!("vertex {idx} out of range")));
        }
        leg_vertices[label - 1] = Some(idx as usize);
    }
    let leg_vertices = leg_vertices
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| schema(format!("leg_map.{}", i + 1), "missing")))
        .collect::<Result<Vec<_>, _>>()?;

    let graph = StableGraph::from_parts(genera, edges, leg_vertices);
    let violations = graph.validate();
    if !violations.is_empty() {
        return Err(ParseError::Stability(violations));
    }
    let genus = graph.total_genus().expect("validated graphs are connected");
    if u64::from(genus) != genus_total {
        return Err(schema("genus_total", format!("graph has genus {genus}")));
    }
    Ok(graph)
}

fn prefix(e: ParseError, parent: &str) -> ParseError {
    match e {
        ParseError::Schema { field, message } => schema(format!("{parent}.{field}"), message),
        other => other,
    }
}

fn uint(obj: &Map<String, Value>, key: &str) -> Result<u64, ParseError> {
    obj.get(key)
        .ok_or_else(|| schema(key, "missing"))?
        .as_u64()
        .ok_or_else(|| schema(key, "expected a nonnegative integer"))
}

fn array<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>, ParseError> {
    obj.get(key)
        .ok_or_else(|| schema(key, "missing"))?
        .as_array()
        .ok_or_else(|| schema(key, "expected an array"))
}

/// One-line description: vertices as `genus{legs}`, then edges.
///
/// `0{1,2} 1 | 0-1 1-1` is a genus-0 vertex carrying legs 1 and 2, joined to
/// a genus-1 vertex that has a loop.
pub fn describe(graph: &StableGraph) -> String {
    let mut out = String::new();
    for v in 0..graph.vertex_count() {
        if v > 0 {
            out.push(' ');
        }
        write!(out, "{}", graph.genus_of(v)).unwrap();
        let legs = graph.legs_at(v);
        if !legs.is_empty() {
            let list: Vec<String> = legs.iter().map(u32::to_string).collect();
            write!(out, "{{{}}}", list.join(",")).unwrap();
        }
    }
    if graph.edge_count() > 0 {
        out.push_str(" |");
        for &(a, b) in graph.edges() {
            write!(out, " {a}-{b}").unwrap();
        }
    }
    out
}

/// Hasse diagram of the degeneration poset. Arrows point from a stratum to
/// the strata it contracts onto; `rank` is the codimension.
pub fn poset_dot(poset: &StrataPoset) -> String {
    let mut out = String::new();
    writeln!(out, "digraph strata {{").unwrap();
    writeln!(
        out,
        "  graph [label=\"strata of type ({}, {})\", rankdir=BT];",
        poset.ty.genus(),
        poset.ty.legs()
    )
    .unwrap();
    writeln!(out, "  node [shape=box, fontname=monospace];").unwrap();
    for (i, node) in poset.nodes.iter().enumerate() {
        writeln!(
            out,
            "  n{i} [label=\"{}\", codim={}, rank={}];",
            describe(&node.graph),
            node.codim(),
            node.codim()
        )
        .unwrap();
    }
    let max_codim = poset.nodes.iter().map(|n| n.codim()).max().unwrap_or(0);
    for c in 0..=max_codim {
        let members: Vec<String> =
            (0..poset.len()).filter(|&i| poset.codim(i) == c).map(|i| format!("n{i};")).collect();
        writeln!(out, "  {{ rank=same; {} }}", members.join(" ")).unwrap();
    }
    for cover in &poset.covers {
        if cover.multiplicity > 1 {
            writeln!(out, "  n{} -> n{} [label=\"{}\"];", cover.from, cover.to, cover.multiplicity).unwrap();
        } else {
            writeln!(out, "  n{} -> n{};", cover.from, cover.to).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Every graph drawn as its own cluster: circles are components labelled by
/// genus, points are legs.
pub fn graphs_dot<'a>(graphs: impl IntoIterator<Item = (usize, &'a StableGraph)>) -> String {
    let mut out = String::new();
    writeln!(out, "graph dual_graphs {{").unwrap();
    writeln!(out, "  node [fontname=monospace];").unwrap();
    for (s, (codim, graph)) in graphs.into_iter().enumerate() {
        writeln!(out, "  subgraph cluster_{s} {{").unwrap();
        writeln!(out, "    label=\"#{s} codim {codim}\";").unwrap();
        for v in 0..graph.vertex_count() {
            writeln!(out, "    s{s}v{v} [shape=circle, label=\"{}\"];", graph.genus_of(v)).unwrap();
        }
        for (i, &v) in graph.leg_vertices().iter().enumerate() {
            writeln!(out, "    s{s}l{} [shape=plaintext, label=\"{}\"];", i + 1, i + 1).unwrap();
            writeln!(out, "    s{s}v{v} -- s{s}l{};", i + 1).unwrap();
        }
        for &(a, b) in graph.edges() {
            writeln!(out, "    s{s}v{a} -- s{s}v{b};").unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
