//! Graph file formats.
//!
//! Text: one edge per line as `u v` (repeat a line for parallel edges),
//! `vertex u` lines for isolated vertices, `#` comments. Vertex names
//! are arbitrary tokens mapped to indices in order of first appearance;
//! edge ids follow line order.
//!
//! JSON: mirrors the in-memory graph with explicit dense edge ids.
//! Parsing then emitting JSON is the identity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    vertex_count: usize,
    edges: Vec<EdgeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeJson {
    id: usize,
    u: usize,
    v: usize,
}

pub fn parse_text(input: &str) -> Result<MultiGraph> {
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let intern = |token: &str, names: &mut HashMap<String, usize>| -> usize {
        let next = names.len();
        *names.entry(token.to_string()).or_insert(next)
    };
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["vertex", name] => {
                intern(name, &mut names);
            }
            [u, v] => {
                let ui = intern(u, &mut names);
                let vi = intern(v, &mut names);
                if ui == vi {
                    return Err(Error::Parse {
                        line,
                        msg: format!("loop edge at vertex '{u}'"),
                    });
                }
                edges.push((ui, vi));
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 'u v' or 'vertex u', got '{content}'"),
                })
            }
        }
    }
    MultiGraph::new(names.len(), edges)
}

pub fn emit_text(g: &MultiGraph) -> String {
    let mut out = String::new();
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            out.push_str(&format!("vertex {v}\n"));
        }
    }
    for (_, u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_json(input: &str) -> Result<MultiGraph> {
    let parsed: GraphJson = serde_json::from_str(input)
        .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    for (i, edge) in parsed.edges.iter().enumerate() {
        if edge.id != i {
            return Err(Error::Input(format!(
                "edge ids must be dense and in order; position {i} has id {}",
                edge.id
            )));
        }
    }
    MultiGraph::new(
        parsed.vertex_count,
        parsed.edges.iter().map(|e| (e.u, e.v)).collect(),
    )
}

pub fn emit_json(g: &MultiGraph) -> String {
    let doc = GraphJson {
        vertex_count: g.vertex_count(),
        edges: g
            .edges()
            .map(|(id, u, v)| EdgeJson { id, u, v })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

/// Parses either format, sniffing JSON by the leading brace.
pub fn parse_auto(input: &str) -> Result<MultiGraph> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}
