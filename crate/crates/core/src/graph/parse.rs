//! Text format for graphs and presentations.
//!
//! One declaration per line; `#` starts a comment.
//!
//! ```text
//! V <vertex-id>                  # declare a vertex
//! E <edge-id> <u> <v>            # undirected edge (u = v allowed: loop)
//! R <ray-id> <vertex-id>         # attach an infinite ray
//! T <tree-id> <vertex-id> <b>    # attach an infinite b-ary tree, b >= 2
//! ```
//!
//! Ids may use letters, digits, `_`, `-` and `.`; they share one namespace.
//! A file without `R`/`T` lines describes a finite graph; with attachments it
//! must have a connected core.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::presentation::{InfGraphPresentation, TreeAttachment};
use crate::graph::UndirectedMultigraph;
use crate::ids::{GeoEdgeId, VertexId};
use crate::{Error, Result};

/// A parsed graph file: either a finite multigraph or a presentation of an
/// infinite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedGraph {
    Finite(UndirectedMultigraph),
    Presentation(InfGraphPresentation),
}

impl ParsedGraph {
    pub fn is_finite(&self) -> bool {
        matches!(self, ParsedGraph::Finite(_))
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn check_id(line: usize, id: &str) -> Result<()> {
    if id.is_empty()
        || !id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
    {
        return Err(err(
            line,
            format!("invalid id `{id}` (allowed: letters, digits, `_`, `-`, `.`)"),
        ));
    }
    Ok(())
}

/// Parses the graph text format. Errors carry the 1-based line number.
pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    struct Line<'a> {
        no: usize,
        tokens: Vec<&'a str>,
    }
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.is_empty() { None } else { Some(Line { no: i + 1, tokens }) }
        })
        .collect();

    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut claim = |line: usize, id: &str| -> Result<()> {
        check_id(line, id)?;
        if !seen.insert(id.to_string()) {
            return Err(err(line, format!("duplicate id `{id}`")));
        }
        Ok(())
    };

    // First pass: vertices, so edges may reference vertices declared later.
    let mut g = UndirectedMultigraph::new();
    for l in &lines {
        if l.tokens[0] == "V" {
            if l.tokens.len() != 2 {
                return Err(err(l.no, "expected `V <vertex-id>`"));
            }
            claim(l.no, l.tokens[1])?;
            g.add_vertex(VertexId::core(l.tokens[1]));
        }
    }

    let mut rays: BTreeMap<String, VertexId> = BTreeMap::new();
    let mut trees: BTreeMap<String, TreeAttachment> = BTreeMap::new();
    for l in &lines {
        match l.tokens[0] {
            "V" => {}
            "E" => {
                if l.tokens.len() != 4 {
                    return Err(err(l.no, "expected `E <edge-id> <u> <v>`"));
                }
                claim(l.no, l.tokens[1])?;
                let u = VertexId::core(l.tokens[2]);
                let v = VertexId::core(l.tokens[3]);
                g.add_edge(GeoEdgeId::core(l.tokens[1]), u, v)
                    .map_err(|e| err(l.no, e.to_string()))?;
            }
            "R" => {
                if l.tokens.len() != 3 {
                    return Err(err(l.no, "expected `R <ray-id> <vertex-id>`"));
                }
                claim(l.no, l.tokens[1])?;
                let at = VertexId::core(l.tokens[2]);
                if !g.has_vertex(&at) {
                    return Err(err(l.no, format!("unknown vertex `{}`", l.tokens[2])));
                }
                rays.insert(l.tokens[1].to_string(), at);
            }
            "T" => {
                if l.tokens.len() != 4 {
                    return Err(err(l.no, "expected `T <tree-id> <vertex-id> <b>`"));
                }
                claim(l.no, l.tokens[1])?;
                let at = VertexId::core(l.tokens[2]);
                if !g.has_vertex(&at) {
                    return Err(err(l.no, format!("unknown vertex `{}`", l.tokens[2])));
                }
                let b: u64 = l.tokens[3]
                    .parse()
                    .map_err(|_| err(l.no, format!("invalid branching `{}`", l.tokens[3])))?;
                if !(2..=255).contains(&b) {
                    return Err(err(l.no, format!("branching must lie in 2..=255, got {b}")));
                }
                trees.insert(
                    l.tokens[1].to_string(),
                    TreeAttachment { root: at, branching: b as u8 },
                );
            }
            other => {
                return Err(err(l.no, format!("unknown directive `{other}`")));
            }
        }
    }

    if rays.is_empty() && trees.is_empty() {
        Ok(ParsedGraph::Finite(g))
    } else {
        let p = InfGraphPresentation::new(g, rays, trees).map_err(|e| match e {
            Error::DisconnectedCore => Error::Parse {
                line: 1,
                message: "a presentation with attachments needs a connected core".into(),
            },
            other => other,
        })?;
        Ok(ParsedGraph::Presentation(p))
    }
}
