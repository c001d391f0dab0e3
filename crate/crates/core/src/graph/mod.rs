//! Graph structures: multigraphs, double graphs, infinite-graph
//! presentations, exhaustions, and black-and-white subgraphs.

mod bw;
mod double;
mod multigraph;
mod parse;
mod presentation;

pub use bw::{bw_extend, bw_subgraph, BwDoubleGraph, Color};
pub use double::{double, DoubleGraph};
pub use multigraph::{
    betti_finite, exhaustion_next, induced_subgraph, LocallyFinite, UndirectedMultigraph,
};
pub use parse::{parse_graph, ParsedGraph};
pub use presentation::{
    betti_limit, branching_number, BettiLimit, InfGraphPresentation, TreeAttachment,
};
