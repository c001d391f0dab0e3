//! Double graphs: the directed-edge picture of an undirected multigraph.

use std::collections::BTreeMap;

use crate::ids::{DirEdgeId, VertexId};
use crate::{Error, Result};

use super::multigraph::UndirectedMultigraph;

/// The double graph of an undirected multigraph: every geometric edge `x`
/// becomes two directed edges `x` and `x~` with `s(x~) = r(x)`,
/// `r(x~) = s(x)`. The bar map `e -> ē` is a fixed-point-free involution;
/// for a geometric loop the two directed copies are distinct edges with equal
/// source and range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleGraph {
    // Directed edge -> (source, range).
    edges: BTreeMap<DirEdgeId, (VertexId, VertexId)>,
}

/// Builds the double graph. `|E^1| = 2 * d1` always holds.
pub fn double(g: &UndirectedMultigraph) -> DoubleGraph {
    let mut edges = BTreeMap::new();
    for (id, (u, v)) in g.edges() {
        edges.insert(DirEdgeId::fwd(id.clone()), (u.clone(), v.clone()));
        edges.insert(DirEdgeId::rev(id.clone()), (v.clone(), u.clone()));
    }
    DoubleGraph { edges }
}

impl DoubleGraph {
    /// Assembles a double graph from raw directed edges, validating that the
    /// bar pairing is present and consistent.
    pub fn from_parts(edges: BTreeMap<DirEdgeId, (VertexId, VertexId)>) -> Result<DoubleGraph> {
        for (e, (s, r)) in &edges {
            match edges.get(&e.bar()) {
                Some((bs, br)) if bs == r && br == s => {}
                _ => {
                    return Err(Error::NotASubgraph(format!(
                        "edge `{e}` has no consistent reverse"
                    )))
                }
            }
        }
        Ok(DoubleGraph { edges })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Directed edges in canonical (sorted) order.
    pub fn edge_ids(&self) -> Vec<DirEdgeId> {
        self.edges.keys().cloned().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&DirEdgeId, &(VertexId, VertexId))> {
        self.edges.iter()
    }

    pub fn contains(&self, e: &DirEdgeId) -> bool {
        self.edges.contains_key(e)
    }

    pub fn source(&self, e: &DirEdgeId) -> Option<&VertexId> {
        self.edges.get(e).map(|(s, _)| s)
    }

    pub fn range(&self, e: &DirEdgeId) -> Option<&VertexId> {
        self.edges.get(e).map(|(_, r)| r)
    }

    pub fn is_loop(&self, e: &DirEdgeId) -> Option<bool> {
        self.edges.get(e).map(|(s, r)| s == r)
    }

    /// Map from vertex to the directed edges with that source, in canonical
    /// order. This is the successor structure the operator matrix reads.
    pub fn source_index(&self) -> BTreeMap<VertexId, Vec<DirEdgeId>> {
        let mut idx: BTreeMap<VertexId, Vec<DirEdgeId>> = BTreeMap::new();
        for (e, (s, _)) in &self.edges {
            idx.entry(s.clone()).or_default().push(e.clone());
        }
        idx
    }

    /// Contracts the non-loop directed edge `e`: removes `e` and `ē` and
    /// merges `r(e)` into `s(e)`.
    pub fn contract_edge(&self, e: &DirEdgeId) -> Result<DoubleGraph> {
        let Some((keep, gone)) = self.edges.get(e).cloned() else {
            return Err(Error::UnknownEdge(e.to_string()));
        };
        if keep == gone {
            return Err(Error::LoopContraction(e.to_string()));
        }
        let bar = e.bar();
        let remap = |v: &VertexId| if v == &gone { keep.clone() } else { v.clone() };
        let edges = self
            .edges
            .iter()
            .filter(|(id, _)| *id != e && **id != bar)
            .map(|(id, (s, r))| (id.clone(), (remap(s), remap(r))))
            .collect();
        Ok(DoubleGraph { edges })
    }
}
