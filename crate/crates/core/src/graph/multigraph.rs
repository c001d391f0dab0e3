//! Undirected multigraphs and the exhaustion step.

use std::collections::{BTreeMap, BTreeSet};

use crate::ids::{GeoEdgeId, VertexId};
use crate::{Error, Result};

/// A finite undirected multigraph. Loops and parallel edges are allowed.
/// Edge endpoints keep the order in which they were declared; the double
/// graph orients the `rev == false` copy along that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedMultigraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<GeoEdgeId, (VertexId, VertexId)>,
}

/// Local access to a finite graph or to the infinite graph described by a
/// presentation. All queries are answerable from a finite neighborhood, which
/// is what makes exhaustions of locally finite infinite graphs computable.
pub trait LocallyFinite {
    fn has_vertex(&self, v: &VertexId) -> bool;
    fn edge_endpoints(&self, e: &GeoEdgeId) -> Option<(VertexId, VertexId)>;
    /// Every geometric edge touching `v`, with its stored endpoint order.
    /// Loops appear once.
    fn incident_edges(&self, v: &VertexId) -> Vec<(GeoEdgeId, VertexId, VertexId)>;
}

impl UndirectedMultigraph {
    pub fn new() -> Self {
        UndirectedMultigraph { vertices: BTreeSet::new(), edges: BTreeMap::new() }
    }

    /// Inserts a vertex; returns false if it was already present.
    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.vertices.insert(v)
    }

    pub fn add_edge(&mut self, id: GeoEdgeId, u: VertexId, v: VertexId) -> Result<()> {
        if !self.vertices.contains(&u) {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        if self.edges.contains_key(&id) {
            return Err(Error::DuplicateId(id.to_string()));
        }
        self.edges.insert(id, (u, v));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&GeoEdgeId, &(VertexId, VertexId))> {
        self.edges.iter()
    }

    pub fn endpoints(&self, e: &GeoEdgeId) -> Option<&(VertexId, VertexId)> {
        self.edges.get(e)
    }

    pub fn is_loop(&self, e: &GeoEdgeId) -> Option<bool> {
        self.edges.get(e).map(|(u, v)| u == v)
    }

    /// Number of edge endpoints at `v`; loops count twice.
    pub fn degree(&self, v: &VertexId) -> usize {
        self.edges
            .values()
            .map(|(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn component_count(&self) -> usize {
        let idx: BTreeMap<&VertexId, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut dsu: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(dsu: &mut Vec<usize>, mut x: usize) -> usize {
            while dsu[x] != x {
                dsu[x] = dsu[dsu[x]];
                x = dsu[x];
            }
            x
        }
        for (u, v) in self.edges.values() {
            let (a, b) = (find(&mut dsu, idx[u]), find(&mut dsu, idx[v]));
            dsu[a] = b;
        }
        (0..self.vertices.len()).filter(|&i| find(&mut dsu, i) == i).count()
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.component_count() == 1
    }

    /// Contracts the non-loop edge `e`: the edge disappears and its second
    /// endpoint is merged into the first. Parallel copies of `e` become
    /// loops at the merged vertex.
    pub fn contract_geo_edge(&self, e: &GeoEdgeId) -> Result<UndirectedMultigraph> {
        let Some((keep, gone)) = self.edges.get(e).cloned() else {
            return Err(Error::UnknownEdge(e.to_string()));
        };
        if keep == gone {
            return Err(Error::LoopContraction(e.to_string()));
        }
        let remap = |v: VertexId| if v == gone { keep.clone() } else { v };
        let mut out = UndirectedMultigraph::new();
        for v in &self.vertices {
            if v != &gone {
                out.add_vertex(v.clone());
            }
        }
        for (id, (u, v)) in &self.edges {
            if id != e {
                out.add_edge(id.clone(), remap(u.clone()), remap(v.clone()))?;
            }
        }
        Ok(out)
    }

    /// Checks that `self` sits inside `amb` with matching endpoints.
    pub fn check_subgraph_of(&self, amb: &impl LocallyFinite) -> Result<()> {
        for v in &self.vertices {
            if !amb.has_vertex(v) {
                return Err(Error::NotASubgraph(format!("vertex `{v}` is not ambient")));
            }
        }
        for (id, (u, v)) in &self.edges {
            match amb.edge_endpoints(id) {
                Some((a, b)) if &a == u && &b == v => {}
                _ => return Err(Error::NotASubgraph(format!("edge `{id}` is not ambient"))),
            }
        }
        Ok(())
    }
}

impl Default for UndirectedMultigraph {
    fn default() -> Self {
        Self::new()
    }
}

impl LocallyFinite for UndirectedMultigraph {
    fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    fn edge_endpoints(&self, e: &GeoEdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(e).cloned()
    }

    fn incident_edges(&self, v: &VertexId) -> Vec<(GeoEdgeId, VertexId, VertexId)> {
        self.edges
            .iter()
            .filter(|(_, (a, b))| a == v || b == v)
            .map(|(id, (a, b))| (id.clone(), a.clone(), b.clone()))
            .collect()
    }
}

/// First Betti number `β = d1 - d0 + m` of a finite graph with `d1` edges,
/// `d0` vertices and `m` connected components. The empty graph has `β = 0`.
pub fn betti_finite(g: &UndirectedMultigraph) -> usize {
    if g.vertex_count() == 0 {
        return 0;
    }
    // d1 + m >= d0: every component spends at most |vertices| - 1 edges on a
    // spanning tree.
    g.edge_count() + g.component_count() - g.vertex_count()
}

/// One exhaustion step: adds to `sub` every ambient edge incident to a vertex
/// of `sub`, together with the far endpoints of those edges.
pub fn exhaustion_next(
    amb: &impl LocallyFinite,
    sub: &UndirectedMultigraph,
) -> Result<UndirectedMultigraph> {
    sub.check_subgraph_of(amb)?;
    let mut out = sub.clone();
    for v in sub.vertices.iter() {
        for (id, a, b) in amb.incident_edges(v) {
            out.add_vertex(a.clone());
            out.add_vertex(b.clone());
            if out.endpoints(&id).is_none() {
                out.add_edge(id, a, b)?;
            }
        }
    }
    Ok(out)
}

/// The subgraph of `amb` induced on `verts`: those vertices and every ambient
/// edge with both endpoints among them.
///
/// Only usable when the induced edge set is finite and discoverable from the
/// vertices, which holds for every ambient graph in this crate.
pub fn induced_subgraph(
    amb: &impl LocallyFinite,
    verts: &BTreeSet<VertexId>,
) -> Result<UndirectedMultigraph> {
    let mut out = UndirectedMultigraph::new();
    for v in verts {
        if !amb.has_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        out.add_vertex(v.clone());
    }
    for v in verts {
        for (id, a, b) in amb.incident_edges(v) {
            if verts.contains(&a) && verts.contains(&b) && out.endpoints(&id).is_none() {
                out.add_edge(id, a, b)?;
            }
        }
    }
    Ok(out)
}
