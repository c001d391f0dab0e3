//! Black-and-white subgraphs of a double graph.
//!
//! For a finite vertex set Ω, the fragment holds every directed edge with at
//! least one endpoint in Ω. An edge is *black* when both endpoints lie in Ω
//! and *white* otherwise; an edge and its reverse always share a color. For a
//! black edge `e`, every ambient continuation (edge with source `r(e)`) is a
//! fragment edge, so the full K0-relation of `e` is expressible inside the
//! fragment — this is the property that makes the exhaustion functorial.

use std::collections::{BTreeMap, BTreeSet};

use crate::ids::{DirEdgeId, VertexId};
use crate::{Error, Result};

use super::multigraph::LocallyFinite;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
}

/// The black-and-white double subgraph over a finite vertex set Ω.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwDoubleGraph {
    omega: BTreeSet<VertexId>,
    // Directed edge -> (source, range); closed under bar.
    edges: BTreeMap<DirEdgeId, (VertexId, VertexId)>,
}

/// Builds the black-and-white subgraph over `omega`.
pub fn bw_subgraph(
    amb: &impl LocallyFinite,
    omega: &BTreeSet<VertexId>,
) -> Result<BwDoubleGraph> {
    let mut edges = BTreeMap::new();
    for v in omega {
        if !amb.has_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        for (geo, a, b) in amb.incident_edges(v) {
            edges.insert(DirEdgeId::fwd(geo.clone()), (a.clone(), b.clone()));
            edges.insert(DirEdgeId::rev(geo), (b, a));
        }
    }
    Ok(BwDoubleGraph { omega: omega.clone(), edges })
}

/// One functorial extension step: Ω grows by all its neighbors, so every
/// previously white edge turns black and a new white boundary appears (unless
/// the ambient graph is exhausted).
pub fn bw_extend(amb: &impl LocallyFinite, b: &BwDoubleGraph) -> Result<BwDoubleGraph> {
    let mut omega = b.omega.clone();
    for (s, r) in b.edges.values() {
        omega.insert(s.clone());
        omega.insert(r.clone());
    }
    bw_subgraph(amb, &omega)
}

impl BwDoubleGraph {
    pub fn omega(&self) -> &BTreeSet<VertexId> {
        &self.omega
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Directed edges in canonical order; these index the stage group's
    /// generators.
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

    pub fn color(&self, e: &DirEdgeId) -> Option<Color> {
        self.edges.get(e).map(|(s, r)| {
            if self.omega.contains(s) && self.omega.contains(r) {
                Color::Black
            } else {
                Color::White
            }
        })
    }

    pub fn black_edges(&self) -> Vec<DirEdgeId> {
        self.edges
            .keys()
            .filter(|e| self.color(e) == Some(Color::Black))
            .cloned()
            .collect()
    }

    pub fn is_all_black(&self) -> bool {
        self.edges.keys().all(|e| self.color(e) == Some(Color::Black))
    }

    /// Source index restricted to the fragment.
    pub fn source_index(&self) -> BTreeMap<VertexId, Vec<DirEdgeId>> {
        let mut idx: BTreeMap<VertexId, Vec<DirEdgeId>> = BTreeMap::new();
        for (e, (s, _)) in &self.edges {
            idx.entry(s.clone()).or_default().push(e.clone());
        }
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::presentation::InfGraphPresentation;
    use crate::ids::GeoEdgeId;
    use crate::sample;

    fn omega(names: &[&str]) -> BTreeSet<VertexId> {
        names.iter().map(|n| VertexId::core(*n)).collect()
    }

    #[test]
    fn empty_omega_gives_the_empty_fragment() {
        let p = sample::rose_with_rays(1, 1);
        let b = bw_subgraph(&p, &BTreeSet::new()).unwrap();
        assert_eq!(b.edge_count(), 0);
        assert!(b.is_all_black());
    }

    #[test]
    fn loop_plus_ray_fragment_at_the_rose_vertex() {
        let p = sample::rose_with_rays(1, 1);
        let b = bw_subgraph(&p, &omega(&["v"])).unwrap();
        assert_eq!(b.edge_count(), 4);
        let loop_edge = DirEdgeId::fwd(GeoEdgeId::core("u1"));
        let ray_edge = DirEdgeId::fwd(GeoEdgeId::Ray { ray: "r1".into(), index: 1 });
        assert_eq!(b.color(&loop_edge), Some(Color::Black));
        assert_eq!(b.color(&loop_edge.bar()), Some(Color::Black));
        assert_eq!(b.color(&ray_edge), Some(Color::White));
        assert_eq!(b.color(&ray_edge.bar()), Some(Color::White));
    }

    #[test]
    fn full_omega_on_a_finite_graph_is_all_black() {
        let g = sample::theta();
        let p = InfGraphPresentation::finite(g.clone()).unwrap();
        let all: BTreeSet<VertexId> = g.vertices().cloned().collect();
        let b = bw_subgraph(&p, &all).unwrap();
        assert!(b.is_all_black());
        assert_eq!(b.edge_count(), 2 * g.edge_count());
    }

    #[test]
    fn edges_pair_with_their_reverses_in_the_same_color() {
        let p = sample::rose_with_rays(2, 2);
        let b = bw_subgraph(&p, &omega(&["v"])).unwrap();
        for (e, _) in b.edges() {
            assert!(b.contains(&e.bar()));
            assert_eq!(b.color(e), b.color(&e.bar()));
        }
    }

    #[test]
    fn black_edges_have_all_continuations_in_the_fragment() {
        let p = sample::rose_with_rays(2, 1);
        let b = bw_subgraph(&p, &omega(&["v"])).unwrap();
        for e in b.black_edges() {
            let r = b.range(&e).unwrap().clone();
            for (geo, a, bb) in p.incident_edges(&r) {
                for dir in [DirEdgeId::fwd(geo.clone()), DirEdgeId::rev(geo.clone())] {
                    let src = if dir.rev { &bb } else { &a };
                    if src == &r {
                        assert!(b.contains(&dir), "continuation {dir} missing");
                    }
                }
            }
        }
    }

    #[test]
    fn extend_equals_subgraph_of_the_grown_omega() {
        let p = sample::rose_with_rays(1, 2);
        let b0 = bw_subgraph(&p, &omega(&["v"])).unwrap();
        let b1 = bw_extend(&p, &b0).unwrap();
        let mut grown = omega(&["v"]);
        grown.insert(VertexId::Ray { ray: "r1".into(), index: 1 });
        grown.insert(VertexId::Ray { ray: "r2".into(), index: 1 });
        assert_eq!(b1, bw_subgraph(&p, &grown).unwrap());
        // Previously white edges are now black.
        let first = DirEdgeId::fwd(GeoEdgeId::Ray { ray: "r1".into(), index: 1 });
        assert_eq!(b1.color(&first), Some(Color::Black));
    }

    #[test]
    fn iterated_extension_exhausts_a_finite_graph_within_its_diameter() {
        // Breadth-first eccentricity bound: from any single seed vertex the
        // extension reaches every vertex in at most diameter steps.
        let g = sample::cycle(5);
        let p = InfGraphPresentation::finite(g.clone()).unwrap();
        let diameter = 2; // 5-cycle
        for v in g.vertices() {
            let mut b = bw_subgraph(&p, &[v.clone()].into()).unwrap();
            for _ in 0..diameter {
                b = bw_extend(&p, &b).unwrap();
            }
            assert!(b.is_all_black());
            assert_eq!(b.edge_count(), 2 * g.edge_count());
        }
    }
}
