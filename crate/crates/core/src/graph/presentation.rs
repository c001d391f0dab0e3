//! Finite presentations of locally finite infinite graphs.
//!
//! A presentation is a finite connected core together with attachments at
//! core vertices:
//!
//! - a *ray* is a one-ended infinite simple chain;
//! - a *tree* with branching degree `b >= 2` grows `b` children from its
//!   attachment vertex and `b` children from every tree vertex after that.
//!
//! Attachment vertices and edges are addressed lazily through structured ids,
//! so arbitrarily deep finite truncations can be materialized on demand.

use std::collections::{BTreeMap, BTreeSet};

use crate::ids::{GeoEdgeId, VertexId};
use crate::zlinalg::Extent;
use crate::{Error, Result};

use super::multigraph::{
    betti_finite, exhaustion_next, induced_subgraph, LocallyFinite, UndirectedMultigraph,
};

/// A tree attachment: at `root`, with every tree vertex having exactly
/// `branching` children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAttachment {
    pub root: VertexId,
    pub branching: u8,
}

/// Finite description of a locally finite graph: connected finite core plus
/// ray and tree attachments. With no attachments the described graph is just
/// the (finite) core; the K-theory entry points for infinite graphs reject
/// that case explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfGraphPresentation {
    core: UndirectedMultigraph,
    rays: BTreeMap<String, VertexId>,
    trees: BTreeMap<String, TreeAttachment>,
}

impl InfGraphPresentation {
    pub fn new(
        core: UndirectedMultigraph,
        rays: BTreeMap<String, VertexId>,
        trees: BTreeMap<String, TreeAttachment>,
    ) -> Result<Self> {
        if !core.is_connected() {
            return Err(Error::DisconnectedCore);
        }
        for v in rays.values().chain(trees.values().map(|t| &t.root)) {
            if !core.has_vertex(v) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        for t in trees.values() {
            if t.branching < 2 {
                return Err(Error::BadBranching(t.branching as u64));
            }
        }
        Ok(InfGraphPresentation { core, rays, trees })
    }

    pub fn finite(core: UndirectedMultigraph) -> Result<Self> {
        InfGraphPresentation::new(core, BTreeMap::new(), BTreeMap::new())
    }

    pub fn core(&self) -> &UndirectedMultigraph {
        &self.core
    }

    pub fn rays(&self) -> &BTreeMap<String, VertexId> {
        &self.rays
    }

    pub fn trees(&self) -> &BTreeMap<String, TreeAttachment> {
        &self.trees
    }

    /// Whether the presented graph is infinite (has at least one attachment).
    pub fn is_infinite(&self) -> bool {
        !self.rays.is_empty() || !self.trees.is_empty()
    }

    pub fn core_vertex_set(&self) -> BTreeSet<VertexId> {
        self.core.vertices().cloned().collect()
    }
}

impl LocallyFinite for InfGraphPresentation {
    fn has_vertex(&self, v: &VertexId) -> bool {
        match v {
            VertexId::Core(_) => self.core.has_vertex(v),
            VertexId::Ray { ray, index } => *index >= 1 && self.rays.contains_key(ray),
            VertexId::Tree { tree, path } => self
                .trees
                .get(tree)
                .is_some_and(|t| !path.is_empty() && path.iter().all(|&c| c < t.branching)),
        }
    }

    fn edge_endpoints(&self, e: &GeoEdgeId) -> Option<(VertexId, VertexId)> {
        match e {
            GeoEdgeId::Core(_) => self.core.endpoints(e).cloned(),
            GeoEdgeId::Ray { ray, index } => {
                let at = self.rays.get(ray)?;
                if *index == 0 {
                    return None;
                }
                let near = if *index == 1 {
                    at.clone()
                } else {
                    VertexId::Ray { ray: ray.clone(), index: index - 1 }
                };
                Some((near, VertexId::Ray { ray: ray.clone(), index: *index }))
            }
            GeoEdgeId::Tree { tree, path } => {
                let t = self.trees.get(tree)?;
                if path.is_empty() || path.iter().any(|&c| c >= t.branching) {
                    return None;
                }
                let near = if path.len() == 1 {
                    t.root.clone()
                } else {
                    VertexId::Tree { tree: tree.clone(), path: path[..path.len() - 1].to_vec() }
                };
                Some((near, VertexId::Tree { tree: tree.clone(), path: path.clone() }))
            }
        }
    }

    fn incident_edges(&self, v: &VertexId) -> Vec<(GeoEdgeId, VertexId, VertexId)> {
        let mut out = Vec::new();
        match v {
            VertexId::Core(_) => {
                out.extend(self.core.incident_edges(v));
                for (ray, at) in &self.rays {
                    if at == v {
                        let id = GeoEdgeId::Ray { ray: ray.clone(), index: 1 };
                        out.push((id, v.clone(), VertexId::Ray { ray: ray.clone(), index: 1 }));
                    }
                }
                for (tree, t) in &self.trees {
                    if &t.root == v {
                        for c in 0..t.branching {
                            let id = GeoEdgeId::Tree { tree: tree.clone(), path: vec![c] };
                            let far = VertexId::Tree { tree: tree.clone(), path: vec![c] };
                            out.push((id, v.clone(), far));
                        }
                    }
                }
            }
            VertexId::Ray { ray, index } => {
                if self.has_vertex(v) {
                    for k in [*index, index + 1] {
                        let id = GeoEdgeId::Ray { ray: ray.clone(), index: k };
                        let (a, b) = self.edge_endpoints(&id).expect("ray edges are total");
                        out.push((id, a, b));
                    }
                }
            }
            VertexId::Tree { tree, path } => {
                if self.has_vertex(v) {
                    let b = self.trees[tree].branching;
                    let parent = GeoEdgeId::Tree { tree: tree.clone(), path: path.clone() };
                    let (pa, pb) = self.edge_endpoints(&parent).expect("tree edges are total");
                    out.push((parent, pa, pb));
                    for c in 0..b {
                        let mut child = path.clone();
                        child.push(c);
                        let id = GeoEdgeId::Tree { tree: tree.clone(), path: child.clone() };
                        let far = VertexId::Tree { tree: tree.clone(), path: child };
                        out.push((id, v.clone(), far));
                    }
                }
            }
        }
        out
    }
}

/// Result of the stabilized Betti number computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiLimit {
    pub value: usize,
    /// First exhaustion step at which the final value was attained.
    pub stabilized_at: usize,
    /// Betti number of every computed step, starting with the seed itself.
    pub steps: Vec<usize>,
}

/// Betti number of the presented graph as the limit over an exhaustion from
/// `seed` (a set of existing vertices whose induced subgraph must be
/// connected). The sequence is non-decreasing and becomes constant once the
/// exhaustion contains the whole core: attachments are trees, every later
/// edge arrives together with a fresh endpoint. Returns
/// [`Error::Unstable`] if the core is not swallowed within `max_steps`.
pub fn betti_limit(
    p: &InfGraphPresentation,
    seed: &BTreeSet<VertexId>,
    max_steps: usize,
) -> Result<BettiLimit> {
    if seed.is_empty() {
        return Err(Error::BadSeed("seed must be non-empty".into()));
    }
    let mut sub = induced_subgraph(p, seed)?;
    if !sub.is_connected() {
        return Err(Error::BadSeed("seed must induce a connected subgraph".into()));
    }
    let contains_core = |sub: &UndirectedMultigraph| {
        p.core.vertices().all(|v| sub.has_vertex(v))
            && p.core.edges().all(|(id, _)| sub.endpoints(id).is_some())
    };
    let mut steps = vec![betti_finite(&sub)];
    for _ in 0..max_steps {
        if contains_core(&sub) {
            let value = *steps.last().expect("at least the seed step");
            let stabilized_at =
                steps.iter().position(|&b| b == value).expect("value occurs in steps");
            return Ok(BettiLimit { value, stabilized_at, steps });
        }
        sub = exhaustion_next(p, &sub)?;
        steps.push(betti_finite(&sub));
    }
    if contains_core(&sub) {
        let value = *steps.last().expect("at least the seed step");
        let stabilized_at = steps.iter().position(|&b| b == value).expect("value occurs");
        return Ok(BettiLimit { value, stabilized_at, steps });
    }
    Err(Error::Unstable { steps: max_steps })
}

/// Number of ends of the presented graph: the count of ray attachments when
/// there are no tree attachments, and ω as soon as one tree with branching
/// `>= 2` is present (its end space is a Cantor set). Finite pendant parts of
/// the core contribute nothing. A presentation without attachments has 0.
pub fn branching_number(p: &InfGraphPresentation) -> Extent {
    if !p.trees.is_empty() {
        Extent::Omega
    } else {
        Extent::Finite(p.rays.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn presentation_rejects_disconnected_core() {
        let mut core = UndirectedMultigraph::new();
        core.add_vertex(VertexId::core("a"));
        core.add_vertex(VertexId::core("b"));
        assert!(matches!(InfGraphPresentation::finite(core), Err(Error::DisconnectedCore)));
    }

    #[test]
    fn presentation_rejects_low_branching() {
        let core = sample::rose(1);
        let mut trees = BTreeMap::new();
        trees.insert("t".to_string(), TreeAttachment { root: VertexId::core("v"), branching: 1 });
        assert!(matches!(
            InfGraphPresentation::new(core, BTreeMap::new(), trees),
            Err(Error::BadBranching(1))
        ));
    }

    #[test]
    fn presentation_rejects_unknown_attachment_vertex() {
        let core = sample::rose(1);
        let mut rays = BTreeMap::new();
        rays.insert("r".to_string(), VertexId::core("nope"));
        assert!(InfGraphPresentation::new(core, rays, BTreeMap::new()).is_err());
    }

    #[test]
    fn ray_neighborhoods() {
        let p = sample::rose_with_rays(1, 1);
        let v1 = VertexId::Ray { ray: "r1".into(), index: 1 };
        let inc = p.incident_edges(&v1);
        assert_eq!(inc.len(), 2);
        assert!(p.has_vertex(&v1));
        assert!(!p.has_vertex(&VertexId::Ray { ray: "zz".into(), index: 1 }));
    }

    #[test]
    fn tree_neighborhoods() {
        let p = sample::core_with_tree(sample::rose(1), 2);
        let child = VertexId::Tree { tree: "t1".into(), path: vec![1] };
        let inc = p.incident_edges(&child);
        // Parent edge plus two children.
        assert_eq!(inc.len(), 3);
        let rose_vertex = VertexId::core("v");
        let at_root = p.incident_edges(&rose_vertex);
        // The loop plus two root children.
        assert_eq!(at_root.len(), 3);
    }

    #[test]
    fn exhaustion_from_the_rose_vertex_of_loop_plus_ray() {
        let p = sample::rose_with_rays(1, 1);
        let seed: BTreeSet<VertexId> = [VertexId::core("v")].into();
        let sub = induced_subgraph(&p, &seed).unwrap();
        // Induced subgraph already contains the loop (both endpoints are v).
        assert_eq!(sub.edge_count(), 1);
        let next = exhaustion_next(&p, &sub).unwrap();
        assert_eq!(next.edge_count(), 2);
        assert!(next.has_vertex(&VertexId::Ray { ray: "r1".into(), index: 1 }));
    }

    #[test]
    fn betti_limit_of_loop_plus_ray_is_one() {
        let p = sample::rose_with_rays(1, 1);
        let seed: BTreeSet<VertexId> = [VertexId::core("v")].into();
        let out = betti_limit(&p, &seed, 16).unwrap();
        assert_eq!(out.value, 1);
        assert_eq!(out.stabilized_at, 0);
    }

    #[test]
    fn betti_limit_of_a_pure_ray_is_zero() {
        let p = sample::rose_with_rays(0, 1);
        let seed: BTreeSet<VertexId> = [VertexId::core("v")].into();
        let out = betti_limit(&p, &seed, 16).unwrap();
        assert_eq!(out.value, 0);
    }

    #[test]
    fn betti_limit_is_seed_independent() {
        let p = sample::rose_with_rays(3, 1);
        let a: BTreeSet<VertexId> = [VertexId::core("v")].into();
        let b: BTreeSet<VertexId> =
            [VertexId::core("v"), VertexId::Ray { ray: "r1".into(), index: 1 }].into();
        assert_eq!(betti_limit(&p, &a, 16).unwrap().value, 3);
        assert_eq!(betti_limit(&p, &b, 16).unwrap().value, 3);
    }

    #[test]
    fn betti_limit_with_tree_attachment() {
        let p = sample::core_with_tree(sample::rose(3), 2);
        let seed: BTreeSet<VertexId> = [VertexId::core("v")].into();
        let out = betti_limit(&p, &seed, 16).unwrap();
        assert_eq!(out.value, 3);
        let deep: BTreeSet<VertexId> = [VertexId::Tree { tree: "t1".into(), path: vec![0, 1] }].into();
        assert_eq!(betti_limit(&p, &deep, 16).unwrap().value, 3);
    }

    #[test]
    fn betti_limit_rejects_disconnected_seed() {
        let p = sample::rose_with_rays(1, 1);
        let seed: BTreeSet<VertexId> =
            [VertexId::core("v"), VertexId::Ray { ray: "r1".into(), index: 2 }].into();
        assert!(matches!(betti_limit(&p, &seed, 16), Err(Error::BadSeed(_))));
    }

    #[test]
    fn betti_limit_reports_instability_when_cut_off() {
        let p = sample::rose_with_rays(2, 1);
        let far: BTreeSet<VertexId> = [VertexId::Ray { ray: "r1".into(), index: 9 }].into();
        assert!(matches!(betti_limit(&p, &far, 2), Err(Error::Unstable { steps: 2 })));
    }

    #[test]
    fn branching_numbers() {
        assert_eq!(branching_number(&sample::rose_with_rays(2, 3)), Extent::Finite(3));
        assert_eq!(
            branching_number(&InfGraphPresentation::finite(sample::rose(2)).unwrap()),
            Extent::Finite(0)
        );
        let with_tree = sample::core_with_tree(sample::path(2), 2);
        assert_eq!(branching_number(&with_tree), Extent::Omega);
    }
}
