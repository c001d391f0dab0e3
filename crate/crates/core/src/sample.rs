//! Small graph builders used in tests, documentation and the README.

use std::collections::BTreeMap;

use crate::graph::{InfGraphPresentation, TreeAttachment, UndirectedMultigraph};
use crate::ids::{GeoEdgeId, VertexId};

/// Rose with `m` petals: one vertex `v`, loops `u1..um`.
pub fn rose(m: usize) -> UndirectedMultigraph {
    let mut g = UndirectedMultigraph::new();
    g.add_vertex(VertexId::core("v"));
    for j in 1..=m {
        g.add_edge(GeoEdgeId::core(format!("u{j}")), VertexId::core("v"), VertexId::core("v"))
            .expect("loop endpoints exist");
    }
    g
}

/// Path on `n` vertices `v1..vn` with edges `e1..e(n-1)`.
pub fn path(n: usize) -> UndirectedMultigraph {
    let mut g = UndirectedMultigraph::new();
    for i in 1..=n {
        g.add_vertex(VertexId::core(format!("v{i}")));
    }
    for i in 1..n {
        g.add_edge(
            GeoEdgeId::core(format!("e{i}")),
            VertexId::core(format!("v{i}")),
            VertexId::core(format!("v{}", i + 1)),
        )
        .expect("endpoints exist");
    }
    g
}

/// Cycle on `n >= 1` vertices (`n = 1` is a loop).
pub fn cycle(n: usize) -> UndirectedMultigraph {
    let mut g = path(n);
    g.add_edge(GeoEdgeId::core(format!("e{n}")), VertexId::core(format!("v{n}")), VertexId::core("v1"))
        .expect("endpoints exist");
    g
}

/// Single edge between `v1` and `v2`.
pub fn single_edge() -> UndirectedMultigraph {
    path(2)
}

/// Theta graph: two vertices `a`, `b` joined by three parallel edges.
pub fn theta() -> UndirectedMultigraph {
    let mut g = UndirectedMultigraph::new();
    g.add_vertex(VertexId::core("a"));
    g.add_vertex(VertexId::core("b"));
    for j in 1..=3 {
        g.add_edge(GeoEdgeId::core(format!("p{j}")), VertexId::core("a"), VertexId::core("b"))
            .expect("endpoints exist");
    }
    g
}

/// Rose with `m` petals and `n` rays `r1..rn`, all at the rose vertex.
pub fn rose_with_rays(m: usize, n: usize) -> InfGraphPresentation {
    let core = rose(m);
    let rays: BTreeMap<String, VertexId> =
        (1..=n).map(|i| (format!("r{i}"), VertexId::core("v"))).collect();
    InfGraphPresentation::new(core, rays, BTreeMap::new()).expect("valid presentation")
}

/// Attaches one `b`-ary tree `t1` at the smallest vertex of `core`.
pub fn core_with_tree(core: UndirectedMultigraph, b: u8) -> InfGraphPresentation {
    let at = core.vertices().next().expect("core must be non-empty").clone();
    let mut trees = BTreeMap::new();
    trees.insert("t1".to_string(), TreeAttachment { root: at, branching: b });
    InfGraphPresentation::new(core, BTreeMap::new(), trees).expect("valid presentation")
}
