//! Identifiers for vertices and edges.
//!
//! Finite graphs read from files use plain string ids. Graphs presented by a
//! finite core with ray/tree attachments also contain structured ids for the
//! lazily materialized attachment vertices and edges. All id types carry a
//! total order; matrix rows and columns are always indexed in that order, so
//! every computation in the crate is deterministic for a fixed input.
//!
//! Ordering: explicitly declared (core) ids sort lexicographically first,
//! then ray ids by (ray name, position), then tree ids by (tree name, depth,
//! path); tree edges of equal depth therefore appear breadth-first.

use std::cmp::Ordering;
use std::fmt;

/// A vertex, either declared explicitly or generated by an attachment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VertexId {
    /// Explicitly declared vertex (always the case for finite graphs).
    Core(String),
    /// `index`-th vertex along a ray attachment, `index >= 1`. Index 0 is the
    /// attachment vertex itself, which is a core vertex.
    Ray { ray: String, index: u32 },
    /// Tree vertex addressed by the child-index path from the attachment
    /// vertex; the path is never empty.
    Tree { tree: String, path: Vec<u8> },
}

/// A geometric (undirected) edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GeoEdgeId {
    /// Explicitly declared edge.
    Core(String),
    /// `index`-th edge of a ray, `index >= 1`: joins ray vertices `index - 1`
    /// and `index`.
    Ray { ray: String, index: u32 },
    /// Tree edge into the vertex at `path` from its parent.
    Tree { tree: String, path: Vec<u8> },
}

/// A directed edge of a double graph: a geometric edge with one of its two
/// orientations. `rev == false` runs along the stored endpoint order,
/// `rev == true` is its inverse. The inverse of edge `x` prints as `x~`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirEdgeId {
    pub geo: GeoEdgeId,
    pub rev: bool,
}

impl VertexId {
    pub fn core(name: impl Into<String>) -> Self {
        VertexId::Core(name.into())
    }
}

impl GeoEdgeId {
    pub fn core(name: impl Into<String>) -> Self {
        GeoEdgeId::Core(name.into())
    }
}

impl DirEdgeId {
    pub fn fwd(geo: GeoEdgeId) -> Self {
        DirEdgeId { geo, rev: false }
    }

    pub fn rev(geo: GeoEdgeId) -> Self {
        DirEdgeId { geo, rev: true }
    }

    /// The reversed edge `ē`. An involution without fixed points.
    pub fn bar(&self) -> Self {
        DirEdgeId { geo: self.geo.clone(), rev: !self.rev }
    }
}

fn rank_v(v: &VertexId) -> u8 {
    match v {
        VertexId::Core(_) => 0,
        VertexId::Ray { .. } => 1,
        VertexId::Tree { .. } => 2,
    }
}

fn rank_e(e: &GeoEdgeId) -> u8 {
    match e {
        GeoEdgeId::Core(_) => 0,
        GeoEdgeId::Ray { .. } => 1,
        GeoEdgeId::Tree { .. } => 2,
    }
}

fn cmp_tree(a_name: &str, a_path: &[u8], b_name: &str, b_path: &[u8]) -> Ordering {
    a_name
        .cmp(b_name)
        .then_with(|| a_path.len().cmp(&b_path.len()))
        .then_with(|| a_path.cmp(b_path))
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> Ordering {
        use VertexId::*;
        match (self, other) {
            (Core(a), Core(b)) => a.cmp(b),
            (Ray { ray: a, index: i }, Ray { ray: b, index: j }) => {
                a.cmp(b).then_with(|| i.cmp(j))
            }
            (Tree { tree: a, path: p }, Tree { tree: b, path: q }) => cmp_tree(a, p, b, q),
            _ => rank_v(self).cmp(&rank_v(other)),
        }
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GeoEdgeId {
    fn cmp(&self, other: &Self) -> Ordering {
        use GeoEdgeId::*;
        match (self, other) {
            (Core(a), Core(b)) => a.cmp(b),
            (Ray { ray: a, index: i }, Ray { ray: b, index: j }) => {
                a.cmp(b).then_with(|| i.cmp(j))
            }
            (Tree { tree: a, path: p }, Tree { tree: b, path: q }) => cmp_tree(a, p, b, q),
            _ => rank_e(self).cmp(&rank_e(other)),
        }
    }
}

impl PartialOrd for GeoEdgeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DirEdgeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.geo.cmp(&other.geo).then_with(|| self.rev.cmp(&other.rev))
    }
}

impl PartialOrd for DirEdgeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_path(f: &mut fmt::Formatter<'_>, name: &str, path: &[u8]) -> fmt::Result {
    write!(f, "{name}:")?;
    for (k, c) in path.iter().enumerate() {
        if k > 0 {
            write!(f, ".")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Core(name) => write!(f, "{name}"),
            VertexId::Ray { ray, index } => write!(f, "{ray}:{index}"),
            VertexId::Tree { tree, path } => write_path(f, tree, path),
        }
    }
}

impl fmt::Display for GeoEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeoEdgeId::Core(name) => write!(f, "{name}"),
            GeoEdgeId::Ray { ray, index } => write!(f, "{ray}:{index}"),
            GeoEdgeId::Tree { tree, path } => write_path(f, tree, path),
        }
    }
}

impl fmt::Display for DirEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.geo, if self.rev { "~" } else { "" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_is_a_fixed_point_free_involution() {
        let e = DirEdgeId::fwd(GeoEdgeId::core("x"));
        assert_ne!(e, e.bar());
        assert_eq!(e, e.bar().bar());
        assert_eq!(e.bar().to_string(), "x~");
    }

    #[test]
    fn directed_edges_pair_up_in_order() {
        let mut ids = vec![
            DirEdgeId::rev(GeoEdgeId::core("b")),
            DirEdgeId::fwd(GeoEdgeId::core("b")),
            DirEdgeId::rev(GeoEdgeId::core("a")),
            DirEdgeId::fwd(GeoEdgeId::core("a")),
        ];
        ids.sort();
        let shown: Vec<String> = ids.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["a", "a~", "b", "b~"]);
    }

    #[test]
    fn tree_ids_sort_breadth_first() {
        let t = |path: &[u8]| GeoEdgeId::Tree { tree: "t".into(), path: path.to_vec() };
        let mut ids = vec![t(&[0, 1]), t(&[1]), t(&[0]), t(&[1, 0]), t(&[0, 0])];
        ids.sort();
        let shown: Vec<String> = ids.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["t:0", "t:1", "t:0.0", "t:0.1", "t:1.0"]);
    }

    #[test]
    fn core_ids_precede_attachment_ids() {
        let core = GeoEdgeId::core("z");
        let ray = GeoEdgeId::Ray { ray: "a".into(), index: 1 };
        assert!(core < ray);
    }
}
