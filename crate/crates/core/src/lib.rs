//! K-theory of graph C*-algebras built on the non-backtracking edge operator.
//!
//! For an undirected multigraph `Ê` (loops and parallel edges allowed) we form
//! the double graph `E`: every geometric edge contributes two mutually inverse
//! directed edges `e`, `ē`. The operator acts on the free abelian group on the
//! directed edges by
//!
//! ```text
//! Φ(e) = -ē + Σ { e' : s(e') = r(e) }  =  Σ { e' : s(e') = r(e), e' ≠ ē }
//! ```
//!
//! i.e. an edge flows to all its non-backtracking continuations. The K-groups
//! of the associated Cuntz-Krieger algebra are
//!
//! ```text
//! K0 = coker(Id - Φ),    K1 = ker(Id - Φ),
//! ```
//!
//! computed here with exact integer arithmetic (Smith normal form over
//! arbitrary-precision integers).
//!
//! Finite graphs admit a closed form: `K0 ≅ Z^β ⊕ Z/(β-1)Z` and `K1` free of
//! rank equal to the free rank of `K0`, where `β` is the first Betti number.
//! Locally finite infinite graphs are handled through finite presentations
//! (a finite core plus infinite ray and tree attachments); their K0 is the
//! colimit of groups attached to an exhaustion by "black-and-white" subgraphs
//! and their K1 is the stabilizing kernel over truncations. Torsion vanishes
//! in the infinite case: `K0 ≅ Z^(β+γ)` and `K1 ≅ Z^β`, with `γ` the number of
//! ends ("branching number", possibly ω).
//!
//! Modules:
//! - [`graph`]: multigraphs, double graphs, infinite-graph presentations,
//!   exhaustions, black-and-white subgraphs, the text file format.
//! - [`zlinalg`]: integer matrices, Smith normal form, cokernels, kernels,
//!   finitely presented abelian groups in canonical form.
//! - [`ktheory`]: the operator matrices and the K-group computations,
//!   including the edge-contraction reduction.
//! - [`limit`]: direct-limit machinery (functor chains, colimit of K0,
//!   stabilized kernels) with traces suitable for export.
//! - [`sample`]: small builders used in documentation and tests.
//!
//! ```
//! use graphk::ktheory::{k_groups_finite, k0_infinite, K0Method};
//! use graphk::limit::LimitOptions;
//! use graphk::sample;
//! use graphk::zlinalg::FpAbGroup;
//!
//! // Rose with three petals: K0 = Z^3 + Z/2, K1 = Z^3.
//! let k = k_groups_finite(&sample::rose(3)).unwrap();
//! assert_eq!(k.k0.to_string(), "Z^3 + Z/2");
//! assert_eq!(k.k1.to_string(), "Z^3");
//!
//! // One petal plus one ray: K0 = Z^2 by closed form and, independently,
//! // as the stable image of the exhaustion colimit.
//! let p = sample::rose_with_rays(1, 1);
//! let k0 = k0_infinite(&p, K0Method::Both, &LimitOptions::default()).unwrap();
//! assert_eq!(k0.group(), Some(FpAbGroup::free(2)));
//! assert!(k0.agreement.unwrap().is_ok());
//! ```

#![forbid(unsafe_code)]

pub mod graph;
pub mod ids;
pub mod ktheory;
pub mod limit;
pub mod sample;
pub mod zlinalg;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("not a subgraph of the ambient graph: {0}")]
    NotASubgraph(String),
    #[error("cannot contract the loop `{0}`")]
    LoopContraction(String),
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("presentation core must be connected and non-empty")]
    DisconnectedCore,
    #[error("branching degree must lie in 2..=255, got {0}")]
    BadBranching(u64),
    #[error("seed is invalid: {0}")]
    BadSeed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("reduction hypothesis fails: {0}")]
    LemmaHypothesis(String),
    #[error("graph is finite; use the finite-graph K-theory entry points")]
    FiniteGraph,
    #[error("Betti number did not stabilize after {steps} steps")]
    Unstable { steps: usize },
    #[error("invalid options: {0}")]
    InvalidOptions(String),
}

pub type Result<T> = std::result::Result<T, Error>;
