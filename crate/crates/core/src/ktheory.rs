//! K-theory of the Cuntz-Krieger algebra attached to the non-backtracking
//! edge operator of a graph.
//!
//! On the double graph the operator sends a directed edge to the signed sum
//! `Φ(e) = -ē + Σ { e' : s(e') = r(e) }`; since `ē` itself starts at `r(e)`,
//! this equals the plain sum over all continuations of `e` except the exact
//! backtrack. `K0 = coker(Id - Φ)` and `K1 = ker(Id - Φ)`, both computed
//! exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graph::{
    betti_finite, branching_number, double, BwDoubleGraph, DoubleGraph, InfGraphPresentation,
    TreeAttachment, UndirectedMultigraph,
};
use crate::ids::{DirEdgeId, GeoEdgeId, VertexId};
use crate::limit::{colimit_k0, kernel_stable, KernelStable, LimitOptions, LimitTrace, LimitVerdict};
use crate::zlinalg::{cokernel, in_lattice, kernel_basis, Extent, FpAbGroup, IntMatrix};
use crate::{Error, Result};

/// The matrix of Φ over the directed edges of a double graph, rows and
/// columns indexed by `edge_order`. Column `e` holds the coefficients of
/// `Φ(e)`: entry `(e', e)` is 1 exactly when `r(e) = s(e')` and `e' ≠ ē`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMatrix {
    pub edge_order: Vec<DirEdgeId>,
    pub m: IntMatrix,
}

/// K-groups in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroups {
    pub k0: FpAbGroup,
    pub k1: FpAbGroup,
}

pub fn phi_matrix(d: &DoubleGraph) -> Result<PhiMatrix> {
    if d.edge_count() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let edge_order = d.edge_ids();
    let idx: BTreeMap<&DirEdgeId, usize> =
        edge_order.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let src = d.source_index();
    let mut m = IntMatrix::zeros(edge_order.len(), edge_order.len());
    for (col, e) in edge_order.iter().enumerate() {
        let r = d.range(e).expect("edge is present");
        let bar = e.bar();
        if let Some(succs) = src.get(r) {
            for e2 in succs {
                if *e2 != bar {
                    m.set(idx[e2], col, BigInt::one());
                }
            }
        }
    }
    Ok(PhiMatrix { edge_order, m })
}

/// The 0-1 edge adjacency matrix with backtracking forbidden:
/// `A[e][e'] = 1` iff `r(e) = s(e')` and `e' ≠ ē`. Satisfies `Φ = Aᵀ`.
pub fn a_matrix(d: &DoubleGraph) -> Result<IntMatrix> {
    Ok(phi_matrix(d)?.m.transpose())
}

/// `Id - Φ` together with its index order.
pub fn id_minus_phi(d: &DoubleGraph) -> Result<(Vec<DirEdgeId>, IntMatrix)> {
    let phi = phi_matrix(d)?;
    let n = phi.edge_order.len();
    Ok((phi.edge_order, IntMatrix::identity(n).sub(&phi.m)))
}

/// K-groups of a finite connected graph with at least one edge:
/// `K0 = coker(Id - Φ)`, `K1 = ker(Id - Φ)` (free, reported by rank).
pub fn k_groups_finite(g: &UndirectedMultigraph) -> Result<KGroups> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (_, t) = id_minus_phi(&double(g))?;
    let k0 = cokernel(&t);
    let k1 = FpAbGroup::free(kernel_basis(&t).len());
    Ok(KGroups { k0, k1 })
}

/// Closed form for K0 of a finite connected graph with Betti number `beta`:
/// `Z^beta ⊕ Z/(beta-1)`. At `beta = 0` the torsion factor `Z/(-1)` is
/// trivial and so is the group; at `beta = 1` the factor `Z/0` is a free
/// summand, giving `Z^2`.
pub fn k0_formula_finite(beta: usize) -> FpAbGroup {
    match beta {
        0 => FpAbGroup::trivial(),
        1 => FpAbGroup::free(2),
        _ => FpAbGroup::with_torsion(Extent::Finite(beta), vec![BigInt::from(beta as u64 - 1)]),
    }
}

/// The group attached to a black-and-white subgraph: one generator per
/// fragment edge, one relation `e = Σ { e' : s(e') = r(e), e' ≠ ē }` per
/// black edge (all the continuations exist in the fragment because `r(e)`
/// lies in Ω). White edges contribute free generators.
#[derive(Debug, Clone)]
pub struct BwGroup {
    pub group: FpAbGroup,
    /// Generator order (= fragment edges in canonical order).
    pub generators: Vec<DirEdgeId>,
    /// Presentation matrix: one column per black edge, rows over generators.
    pub relations: IntMatrix,
}

pub fn bw_group(b: &BwDoubleGraph) -> BwGroup {
    let generators = b.edge_ids();
    let idx: BTreeMap<&DirEdgeId, usize> =
        generators.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let black = b.black_edges();
    let src = b.source_index();
    let mut relations = IntMatrix::zeros(generators.len(), black.len());
    for (col, e) in black.iter().enumerate() {
        let add = |m: &mut IntMatrix, row: usize, delta: i64| {
            let v = m.get(row, col) + BigInt::from(delta);
            m.set(row, col, v);
        };
        add(&mut relations, idx[e], 1);
        let r = b.range(e).expect("black edge is present").clone();
        let bar = e.bar();
        if let Some(succs) = src.get(&r) {
            for e2 in succs {
                if *e2 != bar {
                    add(&mut relations, idx[e2], -1);
                }
            }
        }
    }
    BwGroup { group: cokernel(&relations), generators, relations }
}

/// Eliminates a block of coordinates from a square endomorphism.
///
/// Split the coordinates as `G ⊔ H` with `H` given by `h_indices`, and assume
/// `t(x) - x` lies in the span of `G` for every `x` in `H` (equivalently: the
/// `H × H` block of `t` is the identity). Projecting along `x ↦ x - t(x)`
/// yields the endomorphism of `Z^G`
///
/// ```text
/// t̃ = t_GG - t_GH * t_HG ,
/// ```
///
/// with `coker(t̃) ≅ coker(t)` and `ker(t̃) ≅ ker(t)`. Taking
/// `t = Id - Φ` and `H = {e, ē}` for a non-loop edge `e`, this is exactly the
/// edge-contraction invariance of the K-groups.
pub fn reduce_lemma(t: &IntMatrix, h_indices: &BTreeSet<usize>) -> Result<IntMatrix> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    let n = t.rows();
    if let Some(&bad) = h_indices.iter().find(|&&i| i >= n) {
        return Err(Error::DimensionMismatch(format!(
            "index {bad} is out of range for a {n}x{n} matrix"
        )));
    }
    for &c in h_indices {
        for &r in h_indices {
            let expect = if r == c { BigInt::one() } else { BigInt::zero() };
            if t.get(r, c) != &expect {
                return Err(Error::LemmaHypothesis(format!(
                    "t(x) - x must be supported outside the block (block entry ({r},{c}) is {})",
                    t.get(r, c)
                )));
            }
        }
    }
    let g_idx: Vec<usize> = (0..n).filter(|i| !h_indices.contains(i)).collect();
    let h_idx: Vec<usize> = h_indices.iter().copied().collect();
    let t_gg = t.select(&g_idx, &g_idx);
    let t_gh = t.select(&g_idx, &h_idx);
    let t_hg = t.select(&h_idx, &g_idx);
    Ok(t_gg.sub(&t_gh.mul(&t_hg)))
}

/// Report of the two routes through an edge contraction.
#[derive(Debug, Clone)]
pub struct ContractReport {
    pub contracted: GeoEdgeId,
    pub before: KGroups,
    pub after: KGroups,
    /// K-groups agree across the contraction.
    pub groups_match: bool,
    /// The eliminated matrix equals `Id - Φ` of the contracted graph.
    pub lemma_matrix_matches: bool,
}

impl ContractReport {
    pub fn pass(&self) -> bool {
        self.groups_match && self.lemma_matrix_matches
    }
}

/// Contracts the non-loop edge `e` of a finite connected graph and compares
/// K-theory before and after, along both routes: the direct recomputation and
/// the block elimination of [`reduce_lemma`] with `H = {e, ē}`.
///
/// Needs at least two geometric edges; contracting the only edge would leave
/// an edgeless graph with no operator to compare against.
pub fn contract_and_compare(g: &UndirectedMultigraph, e: &GeoEdgeId) -> Result<ContractReport> {
    match g.is_loop(e) {
        None => return Err(Error::UnknownEdge(e.to_string())),
        Some(true) => return Err(Error::LoopContraction(e.to_string())),
        Some(false) => {}
    }
    if g.edge_count() < 2 {
        return Err(Error::EmptyEdgeSet);
    }
    let before = k_groups_finite(g)?;
    let contracted = g.contract_geo_edge(e)?;
    let after = k_groups_finite(&contracted)?;

    let (order, t) = id_minus_phi(&double(g))?;
    let h_indices: BTreeSet<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, id)| id.geo == *e)
        .map(|(i, _)| i)
        .collect();
    debug_assert_eq!(h_indices.len(), 2);
    let eliminated = reduce_lemma(&t, &h_indices)?;
    let (_, t_after) = id_minus_phi(&double(&contracted))?;

    Ok(ContractReport {
        contracted: e.clone(),
        groups_match: before == after,
        lemma_matrix_matches: eliminated == t_after,
        before,
        after,
    })
}

/// Contracts one non-loop core edge of a presentation; attachments rooted at
/// the merged-away endpoint move to the surviving one. β and γ — and with
/// them both K-groups — are unchanged.
pub fn contract_presented_core_edge(
    p: &InfGraphPresentation,
    e: &GeoEdgeId,
) -> Result<InfGraphPresentation> {
    let (keep, gone) = p
        .core()
        .endpoints(e)
        .ok_or_else(|| Error::UnknownEdge(e.to_string()))?
        .clone();
    if keep == gone {
        return Err(Error::LoopContraction(e.to_string()));
    }
    let core = p.core().contract_geo_edge(e)?;
    let mut rays = p.rays().clone();
    let mut trees = p.trees().clone();
    for at in rays.values_mut() {
        if *at == gone {
            *at = keep.clone();
        }
    }
    for t in trees.values_mut() {
        if t.root == gone {
            t.root = keep.clone();
        }
    }
    InfGraphPresentation::new(core, rays, trees)
}

/// Normal form of a presentation with the same K-theory: finite pendant
/// branches of the core are pruned (their edge classes vanish), then every
/// non-loop core edge is contracted. The core becomes a rose with β petals
/// and all attachments sit at the rose vertex.
pub fn canonical_reduce(p: &InfGraphPresentation) -> InfGraphPresentation {
    let mut core = p.core().clone();
    let rays: BTreeMap<String, VertexId> = p.rays().clone();
    let trees: BTreeMap<String, TreeAttachment> = p.trees().clone();

    let attached = |v: &VertexId| {
        rays.values().any(|at| at == v) || trees.values().any(|t| &t.root == v)
    };

    // Prune: repeatedly drop attachment-free leaves together with their edge.
    loop {
        let leaf = core.vertices().find(|v| core.degree(v) == 1 && !attached(v)).cloned();
        let Some(leaf) = leaf else { break };
        let mut next = UndirectedMultigraph::new();
        for v in core.vertices() {
            if v != &leaf {
                next.add_vertex(v.clone());
            }
        }
        for (id, (u, v)) in core.edges() {
            if u != &leaf && v != &leaf {
                next.add_edge(id.clone(), u.clone(), v.clone()).expect("ends survive");
            }
        }
        core = next;
    }

    // Contract every remaining non-loop edge.
    let mut reduced =
        InfGraphPresentation::new(core, rays, trees).expect("pruning preserves validity");
    loop {
        let edge = reduced
            .core()
            .edges()
            .find(|(_, (u, v))| u != v)
            .map(|(id, _)| id.clone());
        let Some(id) = edge else { break };
        reduced = contract_presented_core_edge(&reduced, &id).expect("non-loop edge exists");
    }
    reduced
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K0Method {
    ClosedForm,
    Limit,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K1Method {
    ClosedForm,
    Kernel,
    Both,
}

/// Outcome of running two independent routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Agreement {
    Agree { value: FpAbGroup },
    /// The limit diverges in rank, as it must when the branching number is ω.
    DivergesConsistentWithOmega,
    Mismatch { detail: String },
}

impl Agreement {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Agreement::Mismatch { .. })
    }
}

/// K0 of the graph presented by `p`.
#[derive(Debug, Clone)]
pub struct K0Infinite {
    pub beta: usize,
    pub gamma: Extent,
    /// `Z^(beta + gamma)`; torsion always vanishes for infinite graphs.
    pub closed_form: Option<FpAbGroup>,
    pub limit: Option<LimitTrace>,
    pub agreement: Option<Agreement>,
}

impl K0Infinite {
    /// The best available group value (closed form, else stabilized limit).
    pub fn group(&self) -> Option<FpAbGroup> {
        if let Some(g) = &self.closed_form {
            return Some(g.clone());
        }
        match self.limit.as_ref().map(|t| &t.verdict) {
            Some(LimitVerdict::Stabilized { value, .. }) => Some(value.clone()),
            _ => None,
        }
    }
}

/// K1 of the graph presented by `p`.
#[derive(Debug, Clone)]
pub struct K1Infinite {
    pub beta: usize,
    /// `Z^beta`.
    pub closed_form: Option<FpAbGroup>,
    pub kernel: Option<KernelStable>,
    pub agreement: Option<Agreement>,
}

impl K1Infinite {
    pub fn group(&self) -> Option<FpAbGroup> {
        if let Some(g) = &self.closed_form {
            return Some(g.clone());
        }
        self.kernel.as_ref().and_then(|k| k.group.clone())
    }
}

/// Computes K0 of an infinite presented graph: free of rank `β + γ` in closed
/// form, or as the stabilized colimit over the black-and-white exhaustion.
/// With `method = Both` the two routes are compared; when `γ = ω` the limit
/// route must diverge and that divergence counts as agreement.
pub fn k0_infinite(
    p: &InfGraphPresentation,
    method: K0Method,
    opts: &LimitOptions,
) -> Result<K0Infinite> {
    if !p.is_infinite() {
        return Err(Error::FiniteGraph);
    }
    let beta = betti_finite(p.core());
    let gamma = branching_number(p);
    let closed = FpAbGroup::free_of(Extent::Finite(beta).add(gamma));
    let mut out =
        K0Infinite { beta, gamma, closed_form: None, limit: None, agreement: None };
    match method {
        K0Method::ClosedForm => out.closed_form = Some(closed),
        K0Method::Limit => out.limit = Some(colimit_k0(p, opts)?),
        K0Method::Both => {
            let trace = colimit_k0(p, opts)?;
            out.agreement = Some(match (&trace.verdict, gamma) {
                (LimitVerdict::Stabilized { value, .. }, Extent::Finite(_))
                    if *value == closed =>
                {
                    Agreement::Agree { value: value.clone() }
                }
                (LimitVerdict::Diverging { .. }, Extent::Omega) => {
                    Agreement::DivergesConsistentWithOmega
                }
                (v, _) => Agreement::Mismatch {
                    detail: format!("closed form {closed}, limit {}", v.summary()),
                },
            });
            out.closed_form = Some(closed);
            out.limit = Some(trace);
        }
    }
    Ok(out)
}

/// Computes K1 of an infinite presented graph: free of rank `β` in closed
/// form, or as the stabilized kernel over truncations.
pub fn k1_infinite(
    p: &InfGraphPresentation,
    method: K1Method,
    opts: &LimitOptions,
) -> Result<K1Infinite> {
    if !p.is_infinite() {
        return Err(Error::FiniteGraph);
    }
    let beta = betti_finite(p.core());
    let closed = FpAbGroup::free(beta);
    let mut out = K1Infinite { beta, closed_form: None, kernel: None, agreement: None };
    match method {
        K1Method::ClosedForm => out.closed_form = Some(closed),
        K1Method::Kernel => out.kernel = Some(kernel_stable(p, opts)?),
        K1Method::Both => {
            let ks = kernel_stable(p, opts)?;
            out.agreement = Some(match &ks.group {
                Some(g) if *g == closed => Agreement::Agree { value: g.clone() },
                Some(g) => Agreement::Mismatch {
                    detail: format!("closed form {closed}, kernel {g}"),
                },
                None => Agreement::Mismatch {
                    detail: format!("closed form {closed}, kernel {}", ks.verdict.summary()),
                },
            });
            out.closed_form = Some(closed);
            out.kernel = Some(ks);
        }
    }
    Ok(out)
}

/// Support report for a stabilized kernel over a rose-core presentation:
/// whether every basis vector is supported on petal edges only and lies in
/// the lattice spanned by the petal differences `u_j - ū_j`. Returns `None`
/// when the core is not a rose (more than one vertex) or the kernel has not
/// stabilized.
pub fn kernel_petal_report(p: &InfGraphPresentation, ks: &KernelStable) -> Option<(bool, bool)> {
    if p.core().vertex_count() != 1 || ks.group.is_none() {
        return None;
    }
    let petals: Vec<GeoEdgeId> = p.core().edges().map(|(id, _)| id.clone()).collect();
    let petal_dirs: BTreeSet<DirEdgeId> = petals
        .iter()
        .flat_map(|id| [DirEdgeId::fwd(id.clone()), DirEdgeId::rev(id.clone())])
        .collect();
    let supported = ks.basis.iter().all(|v| {
        v.iter()
            .zip(&ks.edge_order)
            .all(|(x, e)| x.is_zero() || petal_dirs.contains(e))
    });
    // Lattice spanned by u_j - ū_j in the kernel's coordinate order.
    let idx: BTreeMap<&DirEdgeId, usize> =
        ks.edge_order.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut lattice = IntMatrix::zeros(ks.edge_order.len(), petals.len());
    for (j, id) in petals.iter().enumerate() {
        let fwd = DirEdgeId::fwd(id.clone());
        let rev = DirEdgeId::rev(id.clone());
        match (idx.get(&fwd), idx.get(&rev)) {
            (Some(&a), Some(&b)) => {
                lattice.set(a, j, BigInt::one());
                lattice.set(b, j, -BigInt::one());
            }
            _ => return Some((supported, false)),
        }
    }
    let in_span = ks.basis.iter().all(|v| in_lattice(&lattice, v));
    Some((supported, in_span))
}
