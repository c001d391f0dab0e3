//! Stabilization of K-theory along an exhaustion of an infinite graph.
//!
//! An exhaustion Ω₀ ⊆ Ω₁ ⊆ … by finite vertex sets gives a chain of
//! black-and-white fragments whose groups map into one another (a fragment
//! edge stays a generator in every later stage). K0 is the colimit of this
//! chain. Raw stage groups overshoot — white edges near the boundary
//! contribute classes that later relations kill — so each stage is measured
//! by its *stable image*: the subgroup its generators span inside a deep
//! enough later stage, detected by two consecutive probes agreeing.
//!
//! K1 is approached from below: kernels of the rectangular truncations of
//! `Id - Φ` (columns over stage d, rows over stage d+1) are nested and
//! saturated, so once their ranks stop growing the kernel lattice itself has
//! stabilized.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graph::{bw_extend, bw_subgraph, BwDoubleGraph, InfGraphPresentation};
use crate::ids::{DirEdgeId, VertexId};
use crate::ktheory::{bw_group, BwGroup};
use crate::zlinalg::{kernel_basis, subgroup_invariants, FpAbGroup, IntMatrix};
use crate::{Error, Result};

/// Controls for the stabilization drivers.
#[derive(Debug, Clone)]
pub struct LimitOptions {
    /// Deepest exhaustion stage to build (capped at 64).
    pub max_depth: usize,
    /// Consecutive agreeing stages required to declare stabilization (>= 2).
    pub window: usize,
    /// Starting vertex set; defaults to all core vertices. Must be nonempty
    /// and consist of core vertices.
    pub seed: Option<BTreeSet<VertexId>>,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions { max_depth: 12, window: 3, seed: None }
    }
}

fn resolve_options(
    p: &InfGraphPresentation,
    opts: &LimitOptions,
) -> Result<(BTreeSet<VertexId>, usize, usize)> {
    if opts.window < 2 {
        return Err(Error::InvalidOptions("window must be at least 2".to_string()));
    }
    if opts.max_depth == 0 || opts.max_depth > 64 {
        return Err(Error::InvalidOptions("max_depth must be in 1..=64".to_string()));
    }
    let seed = match &opts.seed {
        Some(s) => s.clone(),
        None => p.core_vertex_set(),
    };
    if seed.is_empty() {
        return Err(Error::BadSeed("seed is empty".to_string()));
    }
    for v in &seed {
        if !p.core().has_vertex(v) {
            return Err(Error::BadSeed(format!("{v} is not a core vertex")));
        }
    }
    Ok((seed, opts.max_depth, opts.window))
}

/// The chain of black-and-white fragments over Ω₀ = `seed`,
/// Ω_{n+1} = Ω_n ∪ (endpoints of edges meeting Ω_n), for n = 0..=depth.
pub fn functor_chain(
    p: &InfGraphPresentation,
    seed: &BTreeSet<VertexId>,
    depth: usize,
) -> Result<Vec<BwDoubleGraph>> {
    let mut chain = Vec::with_capacity(depth + 1);
    chain.push(bw_subgraph(p, seed)?);
    for _ in 0..depth {
        let next = bw_extend(p, chain.last().expect("nonempty"))?;
        chain.push(next);
    }
    Ok(chain)
}

/// One stage of the K0 limit.
#[derive(Debug, Clone)]
pub struct LimitStep {
    pub step: usize,
    pub omega_size: usize,
    pub generator_count: usize,
    /// Raw group of the stage fragment (boundary classes still alive).
    pub group: FpAbGroup,
    /// Image of this stage inside stage `step + m`, for m = 1, 2, …
    pub image_probes: Vec<(usize, FpAbGroup)>,
    /// Value the probes settled on (two consecutive probes equal), if any.
    pub stable_image: Option<FpAbGroup>,
}

/// Outcome of the K0 limit run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitVerdict {
    /// `window` consecutive stages concluded with the same stable image.
    Stabilized { value: FpAbGroup, at_step: usize },
    /// Concluded ranks grow without settling — the colimit is not finitely
    /// generated (branching number ω).
    Diverging { rank_lower_bounds: Vec<usize> },
    Inconclusive,
}

impl LimitVerdict {
    pub fn summary(&self) -> String {
        match self {
            LimitVerdict::Stabilized { value, at_step } => {
                format!("stabilized at step {at_step} with value {value}")
            }
            LimitVerdict::Diverging { rank_lower_bounds } => {
                let ranks: Vec<String> =
                    rank_lower_bounds.iter().map(|r| r.to_string()).collect();
                format!("diverging with rank lower bounds {}", ranks.join(", "))
            }
            LimitVerdict::Inconclusive => "inconclusive".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LimitTrace {
    pub steps: Vec<LimitStep>,
    pub verdict: LimitVerdict,
}

/// Runs the K0 stabilization: builds the fragment chain, computes each
/// stage's stable image in later stages, and reports either the common
/// stabilized value, certified divergence, or an inconclusive trace.
pub fn colimit_k0(p: &InfGraphPresentation, opts: &LimitOptions) -> Result<LimitTrace> {
    let (seed, max_depth, window) = resolve_options(p, opts)?;
    let chain = functor_chain(p, &seed, max_depth)?;
    let groups: Vec<BwGroup> = chain.iter().map(bw_group).collect();
    let index: Vec<BTreeMap<&DirEdgeId, usize>> = groups
        .iter()
        .map(|g| g.generators.iter().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();

    let mut steps = Vec::with_capacity(chain.len());
    for n in 0..chain.len() {
        let mut image_probes = Vec::new();
        let mut stable_image = None;
        for m in 1..chain.len() - n {
            let target = &groups[n + m];
            let gens: Vec<Vec<BigInt>> = groups[n]
                .generators
                .iter()
                .map(|e| {
                    let mut v = vec![BigInt::zero(); target.generators.len()];
                    v[index[n + m][e]] = BigInt::one();
                    v
                })
                .collect();
            let img = subgroup_invariants(&target.relations, &gens)?;
            let settled = image_probes
                .last()
                .map_or(false, |(_, prev): &(usize, FpAbGroup)| *prev == img);
            image_probes.push((m, img));
            if settled {
                stable_image = Some(image_probes.last().expect("just pushed").1.clone());
                break;
            }
        }
        steps.push(LimitStep {
            step: n,
            omega_size: chain[n].omega().len(),
            generator_count: groups[n].generators.len(),
            group: groups[n].group.clone(),
            image_probes,
            stable_image,
        });
    }

    let verdict = k0_verdict(&steps, window);
    Ok(LimitTrace { steps, verdict })
}

fn k0_verdict(steps: &[LimitStep], window: usize) -> LimitVerdict {
    for start in 0..steps.len().saturating_sub(window - 1) {
        let slice = &steps[start..start + window];
        let Some(first) = slice[0].stable_image.as_ref() else { continue };
        if slice.iter().all(|s| s.stable_image.as_ref() == Some(first)) {
            return LimitVerdict::Stabilized { value: first.clone(), at_step: start };
        }
    }
    let ranks: Vec<usize> = steps
        .iter()
        .filter_map(|s| s.stable_image.as_ref())
        .filter_map(|g| g.free_rank().finite())
        .collect();
    let nondecreasing = ranks.windows(2).all(|w| w[0] <= w[1]);
    let strictly_growing_tail = ranks.len() >= 2 && ranks[ranks.len() - 2] < ranks[ranks.len() - 1];
    if ranks.len() >= 2 && nondecreasing && strictly_growing_tail && ranks[0] < ranks[ranks.len() - 1]
    {
        LimitVerdict::Diverging { rank_lower_bounds: ranks }
    } else {
        LimitVerdict::Inconclusive
    }
}

/// One truncation stage of the kernel computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelStep {
    pub depth: usize,
    /// Number of fragment edges at this depth (= columns of the truncation).
    pub columns: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelVerdict {
    Stabilized { at_depth: usize },
    Inconclusive,
}

impl KernelVerdict {
    pub fn summary(&self) -> String {
        match self {
            KernelVerdict::Stabilized { at_depth } => {
                format!("stabilized at depth {at_depth}")
            }
            KernelVerdict::Inconclusive => "inconclusive".to_string(),
        }
    }
}

/// Result of the K1 stabilization.
#[derive(Debug, Clone)]
pub struct KernelStable {
    pub steps: Vec<KernelStep>,
    pub verdict: KernelVerdict,
    /// `Z^rank` of the stabilized kernel, when stabilization was reached.
    pub group: Option<FpAbGroup>,
    /// Basis of the stabilized kernel lattice, coordinates over `edge_order`.
    pub basis: Vec<Vec<BigInt>>,
    /// Column order of the stage the basis was read from.
    pub edge_order: Vec<DirEdgeId>,
}

/// Runs the K1 stabilization. Stage d is the rectangular truncation of
/// `Id - Φ` with columns over the depth-d fragment and rows over the
/// depth-(d+1) fragment; every ambient kernel vector supported in stage d is
/// a kernel vector of the truncation and conversely, so the stage kernels
/// are nested (under zero-extension) and saturated. Ranks are therefore
/// non-decreasing, and `window` consecutive equal ranks certify that the
/// lattice itself has stopped growing.
pub fn kernel_stable(p: &InfGraphPresentation, opts: &LimitOptions) -> Result<KernelStable> {
    let (seed, max_depth, window) = resolve_options(p, opts)?;
    let chain = functor_chain(p, &seed, max_depth + 1)?;

    let mut steps = Vec::with_capacity(max_depth + 1);
    let mut stage_data: Vec<(Vec<Vec<BigInt>>, Vec<DirEdgeId>)> = Vec::new();
    for d in 0..=max_depth {
        let cols = chain[d].edge_ids();
        let rows = chain[d + 1].edge_ids();
        let m = truncation_matrix(&chain[d + 1], &rows, &cols);
        let basis = kernel_basis(&m);
        steps.push(KernelStep { depth: d, columns: cols.len(), rank: basis.len() });
        stage_data.push((basis, cols));
    }

    let mut verdict = KernelVerdict::Inconclusive;
    let mut group = None;
    let mut basis = Vec::new();
    let mut edge_order = Vec::new();
    for start in 0..steps.len().saturating_sub(window - 1) {
        if steps[start..start + window].iter().all(|s| s.rank == steps[start].rank) {
            verdict = KernelVerdict::Stabilized { at_depth: start };
            group = Some(FpAbGroup::free(steps[start].rank));
            let (b, order) = stage_data[start].clone();
            basis = b;
            edge_order = order;
            break;
        }
    }
    Ok(KernelStable { steps, verdict, group, basis, edge_order })
}

/// The truncation of `Id - Φ` with the given row and column edge orders;
/// endpoints are read in `ambient`, which must contain both edge sets.
fn truncation_matrix(
    ambient: &BwDoubleGraph,
    rows: &[DirEdgeId],
    cols: &[DirEdgeId],
) -> IntMatrix {
    let row_idx: BTreeMap<&DirEdgeId, usize> =
        rows.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let src = ambient.source_index();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (j, e) in cols.iter().enumerate() {
        let i = row_idx[e];
        m.set(i, j, m.get(i, j) + BigInt::one());
        let r = ambient.range(e).expect("column edge is in the ambient fragment");
        let bar = e.bar();
        if let Some(succs) = src.get(r) {
            for e2 in succs {
                if *e2 != bar {
                    let i = row_idx[e2];
                    m.set(i, j, m.get(i, j) - BigInt::one());
                }
            }
        }
    }
    m
}
