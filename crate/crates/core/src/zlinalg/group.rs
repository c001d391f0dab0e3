//! Finitely presented abelian groups in canonical form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A rank that is either a finite integer or countably infinite (ω).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    Finite(usize),
    Omega,
}

impl Extent {
    pub fn is_omega(&self) -> bool {
        matches!(self, Extent::Omega)
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            Extent::Finite(n) => Some(*n),
            Extent::Omega => None,
        }
    }

    /// ω absorbs addition.
    pub fn add(self, other: Extent) -> Extent {
        match (self, other) {
            (Extent::Finite(a), Extent::Finite(b)) => Extent::Finite(a + b),
            _ => Extent::Omega,
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(n) => write!(f, "{n}"),
            Extent::Omega => write!(f, "omega"),
        }
    }
}

/// Canonical form of a finitely (or, for the infinite-rank case, countably)
/// generated abelian group: free rank plus invariant factors.
///
/// The invariant factors are `>= 2`, ascending, and each divides the next, so
/// two groups are isomorphic exactly when the two values compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpAbGroup {
    free_rank: Extent,
    torsion: Vec<BigInt>,
}

impl FpAbGroup {
    pub fn trivial() -> Self {
        FpAbGroup { free_rank: Extent::Finite(0), torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FpAbGroup { free_rank: Extent::Finite(rank), torsion: Vec::new() }
    }

    /// Free abelian group of countably infinite rank.
    pub fn free_omega() -> Self {
        FpAbGroup { free_rank: Extent::Omega, torsion: Vec::new() }
    }

    pub fn free_of(rank: Extent) -> Self {
        FpAbGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Builds the canonical form with the given free rank and torsion list.
    /// Unit factors are dropped; the list must be ascending and form a
    /// divisibility chain (which the Smith normal form guarantees).
    pub fn with_torsion(free_rank: Extent, torsion: Vec<BigInt>) -> Self {
        let torsion: Vec<BigInt> = torsion.into_iter().filter(|d| !d.is_one()).collect();
        debug_assert!(torsion.iter().all(|d| d > &BigInt::one()));
        debug_assert!(torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        FpAbGroup { free_rank, torsion }
    }

    /// Reads off the cokernel of a map into `Z^rows` whose Smith diagonal is
    /// `diag`: free rank `rows - #nonzero`, torsion the entries `>= 2`.
    pub fn from_snf_diagonal(rows: usize, diag: &[BigInt]) -> Self {
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion: Vec<BigInt> =
            diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        FpAbGroup { free_rank: Extent::Finite(rows - rank), torsion }
    }

    pub fn free_rank(&self) -> Extent {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == Extent::Finite(0) && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup (product of the invariant factors).
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for FpAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            Extent::Finite(0) => {}
            Extent::Finite(1) => parts.push("Z".into()),
            Extent::Finite(n) => parts.push(format!("Z^{n}")),
            Extent::Omega => parts.push("Z^omega".into()),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
