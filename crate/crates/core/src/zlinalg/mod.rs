//! Exact linear algebra over the integers.
//!
//! Everything here works with arbitrary-precision integers; no computation in
//! the crate ever rounds. The central tool is the Smith normal form, from
//! which cokernels (finitely generated abelian groups in canonical form),
//! saturated kernel lattices, and subgroup invariants are derived.

mod group;
mod matrix;
mod snf;

pub use group::{Extent, FpAbGroup};
pub use matrix::IntMatrix;
pub use snf::{
    cokernel, column_echelon, in_lattice, kernel_basis, lattice_eq, snf, solve_in_span,
    subgroup_invariants, ColumnEchelon, SnfResult,
};
