//! Smith normal form and the derived group computations.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::group::FpAbGroup;
use super::matrix::{abs, IntMatrix};
use crate::{Error, Result};

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal, non-negative, each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Finds the pivot for step `t`: the nonzero entry of smallest absolute value
/// in the trailing submatrix, ties broken by row-major position. Any entry of
/// absolute value 1 in scan order is already optimal, so the scan short
/// circuits there.
fn pivot_position(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let one = BigInt::one();
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = abs(x);
            if a == one {
                return Some((i, j));
            }
            match &best {
                Some((_, b)) if *b <= a => {}
                _ => best = Some(((i, j), a)),
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn find_nondivisible(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let p = d.get(t, t).clone();
    for i in t + 1..d.rows() {
        for j in t + 1..d.cols() {
            if !(d.get(i, j) % &p).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Computes the Smith normal form. Deterministic: the pivot rule is fixed
/// (minimal absolute value, then row-major order).
pub fn snf(a: &IntMatrix) -> SnfResult {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let limit = rows.min(cols);
    let mut t = 0;
    while t < limit {
        let Some((pi, pj)) = pivot_position(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t) / d.get(t, t);
                d.row_sub_mul(i, t, &q);
                u.row_sub_mul(i, t, &q);
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                for j in t + 1..cols {
                    if d.get(t, j).is_zero() {
                        continue;
                    }
                    let q = d.get(t, j) / d.get(t, t);
                    d.col_sub_mul(j, t, &q);
                    v.col_sub_mul(j, t, &q);
                    if !d.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // A remainder smaller than the pivot appeared; restart the
                // step with the better pivot. |pivot| strictly decreases, so
                // this terminates.
                let (pi, pj) = pivot_position(&d, t).expect("pivot cannot vanish");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Row and column are clear; force the divisibility chain.
            if let Some((i, _)) = find_nondivisible(&d, t) {
                d.row_add(t, i);
                u.row_add(t, i);
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SnfResult { d, u, v }
}

/// Canonical form of `coker(a) = Z^rows / im(a)`.
pub fn cokernel(a: &IntMatrix) -> FpAbGroup {
    let s = snf(a);
    FpAbGroup::from_snf_diagonal(a.rows(), &s.d.diagonal())
}

/// A primitive basis of `ker(a) <= Z^cols`: the columns of `v` matching zero
/// diagonal entries of the Smith form. The returned vectors extend to a basis
/// of `Z^cols`, hence span the full (saturated) kernel lattice.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = snf(a);
    let rank = s.rank();
    (rank..a.cols()).map(|j| s.v.column(j)).collect()
}

/// Column echelon basis of the column span of `a`, with the pivot row of each
/// basis column. Column operations only, so the span is preserved exactly.
pub struct ColumnEchelon {
    pub basis: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let mut m = a.clone();
    let rows = m.rows();
    let cols = m.cols();
    let mut next = 0usize;
    let mut pivot_rows = Vec::new();
    for row in 0..rows {
        if next == cols {
            break;
        }
        loop {
            // Among not-yet-pivoted columns, pick the smallest nonzero entry
            // in this row and reduce the others by it.
            let mut best: Option<(usize, BigInt)> = None;
            for j in next..cols {
                let x = m.get(row, j);
                if x.is_zero() {
                    continue;
                }
                let a = abs(x);
                match &best {
                    Some((_, b)) if *b <= a => {}
                    _ => best = Some((j, a)),
                }
            }
            let Some((j0, _)) = best else { break };
            let mut clean = true;
            for j in next..cols {
                if j == j0 || m.get(row, j).is_zero() {
                    continue;
                }
                let q = m.get(row, j) / m.get(row, j0);
                m.col_sub_mul(j, j0, &q);
                if !m.get(row, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                m.swap_cols(next, j0);
                if m.get(row, next).is_negative() {
                    m.negate_col(next);
                }
                pivot_rows.push(row);
                next += 1;
                break;
            }
        }
    }
    let idx: Vec<usize> = (0..next).collect();
    let all_rows: Vec<usize> = (0..rows).collect();
    ColumnEchelon { basis: m.select(&all_rows, &idx), pivot_rows }
}

/// Expresses `v` as an integer combination of the echelon basis columns, or
/// `None` if `v` is outside the spanned lattice.
pub fn solve_in_span(ech: &ColumnEchelon, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(v.len(), ech.basis.rows(), "vector length mismatch");
    let mut w: Vec<BigInt> = v.to_vec();
    let mut coeffs = Vec::with_capacity(ech.pivot_rows.len());
    for (k, &row) in ech.pivot_rows.iter().enumerate() {
        let p = ech.basis.get(row, k);
        let (q, r) = (&w[row] / p, &w[row] % p);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for i in row..w.len() {
                let x = ech.basis.get(i, k);
                if !x.is_zero() {
                    w[i] = &w[i] - &q * x;
                }
            }
        }
        coeffs.push(q);
    }
    if w.iter().all(Zero::is_zero) { Some(coeffs) } else { None }
}

/// Membership of `v` in the lattice spanned by the columns of `basis`.
pub fn in_lattice(basis: &IntMatrix, v: &[BigInt]) -> bool {
    if v.len() != basis.rows() {
        return false;
    }
    solve_in_span(&column_echelon(basis), v).is_some()
}

/// Equality of the lattices spanned by the columns of `a` and `b`.
pub fn lattice_eq(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() {
        return false;
    }
    let ea = column_echelon(a);
    let eb = column_echelon(b);
    if ea.pivot_rows != eb.pivot_rows {
        return false;
    }
    (0..eb.basis.cols()).all(|j| solve_in_span(&ea, &eb.basis.column(j)).is_some())
        && (0..ea.basis.cols()).all(|j| solve_in_span(&eb, &ea.basis.column(j)).is_some())
}

/// Canonical form of the subgroup generated by the images of `generators`
/// inside the ambient group `Z^n / im(relations)`, where `n` is the row count
/// of `relations`.
///
/// Writing `A` for the span of the generators and `B = im(relations)`, the
/// subgroup is `(A + B)/B`. A column echelon basis `W` of `A + B` contains
/// `B`, so each relation column solves exactly in `W`; collecting those
/// coordinates into a matrix `C` gives `(A + B)/B ≅ coker(C)`.
pub fn subgroup_invariants(relations: &IntMatrix, generators: &[Vec<BigInt>]) -> Result<FpAbGroup> {
    let n = relations.rows();
    for (i, g) in generators.iter().enumerate() {
        if g.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator {i} has length {}, ambient rank is {n}",
                g.len()
            )));
        }
    }
    let gens = IntMatrix::from_fn(n, generators.len(), |r, c| generators[c][r].clone());
    let stacked = gens.hstack(relations);
    let ech = column_echelon(&stacked);
    let rank_w = ech.pivot_rows.len();
    let mut c = IntMatrix::zeros(rank_w, relations.cols());
    for j in 0..relations.cols() {
        let coeffs = solve_in_span(&ech, &relations.column(j))
            .expect("relation columns lie in the stacked span by construction");
        for (i, x) in coeffs.into_iter().enumerate() {
            c.set(i, j, x);
        }
    }
    Ok(cokernel(&c))
}
