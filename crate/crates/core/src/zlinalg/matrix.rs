//! Dense integer matrices over arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A dense `rows x cols` matrix over `BigInt`, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Convenience constructor from machine integers.
    ///
    /// Panics if the rows are ragged.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Builds the diagonal matrix with the given entries.
    pub fn diagonal_matrix(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - rhs.get(r, c))
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        IntMatrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols { self.get(r, c).clone() } else { rhs.get(r, c - self.cols).clone() }
        })
    }

    /// The submatrix picked out by the given row and column indices.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(row_idx.len(), col_idx.len(), |r, c| {
            self.get(row_idx[r], col_idx[c]).clone()
        })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[i] -= q * row[t]`.
    pub(crate) fn row_sub_mul(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let x = self.get(t, c);
            if x.is_zero() {
                continue;
            }
            let v = self.get(i, c) - q * x;
            self.set(i, c, v);
        }
    }

    /// `col[j] -= q * col[t]`.
    pub(crate) fn col_sub_mul(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let x = self.get(r, t);
            if x.is_zero() {
                continue;
            }
            let v = self.get(r, j) - q * x;
            self.set(r, j, v);
        }
    }

    /// `row[dst] += row[src]`.
    pub(crate) fn row_add(&mut self, dst: usize, src: usize) {
        for c in 0..self.cols {
            let x = self.get(src, c);
            if x.is_zero() {
                continue;
            }
            let v = self.get(dst, c) + x;
            self.set(dst, c, v);
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1).clone())
    }

    /// Renders the exchange format: a `rows cols` header line followed by one
    /// line of space-separated entries per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the exchange format produced by [`IntMatrix::to_text`].
    /// `#` starts a comment; blank lines are ignored.
    pub fn from_text(text: &str) -> Result<IntMatrix> {
        let mut content: Vec<(usize, Vec<&str>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                content.push((idx + 1, tokens));
            }
        }
        let Some((header_line, header)) = content.first() else {
            return Err(Error::Parse { line: 1, message: "missing `rows cols` header".into() });
        };
        if header.len() != 2 {
            return Err(Error::Parse {
                line: *header_line,
                message: "header must be exactly `rows cols`".into(),
            });
        }
        let parse_dim = |tok: &str| -> Result<usize> {
            tok.parse().map_err(|_| Error::Parse {
                line: *header_line,
                message: format!("invalid dimension `{tok}`"),
            })
        };
        let rows = parse_dim(header[0])?;
        let cols = parse_dim(header[1])?;
        let body = &content[1..];
        if body.len() != rows {
            return Err(Error::Parse {
                line: *header_line,
                message: format!("expected {rows} rows, found {}", body.len()),
            });
        }
        let mut m = IntMatrix::zeros(rows, cols);
        for (r, (line_no, tokens)) in body.iter().enumerate() {
            if tokens.len() != cols {
                return Err(Error::Parse {
                    line: *line_no,
                    message: format!("expected {cols} entries, found {}", tokens.len()),
                });
            }
            for (c, tok) in tokens.iter().enumerate() {
                let v: BigInt = tok.parse().map_err(|_| Error::Parse {
                    line: *line_no,
                    message: format!("invalid integer `{tok}`"),
                })?;
                m.set(r, c, v);
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", line.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Absolute value helper used by the pivot search.
pub(crate) fn abs(v: &BigInt) -> BigInt {
    v.abs()
}
