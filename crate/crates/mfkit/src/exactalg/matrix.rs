//! Dense matrices of polynomials.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::linalg::FpMatrix;
use super::poly::{Poly, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("size mismatch: {0}")]
    Size(String),
    #[error("determinant requested for a {0}x{0} matrix; the limit is {DET_LIMIT}")]
    DetTooLarge(usize),
    #[error("matrix is not invertible over the polynomial ring (determinant {0})")]
    NotUnimodular(String),
}

pub const DET_LIMIT: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl PolyMatrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        Self::scalar(ring, n, 1)
    }

    pub fn scalar(ring: &Ring, n: usize, c: u64) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.constant(c));
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Poly>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(MatrixError::Size("ragged rows".into()));
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            for e in row {
                if e.ring() != ring {
                    return Err(MatrixError::Size("entry from a different ring".into()));
                }
                entries.push(e);
            }
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Builds a matrix from rows of polynomial strings; panics on parse errors.
    pub fn parse(ring: &Ring, rows: &[&[&str]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| ring.parse(s).expect("bad polynomial literal"))
                    .collect()
            })
            .collect();
        Self::from_rows(ring, rows).expect("bad matrix literal")
    }

    pub fn from_fp(ring: &Ring, m: &FpMatrix) -> Self {
        let mut out = Self::zeros(ring, m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r, c, ring.constant(m.get(r, c)));
            }
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
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
    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: Poly) {
        self.entries[r * self.cols + c] = v;
    }
    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter()
    }
    pub fn row(&self, r: usize) -> &[Poly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        self.map(|e| e.scale(c))
    }
    pub fn mul_poly(&self, g: &Poly) -> Self {
        self.map(|e| e * g)
    }
    pub fn truncate(&self, bound: u32) -> Self {
        self.map(|e| e.truncate(bound))
    }
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Size(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::Size(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    /// `self * other` with every entry truncated below degree `bound`.
    pub fn mul_trunc(&self, other: &Self, bound: u32) -> Self {
        (self * other).truncate(bound)
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(&self.ring, self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn block_diag(blocks: &[&PolyMatrix]) -> Self {
        let ring = blocks[0].ring.clone();
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(&ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &PolyMatrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(&self.ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.ring, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn hstack(parts: &[&PolyMatrix]) -> Self {
        let rows = parts[0].rows;
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(&parts[0].ring, rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            out.paste(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&PolyMatrix]) -> Self {
        let cols = parts[0].cols;
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(&parts[0].ring, rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            out.paste(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    /// Matrix of constant terms, i.e. the reduction modulo the maximal ideal.
    pub fn constant_part(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.ring.p(), self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).constant_term());
            }
        }
        m
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|e| e.is_constant())
    }

    /// Rank over the field of the constant part.
    pub fn constant_rank(&self) -> usize {
        self.constant_part().rank()
    }

    /// Minimum order over all entries; `None` if the matrix is zero.
    pub fn ord(&self) -> Option<u32> {
        self.entries.iter().filter_map(|e| e.ord()).min()
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().filter_map(|e| e.total_degree()).max().unwrap_or(0)
    }

    /// Exact determinant by cofactor expansion memoized on column subsets.
    pub fn det(&self) -> Result<Poly, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Size("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n > DET_LIMIT {
            return Err(MatrixError::DetTooLarge(n));
        }
        if n == 0 {
            return Ok(self.ring.one());
        }
        let mut memo: HashMap<u32, Poly> = HashMap::new();
        Ok(self.det_rows_from(0, (1u32 << n) - 1, &mut memo))
    }

    // Determinant of rows `row..n` against the column set `mask`.
    fn det_rows_from(&self, row: usize, mask: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if row == self.rows {
            return self.ring.one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = self.ring.zero();
        let mut sign_pos = true;
        for c in 0..self.cols {
            if mask & (1 << c) == 0 {
                continue;
            }
            let a = self.get(row, c);
            if !a.is_zero() {
                let minor = self.det_rows_from(row + 1, mask & !(1 << c), memo);
                let term = a * &minor;
                acc = if sign_pos { &acc + &term } else { &acc - &term };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Classical adjugate, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> Result<Self, MatrixError> {
        let n = self.rows;
        if !self.is_square() {
            return Err(MatrixError::Size("adjugate of a non-square matrix".into()));
        }
        if n > DET_LIMIT {
            return Err(MatrixError::DetTooLarge(n));
        }
        let mut adj = Self::zeros(&self.ring, n, n);
        if n == 1 {
            adj.set(0, 0, self.ring.one());
            return Ok(adj);
        }
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let mut minor = Self::zeros(&self.ring, n - 1, n - 1);
                for (a, &r) in rows.iter().enumerate() {
                    for (b, &c) in cols.iter().enumerate() {
                        minor.set(a, b, self.get(r, c).clone());
                    }
                }
                let m = minor.det()?;
                adj.set(i, j, if (i + j) % 2 == 0 { m } else { -&m });
            }
        }
        Ok(adj)
    }

    /// Inverse over the polynomial ring; requires a nonzero constant determinant.
    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if self.is_constant() {
            let c = self.constant_part();
            return c
                .inverse()
                .map(|inv| Self::from_fp(&self.ring, &inv))
                .ok_or_else(|| MatrixError::NotUnimodular("0".into()));
        }
        let det = self.det()?;
        if det.is_zero() || !det.is_constant() {
            return Err(MatrixError::NotUnimodular(det.to_string()));
        }
        let inv = super::field::inv_mod(det.constant_term(), self.ring.p());
        Ok(self.adjugate()?.scale(inv))
    }

    pub fn is_scalar_multiple_of_identity(&self, g: &Poly) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                if r == c {
                    self.get(r, c) == g
                } else {
                    self.get(r, c).is_zero()
                }
            })
        })
    }

    /// First entry (row-major) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        for r in 0..self.rows.min(other.rows) {
            for c in 0..self.cols.min(other.cols) {
                if self.get(r, c) != other.get(r, c) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    pub fn to_wire(&self) -> crate::wire::WireMatrix {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_wire()).collect())
            .collect()
    }
}

impl std::ops::Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_mul(rhs).expect("matrix size mismatch")
    }
}

impl std::ops::Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_add(rhs).expect("matrix size mismatch")
    }
}

impl std::ops::Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_add(&rhs.scale(rhs.ring.p() - 1))
            .expect("matrix size mismatch")
    }
}
