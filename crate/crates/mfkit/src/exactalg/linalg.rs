//! Dense linear algebra over `F_p` and univariate polynomials used for
//! characteristic-polynomial splitting.

use rand::Rng;

use super::field::{inv_mod, pow_mod};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }
    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }
    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "size mismatch");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % p;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * (c % self.p) % self.p;
        }
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add(&other.scale(self.p - 1))
    }

    pub fn block_diag(blocks: &[FpMatrix]) -> FpMatrix {
        let p = blocks[0].p;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = FpMatrix::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inv_mod(m.get(row, col), p);
            for c in 0..m.cols {
                let v = m.get(row, c) * inv % p;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = (m.get(r, c) + (p - f) * m.get(row, c)) % p;
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Indices of a maximal linearly independent set of columns, leftmost first.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Basis of `{x : self * x = 0}` as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let (r, pivots) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(i, f)) % p;
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let p = self.p;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    m.data.swap(piv * n + c, col * n + c);
                }
                det = (p - det) % p;
            }
            let d = m.get(col, col);
            det = det * d % p;
            let inv = inv_mod(d, p);
            for r in col + 1..n {
                let f = m.get(r, col) * inv % p;
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    let v = (m.get(r, c) + (p - f) * m.get(col, c)) % p;
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.det() != 0
    }

    pub fn pow(&self, e: u64) -> FpMatrix {
        let mut acc = FpMatrix::identity(self.p, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u64).is_zero()
    }

    /// Characteristic polynomial `det(t I - A)` via Hessenberg reduction.
    pub fn charpoly(&self) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let p = self.p;
        let n = self.rows;
        let mut h = self.clone();
        // Reduce to upper Hessenberg form by similarity transforms.
        for col in 0..n.saturating_sub(2) {
            let Some(piv) = (col + 1..n).find(|&r| h.get(r, col) != 0) else {
                continue;
            };
            if piv != col + 1 {
                let a = col + 1;
                for c in 0..n {
                    h.data.swap(piv * n + c, a * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + piv, r * n + a);
                }
            }
            let inv = inv_mod(h.get(col + 1, col), p);
            for r in col + 2..n {
                let f = h.get(r, col) * inv % p;
                if f == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = (h.get(r, c) + (p - f) * h.get(col + 1, c)) % p;
                    h.set(r, c, v);
                }
                for rr in 0..n {
                    let v = (h.get(rr, col + 1) + f * h.get(rr, r)) % p;
                    h.set(rr, col + 1, v);
                }
            }
        }
        // Recurrence on leading principal submatrices of the Hessenberg form.
        let mut polys: Vec<UniPoly> = vec![UniPoly::one(p)];
        for m in 1..=n {
            let t_minus = UniPoly::new(p, vec![(p - h.get(m - 1, m - 1)) % p, 1]);
            let mut cur = t_minus.mul(&polys[m - 1]);
            let mut prod = 1u64;
            for i in (1..m).rev() {
                prod = prod * h.get(i, i - 1) % p;
                let coef = prod * h.get(i - 1, m - 1) % p;
                if coef != 0 {
                    cur = cur.sub(&polys[i - 1].scale(coef));
                }
            }
            polys.push(cur);
        }
        polys.pop().unwrap()
    }
}

/// Incremental echelon solver for sparse homogeneous systems over `F_p`.
pub struct SparseSystem {
    p: u64,
    ncols: usize,
    pivots: Vec<Option<Vec<u64>>>,
}

impl SparseSystem {
    pub fn new(p: u64, ncols: usize) -> Self {
        SparseSystem {
            p,
            ncols,
            pivots: vec![None; ncols],
        }
    }

    pub fn add_row(&mut self, entries: &[(usize, u64)]) {
        if entries.is_empty() {
            return;
        }
        let p = self.p;
        let mut row = vec![0u64; self.ncols];
        let mut lo = usize::MAX;
        for &(c, v) in entries {
            row[c] = (row[c] + v) % p;
            lo = lo.min(c);
        }
        for c in lo..self.ncols {
            let v = row[c];
            if v == 0 {
                continue;
            }
            match &self.pivots[c] {
                Some(piv) => {
                    let f = p - v;
                    for j in c..self.ncols {
                        if piv[j] != 0 {
                            row[j] = (row[j] + f * piv[j]) % p;
                        }
                    }
                }
                None => {
                    let inv = inv_mod(v, p);
                    for x in row[c..].iter_mut() {
                        *x = *x * inv % p;
                    }
                    self.pivots[c] = Some(row);
                    return;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    /// Basis of the solution space, one vector per free column (ascending).
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let free: Vec<usize> = (0..self.ncols).filter(|&c| self.pivots[c].is_none()).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u64; self.ncols];
                x[f] = 1;
                for c in (0..self.ncols).rev() {
                    if let Some(piv) = &self.pivots[c] {
                        let mut s = 0u64;
                        for j in c + 1..self.ncols {
                            if piv[j] != 0 && x[j] != 0 {
                                s = (s + piv[j] * x[j]) % p;
                            }
                        }
                        x[c] = (p - s) % p;
                    }
                }
                x
            })
            .collect()
    }
}

/// Dense univariate polynomial over `F_p`, lowest coefficient first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { p, coeffs }
    }
    pub fn zero(p: u64) -> Self {
        Self::new(p, vec![])
    }
    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }
    /// `t - a`
    pub fn linear(p: u64, a: u64) -> Self {
        Self::new(p, vec![(p - a % p) % p, 1])
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (acc * x + c) % self.p)
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&0) + o.coeffs.get(i).unwrap_or(&0))
            .collect();
        Self::new(self.p, v)
    }
    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| a * (c % self.p) % self.p).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(self.p - 1))
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut v = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + a * b) % self.p;
            }
        }
        Self::new(self.p, v)
    }
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_mod(d.coeffs[dd], p);
        let mut rem = self.coeffs.clone();
        let mut q = vec![0u64; self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem[rem.len() - 1] * inv % p;
            q[k] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + (p - c) * dc) % p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (Self::new(p, q), Self::new(p, rem))
    }
    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(&lc) => self.scale(inv_mod(lc, self.p)),
            None => self.clone(),
        }
    }
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    /// Returns `(g, u, v)` with `u*self + v*o = g = gcd`.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let lc = *r0.coeffs.last().unwrap_or(&1);
        let inv = inv_mod(lc, p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }
    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in `F_p`, ascending.
    pub fn roots<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        let p = self.p;
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        if p <= 4096 {
            return (0..p).filter(|&x| f.eval(x) == 0).collect();
        }
        // Product of distinct linear factors, then equal-degree splitting.
        let t = Self::new(p, vec![0, 1]);
        let tp = t.pow_mod(p, &f);
        let g = tp.sub(&t).gcd(&f);
        let mut out = Vec::new();
        split_linear(&g, rng, &mut out);
        out.sort_unstable();
        out
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: u64) -> usize {
        let lin = Self::linear(self.p, a);
        let mut cur = self.clone();
        let mut k = 0;
        while !cur.is_zero() {
            let (q, r) = cur.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            cur = q;
            k += 1;
        }
        k
    }
}

fn split_linear<R: Rng>(g: &UniPoly, rng: &mut R, out: &mut Vec<u64>) {
    let p = g.p;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push((p - m.coeffs[0]) % p);
        }
        Some(_) => loop {
            let a = rng.gen_range(0..p);
            let h = UniPoly::new(p, vec![a, 1])
                .pow_mod((p - 1) / 2, g)
                .sub(&UniPoly::one(p));
            let d = h.gcd(g);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap() {
                let (q, _) = g.div_rem(&d);
                split_linear(&d, rng, out);
                split_linear(&q, rng, out);
                return;
            }
        },
    }
}

pub fn is_idempotent(m: &FpMatrix) -> bool {
    m.mul(m) == *m
}

/// `a^e` in `F_p` (re-exported for callers working with raw residues).
pub fn fp_pow(a: u64, e: u64, p: u64) -> u64 {
    pow_mod(a, e, p)
}
