//! Hom spaces between cyclic chains of matrices, solved as linear systems
//! over `F_p` in the coefficients of the unknown entries.
//!
//! A chain `(s_1, ..., s_L)` is either the factor tuple of a factorization
//! or the single matrix `phi` of a module. A morphism into `(t_1, ..., t_L)`
//! is a tuple `(a_1, ..., a_L)` with `a_i s_i = t_i a_{i+1}`.

use std::collections::BTreeMap;

use crate::exactalg::{FpMatrix, Monomial, PolyMatrix, Ring, SparseSystem};

/// Which coefficients are unknown and which equations are imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Unknown entries of degree `< N`; equations modulo `n^N`.
    Truncated(u32),
    /// Unknown entries of degree `<= D`; equations imposed exactly.
    Exact(u32),
}

impl Mode {
    fn unknown_bound(self) -> u32 {
        match self {
            Mode::Truncated(n) => n,
            Mode::Exact(d) => d + 1,
        }
    }
}

pub type Morphism = Vec<PolyMatrix>;

/// A basis of a hom space.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub mode: Mode,
    pub rows: usize,
    pub cols: usize,
    pub basis: Vec<Morphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum_j c_j b_j`.
    pub fn combine(&self, ring: &Ring, coeffs: &[u64]) -> Morphism {
        let len = self.basis.first().map_or(0, |b| b.len());
        let mut out: Morphism = vec![PolyMatrix::zeros(ring, self.rows, self.cols); len];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c == 0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(b) {
                *o = &*o + &m.scale(*c);
            }
        }
        out
    }

    /// Constant parts of the basis elements, flattened to vectors.
    pub fn constant_vectors(&self) -> Vec<Vec<u64>> {
        self.basis.iter().map(|b| flatten_constant(b)).collect()
    }
}

pub fn flatten_constant(m: &[PolyMatrix]) -> Vec<u64> {
    let mut v = Vec::new();
    for a in m {
        let c = a.constant_part();
        for r in 0..c.rows() {
            for col in 0..c.cols() {
                v.push(c.get(r, col));
            }
        }
    }
    v
}

/// Splits a flat vector back into `len` constant matrices of shape `rows x cols`.
pub fn unflatten(p: u64, v: &[u64], len: usize, rows: usize, cols: usize) -> Vec<FpMatrix> {
    (0..len)
        .map(|i| {
            let mut m = FpMatrix::zeros(p, rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, v[(i * rows + r) * cols + c]);
                }
            }
            m
        })
        .collect()
}

/// Solves for all morphisms from the chain `src` to the chain `tgt`.
pub fn hom_chain(src: &[PolyMatrix], tgt: &[PolyMatrix], mode: Mode) -> HomBasis {
    let len = src.len();
    assert_eq!(len, tgt.len(), "chains of different length");
    let ring = src[0].ring().clone();
    let p = ring.p();
    let n = src[0].rows();
    let m = tgt[0].rows();
    let monos = ring.monomials_below(mode.unknown_bound());
    let nm = monos.len();
    let var = |i: usize, r: usize, c: usize, k: usize| ((i * m + r) * n + c) * nm + k;
    let nvars = len * m * n * nm;
    let keep = |mono: &Monomial| match mode {
        Mode::Truncated(bound) => mono.degree() < bound,
        Mode::Exact(_) => true,
    };

    // Equation (i, r, c, monomial) collects coefficients of a_i s_i - t_i a_{i+1}.
    let mut eqs: BTreeMap<(usize, usize, usize, Monomial), BTreeMap<usize, u64>> = BTreeMap::new();
    let mut push = |key: (usize, usize, usize, Monomial), v: usize, c: u64| {
        let row = eqs.entry(key).or_default();
        let e = row.entry(v).or_insert(0);
        *e = (*e + c) % p;
    };
    for i in 0..len {
        let s = &src[i];
        let t = &tgt[i];
        let next = (i + 1) % len;
        for r in 0..m {
            for k in 0..n {
                for c in 0..n {
                    // a_i[r][k] * s[k][c]
                    for (bm, bc) in s.get(k, c).terms() {
                        for (ki, am) in monos.iter().enumerate() {
                            let prod = am.mul(bm);
                            if keep(&prod) {
                                push((i, r, c, prod), var(i, r, k, ki), bc);
                            }
                        }
                    }
                }
            }
            for k in 0..m {
                for c in 0..n {
                    // - t[r][k] * a_{i+1}[k][c]
                    for (bm, bc) in t.get(r, k).terms() {
                        for (ki, am) in monos.iter().enumerate() {
                            let prod = am.mul(bm);
                            if keep(&prod) {
                                push((i, r, c, prod), var(next, k, c, ki), p - bc);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut sys = SparseSystem::new(p, nvars);
    for row in eqs.values() {
        let entries: Vec<(usize, u64)> = row.iter().filter(|(_, &c)| c != 0).map(|(&v, &c)| (v, c)).collect();
        sys.add_row(&entries);
    }
    let basis = sys
        .nullspace()
        .into_iter()
        .map(|x| {
            (0..len)
                .map(|i| {
                    let mut a = PolyMatrix::zeros(&ring, m, n);
                    for r in 0..m {
                        for c in 0..n {
                            let mut poly = ring.zero();
                            for (k, mono) in monos.iter().enumerate() {
                                let coef = x[var(i, r, c, k)];
                                if coef != 0 {
                                    poly.add_term(mono.clone(), coef);
                                }
                            }
                            a.set(r, c, poly);
                        }
                    }
                    a
                })
                .collect()
        })
        .collect();
    HomBasis {
        mode,
        rows: m,
        cols: n,
        basis,
    }
}

/// `a_i s_i = t_i a_{i+1}` modulo `n^N`.
pub fn is_morphism_mod(src: &[PolyMatrix], tgt: &[PolyMatrix], a: &[PolyMatrix], bound: u32) -> bool {
    let len = src.len();
    (0..len).all(|i| (&a[i] * &src[i]).truncate(bound) == (&tgt[i] * &a[(i + 1) % len]).truncate(bound))
}

/// Composition `b o a` componentwise, truncated below degree `bound`.
pub fn compose_trunc(b: &[PolyMatrix], a: &[PolyMatrix], bound: u32) -> Morphism {
    b.iter().zip(a).map(|(x, y)| x.mul_trunc(y, bound)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(r: &Ring, es: &[&str]) -> Vec<PolyMatrix> {
        es.iter().map(|e| PolyMatrix::parse(r, &[&[e]])).collect()
    }

    // Brute force over all constant tuples in F_7^3, independent of the solver.
    fn brute_constant_dim(src: &[PolyMatrix], tgt: &[PolyMatrix]) -> usize {
        let r = src[0].ring().clone();
        let mut count = 0usize;
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    let m = vec![
                        PolyMatrix::scalar(&r, 1, a),
                        PolyMatrix::scalar(&r, 1, b),
                        PolyMatrix::scalar(&r, 1, c),
                    ];
                    if is_morphism_mod(src, tgt, &m, 1) {
                        count += 1;
                    }
                }
            }
        }
        // count = 7^dim
        (0..).find(|&k| 7usize.pow(k) == count).unwrap() as usize
    }

    #[test]
    fn truncated_dimensions_match_brute_force() {
        let r = Ring::new(7, &["y"]);
        let x = chain(&r, &["y^3", "y", "1"]);
        let h = hom_chain(&x, &x, Mode::Truncated(1));
        assert_eq!(h.dim(), brute_constant_dim(&x, &x));
        assert_eq!(h.dim(), 2);
        assert_eq!(hom_chain(&x, &x, Mode::Truncated(2)).dim(), 3);
        for b in &h.basis {
            assert!(is_morphism_mod(&x, &x, b, 1));
        }
    }

    #[test]
    fn monotone_in_n() {
        let r = Ring::new(7, &["y"]);
        let x = chain(&r, &["y^3", "y", "1"]);
        let y: Vec<PolyMatrix> = chain(&r, &["y", "1", "y^3"]);
        let dims: Vec<usize> = (1..7).map(|n| hom_chain(&x, &y, Mode::Truncated(n)).dim()).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{dims:?}");
    }

    #[test]
    fn exact_mode_scalars() {
        let r = Ring::new(7, &["y"]);
        let x = chain(&r, &["y^3", "y", "1"]);
        let h = hom_chain(&x, &x, Mode::Exact(0));
        assert_eq!(h.dim(), 1);
        assert!(crate::certify::is_morphism(&x, &x, &h.basis[0]));
    }
}
