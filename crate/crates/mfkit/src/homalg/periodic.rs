//! Periodic normal form: a factorization with `X = T^k X` up to isomorphism
//! is isomorphic to one whose factor tuple repeats with period `k`.
//!
//! With `r = d / k` and `alpha: X -> T^k X`, the `r`-fold composite
//! `alpha~` is an endomorphism `c + rho` with `rho` nilpotent modulo `n`.
//! Rescaling by `c^{-1/r}` and twisting by `(1 + rho)^{-1/r}` gives `beta`
//! with `beta~ = 1`, from which the new factors and the intertwining maps
//! `gamma` are read off.

use thiserror::Error;

use super::hom::is_morphism_mod;
use crate::exactalg::field::{inv_mod, nth_root};
use crate::exactalg::{PolyMatrix, Ring};
use crate::mf::{MatrixFactorization, MfError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeriodicError {
    #[error("period {k} does not divide d = {d}")]
    BadPeriod { k: usize, d: usize },
    #[error("alpha must have {expected} square components of size {size}")]
    BadShape { expected: usize, size: usize },
    #[error("alpha is not a morphism X -> T^k X modulo n^{0}")]
    NotMorphism(u32),
    #[error("no eigenvalue c in F_p leaves a nilpotent constant part")]
    NoScalarPart,
    #[error("c = {c} has no {r}-th root in F_p (c^((p-1)/gcd) != 1)")]
    RootMissing { c: u64, r: usize },
    #[error("the assembled factors fail the exact power identity: {0}")]
    NotExact(MfError),
}

#[derive(Clone, Debug)]
pub struct PeriodicForm {
    /// `phi'_1, ..., phi'_k`.
    pub factors: Vec<PolyMatrix>,
    /// The `k`-periodic factorization `(phi'_1, ..., phi'_k)` repeated `d / k` times.
    pub periodic: MatrixFactorization,
    /// `gamma: X -> periodic`, a morphism modulo `n^N`.
    pub gamma: Vec<PolyMatrix>,
    /// The eigenvalue removed from `alpha~` and the root used to rescale.
    pub scalar: u64,
    pub root: u64,
    pub truncation: u32,
}

/// Composite `m[last] ... m[first]` truncated below `bound`.
fn compose(ring: &Ring, n: usize, maps: &[&PolyMatrix], bound: u32) -> PolyMatrix {
    let mut acc = PolyMatrix::identity(ring, n);
    for m in maps {
        acc = m.mul_trunc(&acc, bound);
    }
    acc
}

/// `(1 + rho)^{-1/r}` modulo `n^N` by Newton iteration from the identity.
fn inverse_root_series(rho: &PolyMatrix, r: usize, p: u64, bound: u32) -> PolyMatrix {
    let ring = rho.ring();
    let n = rho.rows();
    let one_plus = &PolyMatrix::identity(ring, n) + rho;
    let r_inv = inv_mod(r as u64 % p, p);
    let mut y = PolyMatrix::identity(ring, n);
    for _ in 0..64 {
        let yr1 = y.pow(r as u32 + 1).truncate(bound);
        let corr = &y - &one_plus.mul_trunc(&yr1, bound);
        let next = (&y + &corr.scale(r_inv)).truncate(bound);
        if next == y {
            break;
        }
        y = next;
    }
    y
}

/// Builds the `k`-periodic form of `x` from a morphism `alpha: X -> T^k X`.
pub fn periodic_normal_form(
    x: &MatrixFactorization,
    k: usize,
    alpha: &[PolyMatrix],
    bound: u32,
) -> Result<PeriodicForm, PeriodicError> {
    let d = x.d();
    let n = x.size();
    let ring = x.ring().clone();
    let p = ring.p();
    if k == 0 || !d.is_multiple_of(k) {
        return Err(PeriodicError::BadPeriod { k, d });
    }
    if alpha.len() != d || alpha.iter().any(|a| a.rows() != n || a.cols() != n) {
        return Err(PeriodicError::BadShape { expected: d, size: n });
    }
    let r = d / k;
    let target = x.shift(k as i64);
    if !is_morphism_mod(x.factors(), target.factors(), alpha, bound) {
        return Err(PeriodicError::NotMorphism(bound));
    }
    // 1-based cyclic indexing into tuples of length d
    let at = |v: &[PolyMatrix], i: usize| -> PolyMatrix { v[(i - 1) % d].clone() };

    // alpha~_i = alpha_{i+(r-1)k} ... alpha_{i+k} alpha_i
    let tilde = |v: &[PolyMatrix], i: usize| -> PolyMatrix {
        let maps: Vec<PolyMatrix> = (0..r).map(|j| at(v, i + j * k)).collect();
        compose(&ring, n, &maps.iter().collect::<Vec<_>>(), bound)
    };
    let alpha_tilde: Vec<PolyMatrix> = (1..=d).map(|i| tilde(alpha, i)).collect();

    let consts: Vec<_> = alpha_tilde.iter().map(|m| m.constant_part()).collect();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
    let mut candidates = consts[0].charpoly().roots(&mut rng);
    candidates.sort_unstable();
    let scalar = candidates
        .into_iter()
        .find(|&c| {
            consts.iter().all(|m| {
                let shifted = m.sub(&crate::exactalg::FpMatrix::identity(p, n).scale(c));
                shifted.is_nilpotent()
            })
        })
        .ok_or(PeriodicError::NoScalarPart)?;
    let root = nth_root(scalar, r as u64, p).ok_or(PeriodicError::RootMissing { c: scalar, r })?;
    let root_inv = inv_mod(root, p);

    let scaled: Vec<PolyMatrix> = alpha.iter().map(|a| a.scale(root_inv)).collect();
    let beta: Vec<PolyMatrix> = (1..=d)
        .map(|i| {
            let t = tilde(&scaled, i);
            let rho = &t - &PolyMatrix::identity(&ring, n);
            let g = inverse_root_series(&rho, r, p, bound);
            at(&scaled, i).mul_trunc(&g, bound)
        })
        .collect();

    let mut factors: Vec<PolyMatrix> = (1..=k).map(|i| x.factor(i as i64).clone()).collect();
    factors[0] = &at(&beta, 1) * x.factor(1);
    let repeated: Vec<PolyMatrix> = (0..r).flat_map(|_| factors.iter().cloned()).collect();
    let periodic = MatrixFactorization::new(x.field(), x.f(), repeated).map_err(PeriodicError::NotExact)?;

    let gamma: Vec<PolyMatrix> = (1..=d)
        .map(|i| {
            if i == 1 {
                return at(&beta, 1);
            }
            let t = (i - 2) % k + 2;
            let j = (i - t) / k;
            if j == 0 {
                return PolyMatrix::identity(&ring, n);
            }
            let maps: Vec<PolyMatrix> = (j..r).map(|m| at(&beta, t + m * k)).collect();
            compose(&ring, n, &maps.iter().collect::<Vec<_>>(), bound)
        })
        .collect();

    Ok(PeriodicForm {
        factors,
        periodic,
        gamma,
        scalar,
        root,
        truncation: bound,
    })
}

/// The case `k = 1`: a single matrix `phi` with `phi^d = f I`.
pub fn symmetric_form(
    x: &MatrixFactorization,
    alpha: &[PolyMatrix],
    bound: u32,
) -> Result<PeriodicForm, PeriodicError> {
    periodic_normal_form(x, 1, alpha, bound)
}
