//! Isomorphism testing with exact certificates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hom::{hom_chain, unflatten, HomBasis, Mode, Morphism};
use super::Search;
use crate::certify;
use crate::cover::CoverModule;
use crate::exactalg::{FpMatrix, PolyMatrix, Ring};
use crate::mf::MatrixFactorization;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsoStatus {
    /// An exact isomorphism with exact inverse was found and verified.
    CertifiedIso,
    /// An isomorphism exists modulo `n^N`; no exact certificate was found.
    IsoModN,
    /// No isomorphism exists even modulo `n^N`; this is conclusive.
    NotIsoModN,
    /// The mod `n^N` search space was too large to exhaust and sampling
    /// found nothing.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate {
    pub alpha: Morphism,
    pub alpha_inv: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoVerdict {
    pub status: IsoStatus,
    pub certificate: Option<IsoCertificate>,
    pub truncation: u32,
    pub cert_degree: u32,
}

impl IsoVerdict {
    fn new(status: IsoStatus, certificate: Option<IsoCertificate>, s: &Search) -> Self {
        IsoVerdict {
            status,
            certificate,
            truncation: s.truncation,
            cert_degree: s.cert_degree,
        }
    }
    /// False only when isomorphism is ruled out.
    pub fn possibly_iso(&self) -> bool {
        self.status != IsoStatus::NotIsoModN
    }
}

const RANDOM_SAMPLES: usize = 64;
/// Largest projective space scanned exhaustively.
const EXHAUSTIVE_LIMIT: u64 = 1 << 20;
/// Smaller budget for the exact-lift scan, whose predicate is expensive.
const LIFT_EXHAUSTIVE_LIMIT: u64 = 1 << 12;

pub(crate) enum Outcome {
    Found(Vec<u64>),
    NoneExists,
    GaveUp,
}

fn projective_count(p: u64, dim: usize, limit: u64) -> Option<u64> {
    let mut total: u64 = 0;
    let mut pw: u64 = 1;
    for _ in 0..dim {
        total = total.checked_add(pw)?;
        pw = pw.checked_mul(p)?;
        if total > limit {
            return None;
        }
    }
    Some(total)
}

/// Looks for a coefficient vector satisfying `pred`: random samples, then
/// an exhaustive scan of the projective space when it is small enough.
/// `pred` must be invariant under nonzero scaling.
pub(crate) fn search_coefficients(
    p: u64,
    dim: usize,
    limit: u64,
    rng: &mut ChaCha8Rng,
    mut pred: impl FnMut(&[u64]) -> bool,
) -> Outcome {
    if dim == 0 {
        return Outcome::NoneExists;
    }
    for _ in 0..RANDOM_SAMPLES {
        let c: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..p)).collect();
        if c.iter().any(|&x| x != 0) && pred(&c) {
            return Outcome::Found(c);
        }
    }
    if projective_count(p, dim, limit).is_none() {
        return Outcome::GaveUp;
    }
    // Vectors whose last nonzero coordinate is 1.
    for lead in 0..dim {
        let free = lead;
        let mut c = vec![0u64; dim];
        c[lead] = 1;
        let total = p.pow(free as u32);
        for idx in 0..total {
            let mut x = idx;
            for slot in c.iter_mut().take(free) {
                *slot = x % p;
                x /= p;
            }
            if pred(&c) {
                return Outcome::Found(c.clone());
            }
        }
    }
    Outcome::NoneExists
}

fn all_invertible(ms: &[FpMatrix]) -> bool {
    ms.iter().all(|m| m.is_invertible())
}

/// Basis of the span of `vs` (rows of the reduced echelon form).
pub(crate) fn span_basis(p: u64, vs: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let m = FpMatrix::from_rows(p, vs);
    let (r, piv) = m.rref();
    (0..piv.len())
        .map(|i| (0..m.cols()).map(|c| r.get(i, c)).collect())
        .collect()
}

pub(crate) fn combine_vectors(p: u64, basis: &[Vec<u64>], c: &[u64]) -> Vec<u64> {
    let len = basis[0].len();
    let mut out = vec![0u64; len];
    for (coef, b) in c.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o = (*o + coef * x) % p;
        }
    }
    out
}

fn exact_inverse(a: &PolyMatrix) -> Option<PolyMatrix> {
    a.inverse().ok()
}

/// Tries to find an exact isomorphism in the exact hom space of degree `<= deg`.
fn exact_iso_at(
    src: &[PolyMatrix],
    tgt: &[PolyMatrix],
    deg: u32,
    limit: u64,
    rng: &mut ChaCha8Rng,
) -> Option<IsoCertificate> {
    let ring: Ring = src[0].ring().clone();
    let p = ring.p();
    let h: HomBasis = hom_chain(src, tgt, Mode::Exact(deg));
    let n = src[0].rows();
    let len = src.len();
    let found = search_coefficients(p, h.dim(), limit, rng, |c| {
        let a = h.combine(&ring, c);
        if !all_invertible(&a.iter().map(|m| m.constant_part()).collect::<Vec<_>>()) {
            return false;
        }
        deg == 0 || a.iter().all(|m| m.det().map(|d| d.is_constant()).unwrap_or(false))
    });
    let Outcome::Found(c) = found else {
        return None;
    };
    let alpha = h.combine(&ring, &c);
    let alpha_inv: Option<Vec<PolyMatrix>> = alpha.iter().map(exact_inverse).collect();
    let alpha_inv = alpha_inv?;
    debug_assert_eq!(alpha.len(), len);
    debug_assert!(alpha.iter().all(|a| a.rows() == n));
    certify::is_isomorphism(src, tgt, &alpha, &alpha_inv).then_some(IsoCertificate { alpha, alpha_inv })
}

/// Decision procedure on chains of equal length and matrix size.
pub fn iso_chain(src: &[PolyMatrix], tgt: &[PolyMatrix], s: &Search, rng: &mut ChaCha8Rng) -> IsoVerdict {
    if src.len() != tgt.len() || src[0].rows() != tgt[0].rows() {
        return IsoVerdict::new(IsoStatus::NotIsoModN, None, s);
    }
    let p = src[0].ring().p();
    let n = src[0].rows();
    let len = src.len();

    if let Some(cert) = exact_iso_at(src, tgt, 0, EXHAUSTIVE_LIMIT, rng) {
        return IsoVerdict::new(IsoStatus::CertifiedIso, Some(cert), s);
    }

    let h = hom_chain(src, tgt, Mode::Truncated(s.truncation));
    let consts = span_basis(p, &h.constant_vectors());
    let outcome = search_coefficients(p, consts.len(), EXHAUSTIVE_LIMIT, rng, |c| {
        let v = combine_vectors(p, &consts, c);
        all_invertible(&unflatten(p, &v, len, n, n))
    });
    match outcome {
        Outcome::NoneExists => IsoVerdict::new(IsoStatus::NotIsoModN, None, s),
        Outcome::GaveUp => IsoVerdict::new(IsoStatus::Inconclusive, None, s),
        Outcome::Found(_) => {
            for deg in 1..=s.cert_degree {
                if let Some(cert) = exact_iso_at(src, tgt, deg, LIFT_EXHAUSTIVE_LIMIT, rng) {
                    return IsoVerdict::new(IsoStatus::CertifiedIso, Some(cert), s);
                }
            }
            IsoVerdict::new(IsoStatus::IsoModN, None, s)
        }
    }
}

fn rng_for(s: &Search) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(s.seed)
}

/// Isomorphism test between factorizations.
pub fn is_isomorphic(x: &MatrixFactorization, y: &MatrixFactorization, s: &Search) -> IsoVerdict {
    if x.f() != y.f() || x.d() != y.d() || x.size() != y.size() {
        return IsoVerdict::new(IsoStatus::NotIsoModN, None, s);
    }
    iso_chain(x.factors(), y.factors(), s, &mut rng_for(s))
}

/// Isomorphism test between modules: `a phi = psi a`.
pub fn modules_isomorphic(a: &CoverModule, b: &CoverModule, s: &Search) -> IsoVerdict {
    if a.f() != b.f() || a.rank() != b.rank() {
        return IsoVerdict::new(IsoStatus::NotIsoModN, None, s);
    }
    iso_chain(
        std::slice::from_ref(a.phi()),
        std::slice::from_ref(b.phi()),
        s,
        &mut rng_for(s),
    )
}

/// Smallest divisor `k` of `d` with `T^k X` not ruled out as isomorphic to `X`.
pub fn order_of(x: &MatrixFactorization, s: &Search) -> usize {
    crate::mf::order_bound_check(x, |a, b| is_isomorphic(a, b, s).possibly_iso())
}
