//! Splitting off direct summands with idempotent endomorphisms.
//!
//! Idempotents are found first in the exact algebra of constant
//! endomorphisms, then in the endomorphism algebra modulo `n^N` with a
//! Newton lift. A split is only accepted when a base change of bounded
//! degree conjugates the object to block-diagonal form exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hom::{hom_chain, Mode, Morphism};
use super::Search;
use crate::certify;
use crate::cover::CoverModule;
use crate::exactalg::{FpMatrix, PolyMatrix, Ring, UniPoly};
use crate::mf::MatrixFactorization;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitStatus {
    CertifiedSplit,
    NoSplitFoundAtLevel,
}

/// `(U_1, ..., U_L)` and inverses with `U_i^{-1} s_i U_{i+1}` block diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChange {
    pub u: Vec<PolyMatrix>,
    pub u_inv: Vec<PolyMatrix>,
}

#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub summands: Vec<T>,
    pub base_change: BaseChange,
    pub truncation: u32,
    pub cert_degree: u32,
    pub status: SplitStatus,
}

const TRIES: usize = 24;

type Chain = Vec<PolyMatrix>;

struct Pieces {
    u: Vec<PolyMatrix>,
    u_inv: Vec<PolyMatrix>,
    blocks: Vec<Chain>,
}

/// A polynomial `P` with `P(a)` a nontrivial idempotent, built from a
/// coprime split of the characteristic polynomial of the constant part.
fn splitting_poly(consts: &[FpMatrix], rng: &mut ChaCha8Rng) -> Option<UniPoly> {
    let big = FpMatrix::block_diag(consts);
    let chi = big.charpoly();
    let p = big.p();
    for lambda in chi.roots(rng) {
        let m = chi.root_multiplicity(lambda);
        let mut a = UniPoly::one(p);
        for _ in 0..m {
            a = a.mul(&UniPoly::linear(p, lambda));
        }
        let (b, _) = chi.div_rem(&a);
        if b.degree().unwrap_or(0) == 0 {
            continue;
        }
        let (_, _, v) = a.ext_gcd(&b);
        return Some(v.mul(&b));
    }
    None
}

fn eval_fp(poly: &UniPoly, a: &FpMatrix) -> FpMatrix {
    let n = a.rows();
    let mut acc = FpMatrix::zeros(a.p(), n, n);
    for &c in poly.coeffs().iter().rev() {
        acc = acc.mul(a).add(&FpMatrix::identity(a.p(), n).scale(c));
    }
    acc
}

fn eval_poly(poly: &UniPoly, a: &PolyMatrix, bound: u32) -> PolyMatrix {
    let n = a.rows();
    let mut acc = PolyMatrix::zeros(a.ring(), n, n);
    for &c in poly.coeffs().iter().rev() {
        acc = &acc.mul_trunc(a, bound) + &PolyMatrix::scalar(a.ring(), n, c);
    }
    acc
}

/// Base change from an idempotent tuple, using the truncation of `e` and
/// `1 - e` to degree `<= deg` on the pivot columns of their constant parts.
fn base_change_from(
    chain: &[PolyMatrix],
    e: &[PolyMatrix],
    deg: u32,
) -> Option<(Vec<PolyMatrix>, Vec<PolyMatrix>, usize)> {
    let ring = chain[0].ring();
    let n = chain[0].rows();
    let len = chain.len();
    let mut u = Vec::with_capacity(len);
    let mut u_inv = Vec::with_capacity(len);
    let mut rank = None;
    for ei in e {
        let id = PolyMatrix::identity(ring, n);
        let fi = &id - ei;
        let im = ei.constant_part().pivot_columns();
        let ker = fi.constant_part().pivot_columns();
        if im.len() + ker.len() != n || im.is_empty() || ker.is_empty() {
            return None;
        }
        if *rank.get_or_insert(im.len()) != im.len() {
            return None;
        }
        let ui = PolyMatrix::hstack(&[
            &ei.truncate(deg + 1).select_columns(&im),
            &fi.truncate(deg + 1).select_columns(&ker),
        ]);
        let inv = ui.inverse().ok()?;
        u.push(ui);
        u_inv.push(inv);
    }
    let r = rank?;
    for i in 0..len {
        let y = &(&u_inv[i] * &chain[i]) * &u[(i + 1) % len];
        let off_zero = (0..n).all(|a| (0..n).all(|b| (a < r) == (b < r) || y.get(a, b).is_zero()));
        if !off_zero {
            return None;
        }
    }
    Some((u, u_inv, r))
}

fn split_chain(
    chain: &[PolyMatrix],
    s: &Search,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<PolyMatrix>, Vec<PolyMatrix>, usize)> {
    let ring: Ring = chain[0].ring().clone();
    let p = ring.p();

    let exact = hom_chain(chain, chain, Mode::Exact(0));
    if exact.dim() >= 2 {
        for _ in 0..TRIES {
            let c: Vec<u64> = (0..exact.dim()).map(|_| rng.gen_range(0..p)).collect();
            let a = exact.combine(&ring, &c);
            let consts: Vec<FpMatrix> = a.iter().map(|m| m.constant_part()).collect();
            if let Some(poly) = splitting_poly(&consts, rng) {
                let e: Morphism = consts
                    .iter()
                    .map(|m| PolyMatrix::from_fp(&ring, &eval_fp(&poly, m)))
                    .collect();
                if let Some(found) = base_change_from(chain, &e, 0) {
                    return Some(found);
                }
            }
        }
    }

    let bound = s.truncation;
    let trunc = hom_chain(chain, chain, Mode::Truncated(bound));
    if trunc.dim() < 2 {
        return None;
    }
    for _ in 0..TRIES {
        let c: Vec<u64> = (0..trunc.dim()).map(|_| rng.gen_range(0..p)).collect();
        let a = trunc.combine(&ring, &c);
        let consts: Vec<FpMatrix> = a.iter().map(|m| m.constant_part()).collect();
        let Some(poly) = splitting_poly(&consts, rng) else {
            continue;
        };
        let mut e: Morphism = a.iter().map(|m| eval_poly(&poly, m, bound)).collect();
        for _ in 0..64 {
            let next: Morphism = e
                .iter()
                .map(|x| {
                    let x2 = x.mul_trunc(x, bound);
                    let x3 = x2.mul_trunc(x, bound);
                    &x2.scale(3) - &x3.scale(2)
                })
                .collect();
            if next == e {
                break;
            }
            e = next;
        }
        for deg in 0..=s.cert_degree {
            if let Some(found) = base_change_from(chain, &e, deg) {
                return Some(found);
            }
        }
    }
    None
}

fn decompose_chain(chain: &[PolyMatrix], s: &Search, rng: &mut ChaCha8Rng) -> Pieces {
    let ring = chain[0].ring().clone();
    let n = chain[0].rows();
    let len = chain.len();
    let identity = || Pieces {
        u: vec![PolyMatrix::identity(&ring, n); len],
        u_inv: vec![PolyMatrix::identity(&ring, n); len],
        blocks: vec![chain.to_vec()],
    };
    if n == 1 {
        return identity();
    }
    let Some((u, u_inv, r)) = split_chain(chain, s, rng) else {
        return identity();
    };
    let conj: Vec<PolyMatrix> = (0..len).map(|i| &(&u_inv[i] * &chain[i]) * &u[(i + 1) % len]).collect();
    let top: Chain = conj.iter().map(|m| m.submatrix(0, 0, r, r)).collect();
    let bottom: Chain = conj.iter().map(|m| m.submatrix(r, r, n - r, n - r)).collect();
    let a = decompose_chain(&top, s, rng);
    let b = decompose_chain(&bottom, s, rng);
    let u = (0..len)
        .map(|i| &u[i] * &PolyMatrix::block_diag(&[&a.u[i], &b.u[i]]))
        .collect();
    let u_inv = (0..len)
        .map(|i| &PolyMatrix::block_diag(&[&a.u_inv[i], &b.u_inv[i]]) * &u_inv[i])
        .collect();
    let mut blocks = a.blocks;
    blocks.extend(b.blocks);
    Pieces { u, u_inv, blocks }
}

/// Reorders summands and applies per-summand diagonal rescalings.
fn rearrange(pieces: Pieces, order: &[usize], scalings: &[Option<Vec<u64>>], p: u64) -> Pieces {
    let len = pieces.u.len();
    let mut offsets = Vec::new();
    let mut off = 0;
    for b in &pieces.blocks {
        offsets.push(off);
        off += b[0].rows();
    }
    let mut cols = Vec::new();
    for &j in order {
        cols.extend(offsets[j]..offsets[j] + pieces.blocks[j][0].rows());
    }
    let mut u: Vec<PolyMatrix> = pieces.u.iter().map(|m| m.select_columns(&cols)).collect();
    let mut u_inv: Vec<PolyMatrix> = pieces
        .u_inv
        .iter()
        .map(|m| crate::cover::transpose(&crate::cover::transpose(m).select_columns(&cols)))
        .collect();
    let mut blocks = Vec::new();
    let mut pos = 0;
    for &j in order {
        let mut b = pieces.blocks[j].clone();
        if let Some(sc) = &scalings[j] {
            // size-1 summand: column `pos` of U_i scales by sc[i]
            for i in 0..len {
                let c = sc[i];
                let ci = crate::exactalg::field::inv_mod(c, p);
                for r in 0..u[i].rows() {
                    let v = u[i].get(r, pos).scale(c);
                    u[i].set(r, pos, v);
                }
                for cc in 0..u_inv[i].cols() {
                    let v = u_inv[i].get(pos, cc).scale(ci);
                    u_inv[i].set(pos, cc, v);
                }
            }
            for i in 0..len {
                let ci = crate::exactalg::field::inv_mod(sc[i], p);
                b[i] = b[i].scale(ci * sc[(i + 1) % len] % p);
            }
        }
        pos += b[0].rows();
        blocks.push(b);
    }
    Pieces { u, u_inv, blocks }
}

/// Scalars `u_i` making the first `d - 1` factors of a size-1 chain have
/// lowest coefficient 1.
fn normalizing_scalars(chain: &[PolyMatrix], p: u64) -> Vec<u64> {
    let len = chain.len();
    let mut u = vec![1u64; len];
    for i in 0..len - 1 {
        let lc = chain[i].get(0, 0).lowest_coeff().unwrap_or(1);
        u[i + 1] = u[i] * crate::exactalg::field::inv_mod(lc, p) % p;
    }
    u
}

fn status_for(n: usize, pieces: usize) -> SplitStatus {
    if n == 1 || pieces > 1 {
        SplitStatus::CertifiedSplit
    } else {
        SplitStatus::NoSplitFoundAtLevel
    }
}

/// Decomposes a factorization into summands with an exact base change.
pub fn decompose(x: &MatrixFactorization, s: &Search) -> Decomposition<MatrixFactorization> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let p = x.field().p();
    let pieces = decompose_chain(x.factors(), s, &mut rng);
    let scalings: Vec<Option<Vec<u64>>> = pieces
        .blocks
        .iter()
        .map(|b| (b[0].rows() == 1).then(|| normalizing_scalars(b, p)))
        .collect();
    let identity = (0..pieces.blocks.len()).collect::<Vec<_>>();
    let normalized = rearrange(pieces, &identity, &scalings, p);
    let summands: Vec<MatrixFactorization> = normalized
        .blocks
        .iter()
        .map(|b| MatrixFactorization::new(x.field(), x.f(), b.clone()).expect("summand of a factorization"))
        .collect();
    let mut order: Vec<usize> = (0..summands.len()).collect();
    order.sort_by_key(|&j| (summands[j].size(), summands[j].to_json()));
    let none = vec![None; summands.len()];
    let sorted = rearrange(normalized, &order, &none, p);
    let summands: Vec<MatrixFactorization> = order.iter().map(|&j| summands[j].clone()).collect();
    let total = MatrixFactorization::direct_sum_all(&summands).expect("summands share f and d");
    let ok = certify::is_base_change(x.factors(), total.factors(), &sorted.u, &sorted.u_inv);
    assert!(ok, "decomposition base change failed exact verification");
    Decomposition {
        status: status_for(x.size(), summands.len()),
        summands,
        base_change: BaseChange {
            u: sorted.u,
            u_inv: sorted.u_inv,
        },
        truncation: s.truncation,
        cert_degree: s.cert_degree,
    }
}

/// Decomposes a module; summands are modules with block `phi`.
pub fn decompose_module(m: &CoverModule, s: &Search) -> Decomposition<CoverModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let p = m.field().p();
    let pieces = decompose_chain(std::slice::from_ref(m.phi()), s, &mut rng);
    let summands: Vec<CoverModule> = pieces
        .blocks
        .iter()
        .map(|b| CoverModule::new(m.field(), m.f(), b[0].clone()).expect("summand of a module"))
        .collect();
    let mut order: Vec<usize> = (0..summands.len()).collect();
    order.sort_by_key(|&j| (summands[j].rank(), summands[j].to_json()));
    let none = vec![None; summands.len()];
    let sorted = rearrange(pieces, &order, &none, p);
    let summands: Vec<CoverModule> = order.iter().map(|&j| summands[j].clone()).collect();
    let blocks: Vec<&PolyMatrix> = summands.iter().map(|s| s.phi()).collect();
    let total = PolyMatrix::block_diag(&blocks);
    let ok = certify::is_base_change(
        std::slice::from_ref(m.phi()),
        std::slice::from_ref(&total),
        &sorted.u,
        &sorted.u_inv,
    );
    assert!(ok, "decomposition base change failed exact verification");
    Decomposition {
        status: status_for(m.rank(), summands.len()),
        summands,
        base_change: BaseChange {
            u: sorted.u,
            u_inv: sorted.u_inv,
        },
        truncation: s.truncation,
        cert_degree: s.cert_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RootedField;

    fn setup() -> (RootedField, Ring) {
        (RootedField::new(3, None).unwrap(), Ring::new(7, &["y"]))
    }

    fn size1(f: &RootedField, r: &Ring, es: [&str; 3]) -> MatrixFactorization {
        MatrixFactorization::parse(f, r, "y^4", &[&[&[es[0]]], &[&[es[1]]], &[&[es[2]]]]).unwrap()
    }

    #[test]
    fn flat_of_m1_splits_into_three_shifts() {
        let (f, r) = setup();
        let m1 = CoverModule::parse(
            &f,
            &r,
            "y^4",
            &[&["0", "0", "y"], &["-y^3", "0", "0"], &["0", "1", "0"]],
        )
        .unwrap();
        let d = decompose(&m1.flat(), &Search::new(8, 2, 0));
        assert_eq!(d.status, SplitStatus::CertifiedSplit);
        let mut got: Vec<MatrixFactorization> = d.summands.clone();
        let mut want = vec![
            size1(&f, &r, ["y^3", "y", "1"]),
            size1(&f, &r, ["y", "1", "y^3"]),
            size1(&f, &r, ["1", "y^3", "y"]),
        ];
        got.sort_by_key(|x| x.to_json());
        want.sort_by_key(|x| x.to_json());
        assert_eq!(got, want);
        assert!(d.base_change.u.iter().all(|u| u.is_constant()));
    }

    #[test]
    fn size_one_is_certified() {
        let (f, r) = setup();
        let x = size1(&f, &r, ["y^3", "y", "1"]);
        let d = decompose(&x, &Search::new(8, 2, 0));
        assert_eq!(d.status, SplitStatus::CertifiedSplit);
        assert_eq!(d.summands, vec![x]);
    }

    #[test]
    fn x_xi_does_not_split() {
        let (f, r) = setup();
        let xi = MatrixFactorization::parse(
            &f,
            &r,
            "y^4",
            &[
                &[&["y", "0"], &["0", "y^3"]],
                &[&["0", "y"], &["y", "1"]],
                &[&["-y", "1"], &["y^2", "0"]],
            ],
        )
        .unwrap();
        let d = decompose(&xi, &Search::new(8, 2, 0));
        assert_eq!(d.status, SplitStatus::NoSplitFoundAtLevel);
        assert_eq!(d.summands.len(), 1);
    }

    #[test]
    fn sum_splits_back() {
        let (f, r) = setup();
        let a = size1(&f, &r, ["y^2", "y", "y"]);
        let b = size1(&f, &r, ["y^4", "1", "1"]);
        let d = decompose(
            &a.direct_sum(&b).unwrap().direct_sum(&a).unwrap(),
            &Search::new(8, 2, 3),
        );
        assert_eq!(d.summands.len(), 3);
        let count_a = d.summands.iter().filter(|x| **x == a).count();
        assert_eq!(count_a, 2);
    }
}
