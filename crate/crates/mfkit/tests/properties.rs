//! Randomized properties over small inputs.

use mfkit::corpus;
use mfkit::exactalg::{FpMatrix, Poly, PolyMatrix, Ring, UniPoly};
use mfkit::homalg::{self, IsoStatus, Search, SplitStatus};
use mfkit::mf::MatrixFactorization;
use proptest::prelude::*;

const P: u64 = 7;

fn ring() -> Ring {
    Ring::new(P, &["x", "y"])
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..P, 0u32..4, 0u32..4), 0..6).prop_map(|terms| {
        let terms: Vec<(u64, Vec<u32>)> = terms.into_iter().map(|(c, a, b)| (c, vec![a, b])).collect();
        Poly::from_terms(&ring(), &terms).unwrap()
    })
}

fn invertible(n: usize) -> impl Strategy<Value = FpMatrix> {
    prop::collection::vec(prop::collection::vec(0..P, n), n)
        .prop_map(|rows| FpMatrix::from_rows(P, &rows))
        .prop_filter("invertible", |m| m.is_invertible())
}

fn e6(i: usize) -> MatrixFactorization {
    corpus::e6_factorizations().swap_remove(i).1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(ring().parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn division_identity(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn fp_inverse(m in invertible(3)) {
        let inv = m.inverse().unwrap();
        prop_assert_eq!(m.mul(&inv), FpMatrix::identity(P, 3));
        prop_assert_ne!(m.det(), 0);
    }

    #[test]
    fn unipoly_division(a in prop::collection::vec(0..P, 1..7), b in prop::collection::vec(0..P, 1..5)) {
        let (a, b) = (UniPoly::new(P, a), UniPoly::new(P, b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn shifts_compose(i in 0usize..7, k in -6i64..7, l in -6i64..7) {
        let x = e6(i);
        prop_assert_eq!(x.shift(k).shift(l), x.shift(k + l));
        prop_assert_eq!(x.shift(3), x.clone());
        prop_assert_eq!(MatrixFactorization::from_json(&x.shift(k).to_json()).unwrap(), x.shift(k));
    }

    #[test]
    fn reducedness_of_sums(i in 0usize..7, j in 0usize..7) {
        let (x, y) = (e6(i), e6(j));
        let z = x.direct_sum(&y).unwrap();
        prop_assert_eq!(z.is_reduced(), x.is_reduced() && y.is_reduced());
        prop_assert_eq!(z.size(), x.size() + y.size());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// A constant base change is found again, with an exact certificate.
    #[test]
    fn constant_conjugates_are_certified(i in 5usize..7, us in prop::collection::vec(invertible(2), 3)) {
        let x = e6(i);
        let r = x.ring().clone();
        let u: Vec<PolyMatrix> = us.iter().map(|m| PolyMatrix::from_fp(&r, m)).collect();
        let u_inv: Vec<PolyMatrix> = us.iter().map(|m| PolyMatrix::from_fp(&r, &m.inverse().unwrap())).collect();
        let y = x.conjugate(&u, &u_inv).unwrap();
        let v = homalg::is_isomorphic(&x, &y, &Search::new(8, 2, 0));
        prop_assert_eq!(v.status, IsoStatus::CertifiedIso);
    }

    /// Sums of two E6 factorizations split back into two pieces.
    #[test]
    fn sums_split(i in 0usize..7, j in 0usize..7, k in 0i64..3, seed in 0u64..4) {
        let z = e6(i).direct_sum(&e6(j).shift(k)).unwrap();
        let dec = homalg::decompose(&z, &Search::new(8, 2, seed));
        prop_assert_eq!(dec.status, SplitStatus::CertifiedSplit);
        prop_assert_eq!(dec.summands.len(), 2);
    }
}
