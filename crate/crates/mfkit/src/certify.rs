//! Exact certificate checks. Everything here uses plain matrix arithmetic
//! only, so a certificate can be re-verified without any search code.

use crate::exactalg::PolyMatrix;

/// `u * u_inv = I` and `u_inv * u = I` for square matrices.
pub fn are_inverse(u: &PolyMatrix, u_inv: &PolyMatrix) -> bool {
    if !u.is_square() || !u_inv.is_square() || u.rows() != u_inv.rows() {
        return false;
    }
    let id = PolyMatrix::identity(u.ring(), u.rows());
    (u * u_inv) == id && (u_inv * u) == id
}

/// `alpha_i * src_i = tgt_i * alpha_{i+1}` for all `i` (indices cyclic).
pub fn is_morphism(src: &[PolyMatrix], tgt: &[PolyMatrix], alpha: &[PolyMatrix]) -> bool {
    let d = src.len();
    if tgt.len() != d || alpha.len() != d {
        return false;
    }
    (0..d).all(|i| {
        let a = &alpha[i];
        let b = &alpha[(i + 1) % d];
        a.cols() == src[i].rows()
            && a.rows() == tgt[i].rows()
            && b.cols() == src[i].cols()
            && (a * &src[i]) == (&tgt[i] * b)
    })
}

/// A morphism whose components all carry exact two-sided inverses.
pub fn is_isomorphism(src: &[PolyMatrix], tgt: &[PolyMatrix], alpha: &[PolyMatrix], alpha_inv: &[PolyMatrix]) -> bool {
    alpha.len() == alpha_inv.len()
        && is_morphism(src, tgt, alpha)
        && alpha.iter().zip(alpha_inv).all(|(a, b)| are_inverse(a, b))
}

/// `u_inv_i * src_i * u_{i+1} = tgt_i` with `u_i` invertible.
pub fn is_base_change(src: &[PolyMatrix], tgt: &[PolyMatrix], u: &[PolyMatrix], u_inv: &[PolyMatrix]) -> bool {
    let d = src.len();
    if tgt.len() != d || u.len() != d || u_inv.len() != d {
        return false;
    }
    u.iter().zip(u_inv).all(|(a, b)| are_inverse(a, b))
        && (0..d).all(|i| (&(&u_inv[i] * &src[i]) * &u[(i + 1) % d]) == tgt[i])
}

/// `phi^d = scalar * I` for a single square matrix.
pub fn power_is_scalar(phi: &PolyMatrix, d: u32, scalar: &crate::exactalg::Poly) -> bool {
    phi.is_square() && phi.pow(d).is_scalar_multiple_of_identity(scalar)
}

/// Product `m_1 * ... * m_k` of a nonempty list.
pub fn product(ms: &[PolyMatrix]) -> PolyMatrix {
    let mut acc = ms[0].clone();
    for m in &ms[1..] {
        acc = &acc * m;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Ring;

    #[test]
    fn base_change_check() {
        let r = Ring::new(7, &["y"]);
        let swap = PolyMatrix::parse(&r, &[&["0", "1"], &["1", "0"]]);
        let a = PolyMatrix::parse(&r, &[&["y", "0"], &["0", "1"]]);
        let b = PolyMatrix::parse(&r, &[&["1", "0"], &["0", "y"]]);
        let src = vec![a.clone(), b.clone()];
        let tgt = vec![b, a];
        let u = vec![swap.clone(), swap.clone()];
        assert!(is_base_change(&src, &tgt, &u, &u));
        assert!(!is_base_change(&src, &src, &u, &u));
        assert!(is_isomorphism(&src, &tgt, &u, &u));
    }
}
