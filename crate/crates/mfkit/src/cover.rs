//! MCM modules over the `d`-fold branched cover `S[[z]]/(f + z^d)`,
//! presented by the action of `z` on a free `S`-module.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify;
use crate::exactalg::{FieldHeader, FpMatrix, MatrixError, Poly, PolyMatrix, Ring, RootedField};
use crate::mf::{MatrixFactorization, MfError};
use crate::wire::{self, WireError, WireMatrix, WirePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("phi^d differs from -f*I at entry ({row}, {col})")]
    PowerMismatch { row: usize, col: usize },
    #[error("phi must be a nonempty square matrix")]
    NotSquare,
    #[error("phi and f live in different rings, or the ring does not match the field")]
    RingMismatch,
    #[error("{mu}^d != -1 in the field")]
    BadMu { mu: u64 },
    #[error("factorization has {got} factors but the field is set up for d = {field_d}")]
    ArityMismatch { got: usize, field_d: u64 },
    #[error("sigma fails its invariant: {0}")]
    SigmaMismatch(&'static str),
    #[error("sigma has non-constant entries; eigenspaces are computed over the field")]
    NonConstantSigma,
    #[error("eigenspaces have dimensions {0:?}; they must all agree")]
    UnequalEigenspaceDims(Vec<usize>),
    #[error("det(phi) = {det} is not a unit times a power of f")]
    NotPurePower { det: String },
    #[error("rank {rank} differs from d*k = {d}*{k}")]
    RankMismatch { rank: usize, d: usize, k: usize },
    #[error("irreducibility of f + z^d was not asserted")]
    IrreducibilityNotAsserted,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Mf(#[from] MfError),
    #[error(transparent)]
    Wire(#[from] WireError),
}

/// `(S^r, phi)` with `phi^d = -f * I`; `d` is the arity of the field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoverModule {
    field: RootedField,
    f: Poly,
    phi: PolyMatrix,
}

impl CoverModule {
    pub fn new(field: &RootedField, f: &Poly, phi: PolyMatrix) -> Result<Self, CoverError> {
        if !phi.is_square() || phi.rows() == 0 {
            return Err(CoverError::NotSquare);
        }
        if phi.ring() != f.ring() || f.p() != field.p() {
            return Err(CoverError::RingMismatch);
        }
        let minus_f = -f;
        let target = PolyMatrix::identity(f.ring(), phi.rows()).mul_poly(&minus_f);
        if let Some((row, col)) = phi.pow(field.d() as u32).first_difference(&target) {
            return Err(CoverError::PowerMismatch { row, col });
        }
        Ok(CoverModule {
            field: *field,
            f: f.clone(),
            phi,
        })
    }

    pub fn parse(field: &RootedField, ring: &Ring, f: &str, phi: &[&[&str]]) -> Result<Self, CoverError> {
        let f = ring.parse(f).map_err(|e| WireError::at("f", e))?;
        Self::new(field, &f, PolyMatrix::parse(ring, phi))
    }

    pub fn field(&self) -> &RootedField {
        &self.field
    }
    pub fn f(&self) -> &Poly {
        &self.f
    }
    pub fn ring(&self) -> &Ring {
        self.f.ring()
    }
    pub fn d(&self) -> usize {
        self.field.d() as usize
    }
    /// Rank of the module as a free `S`-module.
    pub fn rank(&self) -> usize {
        self.phi.rows()
    }
    pub fn phi(&self) -> &PolyMatrix {
        &self.phi
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, CoverError> {
        if self.f != other.f || self.field != other.field {
            return Err(CoverError::RingMismatch);
        }
        Ok(CoverModule {
            field: self.field,
            f: self.f.clone(),
            phi: PolyMatrix::block_diag(&[&self.phi, &other.phi]),
        })
    }

    /// `(mu phi, ..., mu phi)` with the field's canonical `mu`.
    pub fn flat(&self) -> MatrixFactorization {
        self.flat_with_mu(self.field.mu())
            .expect("canonical mu is a d-th root of -1")
    }

    pub fn flat_with_mu(&self, mu: u64) -> Result<MatrixFactorization, CoverError> {
        let fld = &self.field;
        if fld.pow(mu, fld.d()) != fld.neg(1) {
            return Err(CoverError::BadMu { mu });
        }
        let m = self.phi.scale(mu);
        Ok(MatrixFactorization::new(fld, &self.f, vec![m; self.d()])?)
    }

    /// Restriction of scalars along `z -> omega^k z`.
    pub fn sigma_twist(&self, k: i64) -> Self {
        CoverModule {
            field: self.field,
            f: self.f.clone(),
            phi: self.phi.scale(self.field.omega_pow(k)),
        }
    }

    /// Minimal number of generators: `r - rank(phi mod n)`.
    pub fn num_generators(&self) -> usize {
        self.rank() - self.phi.constant_rank()
    }

    /// The `k` with `det(phi) = unit * f^k`, checking `r = d * k`.
    pub fn rank_over_cover(&self, irreducible: bool) -> Result<usize, CoverError> {
        if !irreducible {
            return Err(CoverError::IrreducibilityNotAsserted);
        }
        let det = self.phi.det()?;
        let not_pure = || CoverError::NotPurePower { det: det.to_string() };
        if det.is_zero() {
            return Err(not_pure());
        }
        let mut cur = det.clone();
        let mut k = 0;
        while cur.constant_term() == 0 {
            cur = cur.exact_div(&self.f).ok_or_else(not_pure)?;
            k += 1;
        }
        if self.rank() != self.d() * k {
            return Err(CoverError::RankMismatch {
                rank: self.rank(),
                d: self.d(),
                k,
            });
        }
        Ok(k)
    }

    pub fn is_ulrich(&self) -> UlrichVerdict {
        let ord = self.f.ord();
        UlrichVerdict {
            applicable: ord.is_some_and(|o| self.d() as u32 <= o),
            reduced: self.phi.constant_rank() == 0,
            num_generators: self.num_generators(),
            rank: self.rank(),
        }
    }

    /// Generators `(g, s)` splitting `sharp(flat(N))` into the twists
    /// `(sigma^k)^* N`: `g` has blocks `(1/d) omega^{jk} I`, `s` has blocks
    /// `omega^{-jk} I`.
    pub fn flat_sharp_certificate(&self) -> SplitCertificate {
        let fld = &self.field;
        let d = self.d();
        let r = self.rank();
        let ring = self.ring();
        let mut g = PolyMatrix::zeros(ring, d * r, d * r);
        let mut s = PolyMatrix::zeros(ring, d * r, d * r);
        let dinv = fld.d_inv();
        for k in 0..d {
            for j in 0..d {
                let gk = fld.mul(dinv, fld.omega_pow((j * k) as i64));
                let sk = fld.omega_pow(-((j * k) as i64));
                g.paste(k * r, j * r, &PolyMatrix::scalar(ring, r, gk));
                s.paste(j * r, k * r, &PolyMatrix::scalar(ring, r, sk));
            }
        }
        SplitCertificate { g, s }
    }

    /// `phi` of `sharp(flat(N))` and `diag(phi, omega phi, ..., omega^{d-1} phi)`.
    pub fn flat_sharp_targets(&self) -> (PolyMatrix, PolyMatrix) {
        let sharp = sharp(&self.flat()).expect("flat output has the field arity");
        let twists: Vec<PolyMatrix> = (0..self.d()).map(|k| self.sigma_twist(k as i64).phi).collect();
        let refs: Vec<&PolyMatrix> = twists.iter().collect();
        (sharp.phi, PolyMatrix::block_diag(&refs))
    }

    pub fn to_wire(&self) -> ModuleWire {
        ModuleWire {
            field: self.field.header(),
            vars: self.ring().vars().to_vec(),
            f: self.f.to_wire(),
            d: self.d(),
            rank: self.rank(),
            phi: self.phi.to_wire(),
            sigma: None,
        }
    }

    pub fn from_wire(w: &ModuleWire) -> Result<Self, CoverError> {
        let field = wire::field_from_header(w.field)?;
        if w.d as u64 != field.d() {
            return Err(WireError::at("d", "must equal the field header's d").into());
        }
        let ring = wire_ring(&field, w);
        let f = wire::poly_from_wire(&ring, &w.f, "f")?;
        let phi = wire::matrix_from_wire(&ring, &w.phi, "phi")?;
        if phi.rows() != w.rank {
            return Err(WireError::at("phi", format!("expected rank {}", w.rank)).into());
        }
        Self::new(&field, &f, phi)
    }

    pub fn to_json(&self) -> String {
        wire::to_canonical_json(&self.to_wire())
    }

    pub fn from_json(s: &str) -> Result<Self, CoverError> {
        Self::from_wire(&wire::from_json(s)?)
    }
}

fn wire_ring(field: &RootedField, w: &ModuleWire) -> Ring {
    let nvars = wire::infer_nvars(std::iter::once(&w.f).chain(w.phi.iter().flatten()));
    let vars = if w.vars.is_empty() {
        wire::default_vars(nvars)
    } else {
        w.vars.clone()
    };
    Ring::new(field.p(), &vars)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleWire {
    pub field: FieldHeader,
    #[serde(default)]
    pub vars: Vec<String>,
    pub f: WirePoly,
    pub d: usize,
    pub rank: usize,
    pub phi: WireMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<WireMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UlrichVerdict {
    /// `d <= ord(f)`, the range where Ulrich means reduced.
    pub applicable: bool,
    pub reduced: bool,
    pub num_generators: usize,
    pub rank: usize,
}

impl UlrichVerdict {
    pub fn mu_equals_rank(&self) -> bool {
        self.num_generators == self.rank
    }
    /// `None` when `d > ord(f)`.
    pub fn is_ulrich(&self) -> Option<bool> {
        self.applicable.then_some(self.reduced)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCertificate {
    pub g: PolyMatrix,
    pub s: PolyMatrix,
}

impl SplitCertificate {
    /// `g s = I` and `g * source = target * g`.
    pub fn verify(&self, source: &PolyMatrix, target: &PolyMatrix) -> bool {
        let n = self.g.rows();
        (&self.g * &self.s) == PolyMatrix::identity(self.g.ring(), n) && (&self.g * source) == (target * &self.g)
    }
}

/// The block-cyclic matrix with `phi_d` top-right and `phi_{d-1}, ..., phi_1`
/// on the block subdiagonal; block position `j` holds `F_{d-j}`.
pub fn cyclic_block(x: &MatrixFactorization) -> PolyMatrix {
    let d = x.d();
    let n = x.size();
    let mut m = PolyMatrix::zeros(x.ring(), d * n, d * n);
    m.paste(0, (d - 1) * n, x.factor(d as i64));
    for j in 1..d {
        m.paste(j * n, (j - 1) * n, x.factor((d - j) as i64));
    }
    m
}

/// The module `X#` with `z` acting by `mu^{-1}` times the block-cyclic matrix.
pub fn sharp(x: &MatrixFactorization) -> Result<CoverModule, CoverError> {
    let fld = x.field();
    if x.d() as u64 != fld.d() {
        return Err(CoverError::ArityMismatch {
            got: x.d(),
            field_d: fld.d(),
        });
    }
    let phi = cyclic_block(x).scale(fld.inv(fld.mu()));
    CoverModule::new(fld, x.f(), phi)
}

/// Block permutations `U_i` with `U_i^{-1} C U_{i+1} = diag_k(phi_{i+k})`,
/// where `C` is every factor of `flat(sharp(X))`.
pub fn sharp_flat_certificate(x: &MatrixFactorization) -> Vec<PolyMatrix> {
    let d = x.d();
    let n = x.size();
    let ring = x.ring();
    let id = PolyMatrix::identity(ring, n);
    (0..d)
        .map(|i| {
            // Target block k is F_{i+1+k}; it sits at source position -(i+1+k) mod d.
            let mut u = PolyMatrix::zeros(ring, d * n, d * n);
            for k in 0..d {
                let pos = (2 * d - (i + 1 + k) % d) % d;
                u.paste(pos * n, k * n, &id);
            }
            u
        })
        .collect()
}

/// The blockwise sum `diag_k(T^k X)`, factor by factor.
pub fn sum_of_shifts(x: &MatrixFactorization) -> MatrixFactorization {
    let shifts: Vec<MatrixFactorization> = (0..x.d()).map(|k| x.shift(k as i64)).collect();
    MatrixFactorization::direct_sum_all(&shifts).expect("shifts share f and d")
}

/// Checks a sharp-flat certificate exactly.
pub fn verify_sharp_flat(x: &MatrixFactorization, u: &[PolyMatrix]) -> bool {
    let Ok(sh) = sharp(x) else {
        return false;
    };
    let src = sh.flat();
    let tgt = sum_of_shifts(x);
    let u_inv: Vec<PolyMatrix> = u.iter().map(transpose).collect();
    certify::is_base_change(src.factors(), tgt.factors(), u, &u_inv)
}

pub fn transpose(m: &PolyMatrix) -> PolyMatrix {
    let mut t = PolyMatrix::zeros(m.ring(), m.cols(), m.rows());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            t.set(c, r, m.get(r, c).clone());
        }
    }
    t
}

/// A module with a semilinear action `sigma`: `sigma^d = I`, `sigma phi = omega phi sigma`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SigmaModule {
    base: CoverModule,
    sigma: PolyMatrix,
}

impl SigmaModule {
    pub fn new(base: CoverModule, sigma: PolyMatrix) -> Result<Self, CoverError> {
        let r = base.rank();
        if sigma.rows() != r || sigma.cols() != r {
            return Err(CoverError::SigmaMismatch("sigma has the wrong size"));
        }
        if sigma.pow(base.d() as u32) != PolyMatrix::identity(base.ring(), r) {
            return Err(CoverError::SigmaMismatch("sigma^d != I"));
        }
        let lhs = &sigma * &base.phi;
        let rhs = (&base.phi * &sigma).scale(base.field.omega());
        if lhs != rhs {
            return Err(CoverError::SigmaMismatch("sigma phi != omega phi sigma"));
        }
        Ok(SigmaModule { base, sigma })
    }

    pub fn base(&self) -> &CoverModule {
        &self.base
    }
    pub fn sigma(&self) -> &PolyMatrix {
        &self.sigma
    }

    /// Projectors `E_k = (1/d) sum_j omega^{-jk} sigma^j` onto the eigenspaces
    /// `{x : sigma x = omega^k x}`.
    pub fn projectors(&self) -> Result<Vec<FpMatrix>, CoverError> {
        if !self.sigma.is_constant() {
            return Err(CoverError::NonConstantSigma);
        }
        let fld = &self.base.field;
        let d = self.base.d();
        let s = self.sigma.constant_part();
        let powers: Vec<FpMatrix> = (0..d).map(|j| s.pow(j as u64)).collect();
        Ok((0..d)
            .map(|k| {
                let mut e = FpMatrix::zeros(fld.p(), s.rows(), s.cols());
                for (j, sj) in powers.iter().enumerate() {
                    e = e.add(&sj.scale(fld.omega_pow(-((j * k) as i64))));
                }
                e.scale(fld.d_inv())
            })
            .collect())
    }

    /// The factorization `A(M)`: `F_i` is the `omega^{d-i}` eigenspace and
    /// `phi_i: F_{i+1} -> F_i` is `mu * phi` restricted.
    pub fn equivariant_a(&self) -> Result<MatrixFactorization, CoverError> {
        let e = self.projectors()?;
        let d = self.base.d();
        let ring = self.base.ring();
        let bases: Vec<FpMatrix> = e
            .iter()
            .map(|ek| {
                let piv = ek.pivot_columns();
                select_cols(ek, &piv)
            })
            .collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
        if dims.iter().any(|&m| m != dims[0]) || dims[0] == 0 {
            return Err(CoverError::UnequalEigenspaceDims(dims));
        }
        let left_inv: Vec<FpMatrix> = bases.iter().map(left_inverse).collect();
        let mu_phi = self.base.phi.scale(self.base.field.mu());
        // F_i is the eigenspace of omega^{d-i}.
        let space = |i: usize| (d - i % d) % d;
        let factors = (1..=d)
            .map(|i| {
                let src = space(i + 1);
                let tgt = space(i);
                let b = PolyMatrix::from_fp(ring, &bases[src]);
                let l = PolyMatrix::from_fp(ring, &left_inv[tgt]);
                &(&l * &mu_phi) * &b
            })
            .collect();
        Ok(MatrixFactorization::new(&self.base.field, &self.base.f, factors)?)
    }

    pub fn to_wire(&self) -> ModuleWire {
        let mut w = self.base.to_wire();
        w.sigma = Some(self.sigma.to_wire());
        w
    }

    pub fn from_wire(w: &ModuleWire) -> Result<Self, CoverError> {
        let base = CoverModule::from_wire(w)?;
        let sigma = w.sigma.as_ref().ok_or_else(|| WireError::at("sigma", "missing"))?;
        let sigma = wire::matrix_from_wire(base.ring(), sigma, "sigma")?;
        Self::new(base, sigma)
    }

    pub fn to_json(&self) -> String {
        wire::to_canonical_json(&self.to_wire())
    }

    pub fn from_json(s: &str) -> Result<Self, CoverError> {
        Self::from_wire(&wire::from_json(s)?)
    }
}

/// `B(X)`: the module `X#` with `sigma = diag(I, omega I, ..., omega^{d-1} I)`.
pub fn equivariant_b(x: &MatrixFactorization) -> Result<SigmaModule, CoverError> {
    let base = sharp(x)?;
    let n = x.size();
    let fld = x.field();
    let blocks: Vec<PolyMatrix> = (0..x.d())
        .map(|j| PolyMatrix::scalar(x.ring(), n, fld.omega_pow(j as i64)))
        .collect();
    let refs: Vec<&PolyMatrix> = blocks.iter().collect();
    SigmaModule::new(base, PolyMatrix::block_diag(&refs))
}

fn select_cols(m: &FpMatrix, cols: &[usize]) -> FpMatrix {
    let mut out = FpMatrix::zeros(m.p(), m.rows(), cols.len());
    for r in 0..m.rows() {
        for (j, &c) in cols.iter().enumerate() {
            out.set(r, j, m.get(r, c));
        }
    }
    out
}

fn transpose_fp(m: &FpMatrix) -> FpMatrix {
    let mut t = FpMatrix::zeros(m.p(), m.cols(), m.rows());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            t.set(c, r, m.get(r, c));
        }
    }
    t
}

/// `L` with `L B = I` for `B` of full column rank, supported on pivot rows.
pub(crate) fn left_inverse(b: &FpMatrix) -> FpMatrix {
    let rows = transpose_fp(b).pivot_columns();
    let mut sub = FpMatrix::zeros(b.p(), rows.len(), b.cols());
    for (i, &r) in rows.iter().enumerate() {
        for c in 0..b.cols() {
            sub.set(i, c, b.get(r, c));
        }
    }
    let inv = sub.inverse().expect("pivot rows of a full-rank matrix are independent");
    let mut l = FpMatrix::zeros(b.p(), b.cols(), b.rows());
    for i in 0..b.cols() {
        for (j, &r) in rows.iter().enumerate() {
            l.set(i, r, inv.get(i, j));
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (RootedField, Ring) {
        (RootedField::new(3, None).unwrap(), Ring::new(7, &["y"]))
    }

    fn m1(f: &RootedField, r: &Ring) -> CoverModule {
        CoverModule::parse(f, r, "y^4", &[&["0", "0", "y"], &["-y^3", "0", "0"], &["0", "1", "0"]]).unwrap()
    }

    fn x_phi1(f: &RootedField, r: &Ring) -> MatrixFactorization {
        MatrixFactorization::parse(f, r, "y^4", &[&[&["y^3"]], &[&["y"]], &[&["1"]]]).unwrap()
    }

    #[test]
    fn module_validation() {
        let (f, r) = setup();
        let m = m1(&f, &r);
        assert_eq!(m.rank(), 3);
        assert!(matches!(
            CoverModule::parse(&f, &r, "y^4", &[&["1", "0"], &["0", "1"]]),
            Err(CoverError::PowerMismatch { .. })
        ));
        let one = CoverModule::parse(&f, &r, "y^3", &[&["-y"]]).unwrap();
        let fl = one.flat();
        let expect = r.parse("y").unwrap().scale(f.neg(f.mu()));
        assert!(fl.factors().iter().all(|m| m.get(0, 0) == &expect));
    }

    #[test]
    fn flat_of_m1_with_mu_minus_one() {
        let (f, r) = setup();
        let m = m1(&f, &r);
        let fl = m.flat_with_mu(6).unwrap();
        assert!(fl.factors().iter().all(|x| x == &m.phi().scale(6)));
        assert!(m.flat_with_mu(2).is_err());
        assert!(!m.flat().is_reduced());
    }

    #[test]
    fn sharp_block_layout() {
        let (f, r) = setup();
        let s = sharp(&x_phi1(&f, &r)).unwrap();
        assert_eq!(
            cyclic_block(&x_phi1(&f, &r)),
            PolyMatrix::parse(&r, &[&["0", "0", "1"], &["y", "0", "0"], &["0", "y^3", "0"]])
        );
        assert_eq!(s.rank(), 3);
        let p1 = MatrixFactorization::parse(&f, &r, "y^4", &[&[&["y^4"]], &[&["1"]], &[&["1"]]]).unwrap();
        assert_eq!(sharp(&p1).unwrap().num_generators(), 1);
    }

    #[test]
    fn sharp_flat_certificate_is_exact() {
        let (f, r) = setup();
        let x = x_phi1(&f, &r);
        let u = sharp_flat_certificate(&x);
        assert!(verify_sharp_flat(&x, &u));
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
        assert!(verify_sharp_flat(&xi, &sharp_flat_certificate(&xi)));
    }

    #[test]
    fn flat_sharp_certificate_is_exact() {
        let (f, r) = setup();
        let m = m1(&f, &r);
        let cert = m.flat_sharp_certificate();
        let (src, tgt) = m.flat_sharp_targets();
        assert!(cert.verify(&src, &tgt));
        let one = CoverModule::parse(&f, &r, "y^3", &[&["-y"]]).unwrap();
        let c1 = one.flat_sharp_certificate();
        assert_eq!(c1.g.get(0, 0), &r.constant(5));
        assert_eq!(&c1.g * &c1.s, PolyMatrix::identity(&r, 3));
    }

    #[test]
    fn rank_and_generators() {
        let (f, r) = setup();
        let m = m1(&f, &r);
        assert_eq!(m.rank_over_cover(true), Ok(1));
        assert_eq!(m.direct_sum(&m).unwrap().rank_over_cover(true), Ok(2));
        assert_eq!(m.num_generators(), 2);
        assert_eq!(m.rank_over_cover(false), Err(CoverError::IrreducibilityNotAsserted));
    }

    #[test]
    fn equivariant_round_trip() {
        let (f, r) = setup();
        let x = x_phi1(&f, &r);
        let b = equivariant_b(&x).unwrap();
        assert_eq!(b.sigma().pow(3), PolyMatrix::identity(&r, 3));
        let e = b.projectors().unwrap();
        let id = FpMatrix::identity(7, 3);
        let mut sum = FpMatrix::zeros(7, 3, 3);
        for ek in &e {
            assert_eq!(ek.mul(ek), *ek);
            sum = sum.add(ek);
        }
        assert_eq!(sum, id);
        assert_eq!(b.equivariant_a().unwrap(), x);
    }

    #[test]
    fn module_json_roundtrip() {
        let (f, r) = setup();
        let m = m1(&f, &r);
        let s = m.to_json();
        assert_eq!(CoverModule::from_json(&s).unwrap().to_json(), s);
        let b = equivariant_b(&x_phi1(&f, &r)).unwrap();
        let sb = b.to_json();
        assert_eq!(SigmaModule::from_json(&sb).unwrap(), b);
    }
}
