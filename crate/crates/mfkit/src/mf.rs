//! Matrix factorizations with `d` factors: `phi_1 * ... * phi_d = f * I`.

use std::cmp::Reverse;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{FieldHeader, Poly, PolyMatrix, Ring, RootedField};
use crate::wire::{self, WireError, WireMatrix, WirePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MfError {
    #[error("product of the factors starting at phi_{rotation} differs from f*I at entry ({row}, {col})")]
    ProductMismatch { rotation: usize, row: usize, col: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("a factorization needs at least 2 factors, got {0}")]
    TooFewFactors(usize),
    #[error("size-0 factorizations are not allowed")]
    Empty,
    #[error("factors and f live in different rings")]
    RingMismatch,
    #[error("ring characteristic {ring} differs from field characteristic {field}")]
    FieldMismatch { ring: u64, field: u64 },
    #[error("factorizations differ in f or arity")]
    Incompatible,
    #[error(transparent)]
    Wire(#[from] WireError),
}

/// `(phi_1, ..., phi_d)` with `phi_k: F_{k+1} -> F_k`, validated on construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatrixFactorization {
    field: RootedField,
    f: Poly,
    factors: Vec<PolyMatrix>,
}

impl MatrixFactorization {
    pub fn new(field: &RootedField, f: &Poly, factors: Vec<PolyMatrix>) -> Result<Self, MfError> {
        let d = factors.len();
        if d < 2 {
            return Err(MfError::TooFewFactors(d));
        }
        if f.p() != field.p() {
            return Err(MfError::FieldMismatch {
                ring: f.p(),
                field: field.p(),
            });
        }
        let n = factors[0].rows();
        if n == 0 {
            return Err(MfError::Empty);
        }
        for (k, m) in factors.iter().enumerate() {
            if m.ring() != f.ring() {
                return Err(MfError::RingMismatch);
            }
            if m.rows() != n || m.cols() != n {
                return Err(MfError::ShapeMismatch(format!(
                    "phi_{} is {}x{}, expected {n}x{n}",
                    k + 1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let target = PolyMatrix::identity(f.ring(), n).mul_poly(f);
        for start in 0..d {
            let mut prod = factors[start].clone();
            for j in 1..d {
                prod = &prod * &factors[(start + j) % d];
            }
            if let Some((row, col)) = prod.first_difference(&target) {
                return Err(MfError::ProductMismatch {
                    rotation: start + 1,
                    row,
                    col,
                });
            }
        }
        Ok(MatrixFactorization {
            field: *field,
            f: f.clone(),
            factors,
        })
    }

    /// Builds a factorization from polynomial literals, one matrix per factor.
    pub fn parse(field: &RootedField, ring: &Ring, f: &str, factors: &[&[&[&str]]]) -> Result<Self, MfError> {
        let f = ring.parse(f).map_err(|e| MfError::Wire(WireError::at("f", e)))?;
        let mats = factors.iter().map(|m| PolyMatrix::parse(ring, m)).collect();
        Self::new(field, &f, mats)
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
        self.factors.len()
    }
    pub fn size(&self) -> usize {
        self.factors[0].rows()
    }
    pub fn factors(&self) -> &[PolyMatrix] {
        &self.factors
    }
    /// `phi_k` with `k` read cyclically, 1-based.
    pub fn factor(&self, k: i64) -> &PolyMatrix {
        &self.factors[(k - 1).rem_euclid(self.d() as i64) as usize]
    }

    /// `T^k X`; `T(phi_1, ..., phi_d) = (phi_2, ..., phi_d, phi_1)`.
    pub fn shift(&self, k: i64) -> Self {
        let d = self.d() as i64;
        let s = k.rem_euclid(d) as usize;
        let mut factors = self.factors.clone();
        factors.rotate_left(s);
        MatrixFactorization {
            field: self.field,
            f: self.f.clone(),
            factors,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, MfError> {
        if self.f != other.f || self.d() != other.d() || self.field != other.field {
            return Err(MfError::Incompatible);
        }
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| PolyMatrix::block_diag(&[a, b]))
            .collect();
        Ok(MatrixFactorization {
            field: self.field,
            f: self.f.clone(),
            factors,
        })
    }

    pub fn direct_sum_all(parts: &[Self]) -> Result<Self, MfError> {
        let mut acc = parts.first().ok_or(MfError::Empty)?.clone();
        for p in &parts[1..] {
            acc = acc.direct_sum(p)?;
        }
        Ok(acc)
    }

    /// `(phi_1, ..., phi_d, I)`, a factorization with one more factor.
    pub fn pad(&self) -> Self {
        let mut factors = self.factors.clone();
        factors.push(PolyMatrix::identity(self.ring(), self.size()));
        MatrixFactorization {
            field: self.field,
            f: self.f.clone(),
            factors,
        }
    }

    /// Conjugates by a base change `(U_1, ..., U_d)`: `phi_k -> U_k^{-1} phi_k U_{k+1}`.
    pub fn conjugate(&self, u: &[PolyMatrix], u_inv: &[PolyMatrix]) -> Result<Self, MfError> {
        let d = self.d();
        let factors = (0..d)
            .map(|k| &(&u_inv[k] * &self.factors[k]) * &u[(k + 1) % d])
            .collect();
        Self::new(&self.field, &self.f, factors)
    }

    pub fn is_reduced(&self) -> bool {
        self.factors.iter().all(|m| m.constant_part().is_zero())
    }

    /// Nonzero entries of all factors, scaled to leading coefficient 1,
    /// without repeats, lowest degree first.
    pub fn entry_ideal(&self) -> Vec<Poly> {
        let p = self.field.p();
        let mut out: Vec<Poly> = Vec::new();
        for m in &self.factors {
            for e in m.entries() {
                let Some((_, lc)) = e.terms().next_back() else {
                    continue;
                };
                let e = e.scale(crate::exactalg::field::inv_mod(lc, p));
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out.sort_by_key(|p| {
            let desc: Vec<_> = p.terms().rev().map(|(m, c)| (m.clone(), c)).collect();
            (p.total_degree(), Reverse(desc))
        });
        out
    }

    pub fn to_wire(&self) -> MfWire {
        MfWire {
            field: self.field.header(),
            vars: self.ring().vars().to_vec(),
            f: self.f.to_wire(),
            d: self.d(),
            size: self.size(),
            factors: self.factors.iter().map(|m| m.to_wire()).collect(),
        }
    }

    pub fn from_wire(w: &MfWire) -> Result<Self, MfError> {
        let field = wire::field_from_header(w.field)?;
        let nvars = wire::infer_nvars(std::iter::once(&w.f).chain(w.factors.iter().flatten().flatten()));
        let vars = if w.vars.is_empty() {
            wire::default_vars(nvars)
        } else {
            w.vars.clone()
        };
        let ring = Ring::new(field.p(), &vars);
        let f = wire::poly_from_wire(&ring, &w.f, "f")?;
        if w.factors.len() != w.d {
            return Err(WireError::at(
                "factors",
                format!("expected {} factors, found {}", w.d, w.factors.len()),
            )
            .into());
        }
        let factors = w
            .factors
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let mat = wire::matrix_from_wire(&ring, m, &format!("factors[{k}]"))?;
                if mat.rows() != w.size {
                    return Err(WireError::at(
                        format!("factors[{k}]"),
                        format!("expected size {}", w.size),
                    ));
                }
                Ok(mat)
            })
            .collect::<Result<Vec<_>, WireError>>()?;
        Self::new(&field, &f, factors)
    }

    pub fn to_json(&self) -> String {
        wire::to_canonical_json(&self.to_wire())
    }

    pub fn from_json(s: &str) -> Result<Self, MfError> {
        Self::from_wire(&wire::from_json(s)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfWire {
    pub field: FieldHeader,
    #[serde(default)]
    pub vars: Vec<String>,
    pub f: WirePoly,
    pub d: usize,
    pub size: usize,
    pub factors: Vec<WireMatrix>,
}

/// Smallest divisor `k` of `d` for which `maybe_iso(X, T^k X)` holds.
///
/// Only divisors are tried: the order of any factorization divides `d`.
pub fn order_bound_check(
    x: &MatrixFactorization,
    mut maybe_iso: impl FnMut(&MatrixFactorization, &MatrixFactorization) -> bool,
) -> usize {
    let d = x.d();
    for k in (1..d).filter(|k| d.is_multiple_of(*k)) {
        if maybe_iso(x, &x.shift(k as i64)) {
            return k;
        }
    }
    d
}
