//! Finite d-MF type as a table lookup on normal-form descriptors.
//!
//! For `d > 2` a hypersurface has finite type exactly for the rows
//!
//! | row | normal form                  | arity        |
//! |-----|------------------------------|--------------|
//! | A_1 | `y^2 + x_2^2 + ... + x_r^2`  | any `d > 2`  |
//! | A_2 | `y^3 + x_2^2 + ... + x_r^2`  | `d = 3, 4, 5`|
//! | A_3 | `y^4 + x_2^2 + ... + x_r^2`  | `d = 3`      |
//! | A_4 | `y^5 + x_2^2 + ... + x_r^2`  | `d = 3`      |
//!
//! and for `d = 2` exactly for the simple (ADE) singularities. The table is
//! stated in characteristic 0; here it is data and does not depend on the
//! field used elsewhere. No change of variables is attempted: inputs are
//! descriptors, not raw polynomials.

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AdeTag {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    /// `y^e + x_2^2 + ... + x_r^2`.
    A { e: u32 },
    /// A simple surface singularity tag, meaningful for `d = 2`.
    Ade(AdeTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub kind: Kind,
    pub r: u32,
    pub d: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DmfType {
    Finite,
    Infinite,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("exponent e = {0} must be at least 2")]
    Exponent(u32),
    #[error("variable count r must be at least 1")]
    Vars,
    #[error("arity d = {0} must be at least 2")]
    Arity(u32),
    #[error("ADE tags are only classified for d = 2, got d = {0}")]
    TagArity(u32),
    #[error("invalid ADE tag {0:?}")]
    Tag(AdeTag),
}

impl NormalForm {
    pub fn new(kind: Kind, r: u32, d: u32) -> Result<Self, ClassifyError> {
        match kind {
            Kind::A { e } if e < 2 => return Err(ClassifyError::Exponent(e)),
            Kind::Ade(t @ AdeTag::A(n)) if n < 1 => return Err(ClassifyError::Tag(t)),
            Kind::Ade(t @ AdeTag::D(n)) if n < 4 => return Err(ClassifyError::Tag(t)),
            Kind::Ade(_) if d != 2 => return Err(ClassifyError::TagArity(d)),
            _ => {}
        }
        if r < 1 {
            return Err(ClassifyError::Vars);
        }
        if d < 2 {
            return Err(ClassifyError::Arity(d));
        }
        Ok(NormalForm { kind, r, d })
    }

    /// `A(e)` in one variable.
    pub fn a(e: u32, d: u32) -> Result<Self, ClassifyError> {
        NormalForm::new(Kind::A { e }, 1, d)
    }
}

/// The table row witnessing finiteness, e.g. `"A_2"`, or `None` when infinite.
pub fn finite_row(nf: &NormalForm) -> Option<String> {
    match (nf.kind, nf.d) {
        (Kind::A { e }, 2) => Some(format!("A_{}", e - 1)),
        (Kind::Ade(tag), _) => Some(match tag {
            AdeTag::A(n) => format!("A_{n}"),
            AdeTag::D(n) => format!("D_{n}"),
            AdeTag::E6 => "E_6".into(),
            AdeTag::E7 => "E_7".into(),
            AdeTag::E8 => "E_8".into(),
        }),
        (Kind::A { e: 2 }, _) => Some("A_1".into()),
        (Kind::A { e: 3 }, 3..=5) => Some("A_2".into()),
        (Kind::A { e: 4 }, 3) => Some("A_3".into()),
        (Kind::A { e: 5 }, 3) => Some("A_4".into()),
        _ => None,
    }
}

pub fn dmf_type(nf: &NormalForm) -> DmfType {
    if finite_row(nf).is_some() {
        DmfType::Finite
    } else {
        DmfType::Infinite
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub max_e: u32,
    pub max_d: u32,
    pub pairs_checked: usize,
    /// `(e, d, k)`: finite at `d` but infinite at `k < d`.
    pub violations: Vec<(u32, u32, u32)>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finite type at arity `d` must imply finite type at every `2 <= k <= d`.
pub fn consistency_check_up_to(max_e: u32, max_d: u32) -> ConsistencyReport {
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for e in 2..=max_e {
        for d in 2..=max_d {
            pairs_checked += 1;
            let at = |k| dmf_type(&NormalForm::a(e, k).expect("e >= 2, k >= 2"));
            if at(d) == DmfType::Finite {
                violations.extend((2..d).filter(|&k| at(k) == DmfType::Infinite).map(|k| (e, d, k)));
            }
        }
    }
    ConsistencyReport {
        max_e,
        max_d,
        pairs_checked,
        violations,
    }
}

pub fn consistency_check() -> ConsistencyReport {
    consistency_check_up_to(8, 12)
}
