//! Hom spaces modulo `n^N`, isomorphism tests, order, decomposition into
//! indecomposables and the periodic normal form.

pub mod decompose;
pub mod hom;
pub mod iso;
pub mod periodic;

use serde::Serialize;

use crate::exactalg::Poly;

pub use decompose::{decompose, decompose_module, BaseChange, Decomposition, SplitStatus};
pub use hom::{hom_chain, HomBasis, Mode, Morphism};
pub use iso::{is_isomorphic, modules_isomorphic, order_of, IsoCertificate, IsoStatus, IsoVerdict};
pub use periodic::{periodic_normal_form, symmetric_form, PeriodicError, PeriodicForm};

/// Search bounds: truncation degree `N`, certificate degree `D` and seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Search {
    pub truncation: u32,
    pub cert_degree: u32,
    pub seed: u64,
}

impl Search {
    /// `N = 2 deg f + 2`, `D = 2`, seed 0.
    pub fn default_for(f: &Poly) -> Self {
        Search {
            truncation: 2 * f.total_degree().unwrap_or(0) + 2,
            cert_degree: 2,
            seed: 0,
        }
    }

    pub fn new(truncation: u32, cert_degree: u32, seed: u64) -> Self {
        Search {
            truncation,
            cert_degree,
            seed,
        }
    }
}

/// `hom(X, Y)` modulo `n^N`.
pub fn hom_space(
    x: &crate::mf::MatrixFactorization,
    y: &crate::mf::MatrixFactorization,
    n: u32,
) -> Result<HomBasis, crate::mf::MfError> {
    if x.f() != y.f() || x.d() != y.d() || x.field() != y.field() {
        return Err(crate::mf::MfError::Incompatible);
    }
    Ok(hom_chain(x.factors(), y.factors(), Mode::Truncated(n)))
}
