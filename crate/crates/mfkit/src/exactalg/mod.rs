//! Exact arithmetic: prime fields, polynomials, polynomial matrices and
//! linear algebra over `F_p`.

pub mod field;
pub mod linalg;
pub mod matrix;
pub mod poly;

pub use field::{FieldError, FieldHeader, RootedField};
pub use linalg::{FpMatrix, SparseSystem, UniPoly};
pub use matrix::{MatrixError, PolyMatrix};
pub use poly::{Monomial, Poly, PolyError, Ring};
