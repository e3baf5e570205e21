//! JSON wire forms shared by factorizations, modules and reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{FieldError, FieldHeader, Poly, PolyMatrix, Ring, RootedField};

pub type WirePoly = Vec<(u64, Vec<u32>)>;
pub type WireMatrix = Vec<Vec<WirePoly>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("JSON: {0}")]
    Json(String),
    #[error("{path}: {reason}")]
    Field { path: String, reason: String },
    #[error("field header: {0}")]
    Header(#[from] FieldError),
}

impl WireError {
    pub fn at(path: impl Into<String>, reason: impl ToString) -> Self {
        WireError::Field {
            path: path.into(),
            reason: reason.to_string(),
        }
    }
}

/// Variable names used when a file omits `vars`.
pub fn default_vars(n: usize) -> Vec<String> {
    match n {
        1 => vec!["y".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

pub(crate) fn infer_nvars<'a>(polys: impl IntoIterator<Item = &'a WirePoly>) -> usize {
    polys
        .into_iter()
        .flat_map(|p| p.iter())
        .map(|(_, e)| e.len())
        .next()
        .unwrap_or(1)
}

pub fn poly_from_wire(ring: &Ring, w: &WirePoly, path: &str) -> Result<Poly, WireError> {
    let mut seen = std::collections::BTreeSet::new();
    for (i, (_, e)) in w.iter().enumerate() {
        if !seen.insert(e.clone()) {
            return Err(WireError::at(format!("{path}[{i}]"), "repeated exponent vector"));
        }
    }
    for (i, (c, _)) in w.iter().enumerate() {
        if *c == 0 {
            return Err(WireError::at(format!("{path}[{i}]"), "zero coefficient stored"));
        }
    }
    Poly::from_terms(ring, w).map_err(|e| WireError::at(path, e))
}

pub fn matrix_from_wire(ring: &Ring, w: &WireMatrix, path: &str) -> Result<PolyMatrix, WireError> {
    let rows = w
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, e)| poly_from_wire(ring, e, &format!("{path}[{r}][{c}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = PolyMatrix::from_rows(ring, rows).map_err(|e| WireError::at(path, e))?;
    if !m.is_square() {
        return Err(WireError::at(path, "matrix is not square"));
    }
    Ok(m)
}

pub fn field_from_header(h: FieldHeader) -> Result<RootedField, WireError> {
    Ok(RootedField::from_header(h)?)
}

/// Compact JSON followed by a newline; the canonical on-disk form.
pub fn to_canonical_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("wire types always serialize");
    s.push('\n');
    s
}

pub fn from_json<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T, WireError> {
    serde_json::from_str(s).map_err(|e| WireError::Json(e.to_string()))
}
