//! Versioned JSON reports with embedded certificates.
//!
//! A certificate carries every matrix it mentions, so [`Certificate::recheck`]
//! needs only polynomial matrix arithmetic and the checks in
//! [`crate::certify`]; no search code runs during a recheck.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certify;
use crate::exactalg::{Poly, PolyMatrix, Ring};
use crate::wire::{self, WireError, WireMatrix, WirePoly};

pub const SCHEMA: &str = "mfkit-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// Every cyclic product of `source` equals `scalar * I`.
    Factorization,
    /// `source[0]^power = scalar * I`.
    PowerIdentity,
    /// `inverses_i * source_i * maps_{i+1} = target_i`, `maps_i` invertible.
    BaseChange,
    /// `maps` is a morphism `source -> target` with inverses `inverses`.
    Isomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub p: u64,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<WirePoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    pub source: Vec<WireMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target: Vec<WireMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<WireMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inverses: Vec<WireMatrix>,
}

fn wires(ms: &[PolyMatrix]) -> Vec<WireMatrix> {
    ms.iter().map(|m| m.to_wire()).collect()
}

impl Certificate {
    fn base(kind: CertificateKind, ring: &Ring, source: &[PolyMatrix]) -> Self {
        Certificate {
            kind,
            p: ring.p(),
            vars: ring.vars().to_vec(),
            scalar: None,
            power: None,
            source: wires(source),
            target: Vec::new(),
            maps: Vec::new(),
            inverses: Vec::new(),
        }
    }

    pub fn factorization(f: &Poly, factors: &[PolyMatrix]) -> Self {
        Certificate {
            scalar: Some(f.to_wire()),
            ..Self::base(CertificateKind::Factorization, f.ring(), factors)
        }
    }

    pub fn power_identity(phi: &PolyMatrix, power: u32, scalar: &Poly) -> Self {
        Certificate {
            scalar: Some(scalar.to_wire()),
            power: Some(power),
            ..Self::base(CertificateKind::PowerIdentity, phi.ring(), std::slice::from_ref(phi))
        }
    }

    pub fn base_change(src: &[PolyMatrix], tgt: &[PolyMatrix], u: &[PolyMatrix], u_inv: &[PolyMatrix]) -> Self {
        Certificate {
            target: wires(tgt),
            maps: wires(u),
            inverses: wires(u_inv),
            ..Self::base(CertificateKind::BaseChange, src[0].ring(), src)
        }
    }

    pub fn isomorphism(src: &[PolyMatrix], tgt: &[PolyMatrix], alpha: &[PolyMatrix], alpha_inv: &[PolyMatrix]) -> Self {
        Certificate {
            target: wires(tgt),
            maps: wires(alpha),
            inverses: wires(alpha_inv),
            ..Self::base(CertificateKind::Isomorphism, src[0].ring(), src)
        }
    }

    /// Re-verifies the certificate exactly from its own data.
    pub fn recheck(&self) -> Result<bool, WireError> {
        if !crate::exactalg::field::is_prime(self.p) {
            return Err(WireError::at("p", "not a prime"));
        }
        let ring = Ring::new(self.p, &self.vars);
        let load = |ms: &[WireMatrix], name: &str| -> Result<Vec<PolyMatrix>, WireError> {
            ms.iter()
                .enumerate()
                .map(|(i, m)| wire::matrix_from_wire(&ring, m, &format!("{name}[{i}]")))
                .collect()
        };
        let source = load(&self.source, "source")?;
        if source.is_empty() {
            return Err(WireError::at("source", "empty"));
        }
        let scalar = || -> Result<Poly, WireError> {
            let w = self.scalar.as_ref().ok_or_else(|| WireError::at("scalar", "missing"))?;
            wire::poly_from_wire(&ring, w, "scalar")
        };
        Ok(match self.kind {
            CertificateKind::Factorization => {
                let f = scalar()?;
                let d = source.len();
                let n = source[0].rows();
                source.iter().all(|m| m.rows() == n)
                    && (0..d).all(|k| {
                        let rotated: Vec<PolyMatrix> = (0..d).map(|j| source[(k + j) % d].clone()).collect();
                        certify::product(&rotated).is_scalar_multiple_of_identity(&f)
                    })
            }
            CertificateKind::PowerIdentity => {
                let g = scalar()?;
                let power = self.power.ok_or_else(|| WireError::at("power", "missing"))?;
                source.len() == 1 && certify::power_is_scalar(&source[0], power, &g)
            }
            CertificateKind::BaseChange | CertificateKind::Isomorphism => {
                let target = load(&self.target, "target")?;
                let maps = load(&self.maps, "maps")?;
                let inverses = load(&self.inverses, "inverses")?;
                let shapes_ok = source.len() == target.len()
                    && maps.len() == source.len()
                    && inverses.len() == source.len()
                    && source.iter().zip(&target).all(|(s, t)| s.rows() == t.rows())
                    && maps.iter().zip(&source).all(|(m, s)| m.rows() == s.rows());
                shapes_ok
                    && if self.kind == CertificateKind::BaseChange {
                        certify::is_base_change(&source, &target, &maps, &inverses)
                    } else {
                        certify::is_isomorphism(&source, &target, &maps, &inverses)
                    }
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub name: String,
    pub sha256: String,
}

impl Input {
    pub fn digest(name: impl Into<String>, bytes: &[u8]) -> Self {
        Input {
            name: name.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultLine {
    pub subject: String,
    pub assertion: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    /// Indices into [`Report::certificates`].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    pub cert_degree: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub settings: Settings,
    pub inputs: Vec<Input>,
    pub results: Vec<ResultLine>,
    pub certificates: Vec<Certificate>,
}

/// One checked assertion with the certificates that back it.
#[derive(Clone, Debug)]
pub struct Finding {
    pub subject: String,
    pub assertion: String,
    pub passed: bool,
    pub detail: String,
    pub certificates: Vec<Certificate>,
}

impl Finding {
    pub fn new(subject: impl Into<String>, assertion: impl Into<String>, passed: bool) -> Self {
        Finding {
            subject: subject.into(),
            assertion: assertion.into(),
            passed,
            detail: String::new(),
            certificates: Vec::new(),
        }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn with(mut self, cert: Certificate) -> Self {
        self.certificates.push(cert);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecheckOutcome {
    pub checked: usize,
    /// `(index, reason)` for every certificate that did not verify.
    pub failures: Vec<(usize, String)>,
}

impl Report {
    pub fn new(command: impl Into<String>, settings: Settings) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            settings,
            inputs: Vec::new(),
            results: Vec::new(),
            certificates: Vec::new(),
        }
    }

    pub fn push(&mut self, finding: Finding) {
        let start = self.certificates.len();
        let n = finding.certificates.len();
        self.certificates.extend(finding.certificates);
        self.results.push(ResultLine {
            subject: finding.subject,
            assertion: finding.assertion,
            status: Status::from_bool(finding.passed),
            detail: finding.detail,
            certificates: (start..start + n).collect(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        wire::to_canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self, WireError> {
        let r: Report = wire::from_json(s)?;
        if r.schema != SCHEMA {
            return Err(WireError::at("schema", format!("expected {SCHEMA}, got {}", r.schema)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!("{}: {}: {status}", r.subject, r.assertion));
            if !r.detail.is_empty() {
                out.push_str(&format!(" ({})", r.detail));
            }
            out.push('\n');
        }
        let passed = self.results.iter().filter(|r| r.status == Status::Pass).count();
        out.push_str(&format!(
            "{passed}/{} assertions passed, {} certificates\n",
            self.results.len(),
            self.certificates.len()
        ));
        out
    }

    /// Re-verifies every embedded certificate.
    pub fn recheck(&self) -> RecheckOutcome {
        let failures = self
            .certificates
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c.recheck() {
                Ok(true) => None,
                Ok(false) => Some((i, "identity does not hold".to_string())),
                Err(e) => Some((i, e.to_string())),
            })
            .collect();
        RecheckOutcome {
            checked: self.certificates.len(),
            failures,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(7, &["y"])
    }

    fn m(s: &str) -> PolyMatrix {
        PolyMatrix::parse(&ring(), &[&[s]])
    }

    #[test]
    fn factorization_certificate_round_trip() {
        let f = ring().parse("y^4").unwrap();
        let good = Certificate::factorization(&f, &[m("y^3"), m("y"), m("1")]);
        let bad = Certificate::factorization(&f, &[m("y^2"), m("y"), m("1")]);
        let mut report = Report::new("test", Settings::default());
        report.push(Finding::new("x", "valid", true).with(good.clone()).with(bad));
        let back = Report::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        let out = back.recheck();
        assert_eq!(out.checked, 2);
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].0, 1);
        assert!(good.recheck().unwrap());
    }

    #[test]
    fn base_change_and_iso() {
        let src = [m("y^3"), m("y"), m("1")];
        let u = [m("2"), m("3"), m("5")];
        let u_inv = [m("4"), m("5"), m("3")];
        let tgt: Vec<PolyMatrix> = (0..3).map(|i| &(&u_inv[i] * &src[i]) * &u[(i + 1) % 3]).collect();
        assert!(Certificate::base_change(&src, &tgt, &u, &u_inv).recheck().unwrap());
        // an isomorphism src -> tgt is u_inv
        assert!(Certificate::isomorphism(&src, &tgt, &u_inv, &u).recheck().unwrap());
        assert!(!Certificate::isomorphism(&src, &tgt, &u, &u_inv).recheck().unwrap());
    }

    #[test]
    fn rejects_other_schema() {
        let mut r = Report::new("x", Settings::default());
        r.schema = "other/2".into();
        assert!(Report::from_json(&r.to_json()).is_err());
    }

    #[test]
    fn digest_is_sha256() {
        // sha256("abc")
        assert_eq!(
            Input::digest("a", b"abc").sha256,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
