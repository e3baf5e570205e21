//! Worked examples with machine-checkable expectations.
//!
//! Every entry is generated deterministically from its name. [`check_entry`]
//! evaluates the expectations and returns findings with certificates for
//! every exact claim.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::certify;
use crate::cover::{self, CoverModule};
use crate::exactalg::{FpMatrix, Poly, PolyMatrix, Ring, RootedField};
use crate::homalg::{self, IsoStatus, Search, SplitStatus};
use crate::mf::MatrixFactorization;
use crate::report::{Certificate, Finding};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("({a}, {b}, {c}) is not admissible: need a^3 + b^3 + c^3 = 0 and abc != 0")]
    NotAdmissible { a: u64, b: u64, c: u64 },
    #[error("unknown corpus entry {0:?}")]
    Unknown(String),
}

#[derive(Clone, Debug)]
pub enum CorpusObject {
    Factorization(MatrixFactorization),
    Module(CoverModule),
    /// Labelled factorizations checked together.
    Family(Vec<(String, MatrixFactorization)>),
    ModuleFamily(Vec<(String, CoverModule)>),
}

#[derive(Clone, Debug)]
pub enum Expectation {
    /// Exact product identity (factorizations) or `phi^d = -f I` (modules).
    Valid,
    /// `is_reduced`, for modules of the flat.
    Reduced(bool),
    Order(usize),
    /// Split of the factorization, or of the flat of a module, into the
    /// given summands up to certified isomorphism.
    SplitsInto {
        truncation: u32,
        cert_degree: u32,
        summands: Vec<MatrixFactorization>,
    },
    NoSplit {
        truncation: u32,
        cert_degree: u32,
    },
    /// `flat(sharp(X))` is conjugate to the sum of shifts of `X`.
    SharpFlat,
    /// `sharp(flat(N))` splits into the twists of `N`.
    FlatSharp,
    /// Flats for `mu = zeta` and `mu = omega zeta` are isomorphic.
    MuIndependent,
    /// `A(B(X)) = X` and the projector identities.
    EquivariantRoundTrip,
    NumGenerators(usize),
    RankS(usize),
    RankOverCover(usize),
    /// `Some(v)`: Ulrich verdict `v`; `None`: not applicable (`d > ord f`).
    Ulrich(Option<bool>),
    /// Equal to another factorization, entry by entry.
    Equals(String, MatrixFactorization),
    PairwiseNotIso {
        truncation: u32,
    },
    /// At least `count` members that are pairwise `NotIsoModN`.
    DistinctAtLeast {
        count: usize,
        truncation: u32,
    },
    /// Flats of Moore modules in one symmetry orbit are certified
    /// isomorphic to the flat of the orbit representative.
    OrbitsIsomorphic {
        orbits: Vec<Vec<(u64, u64, u64)>>,
    },
    /// `det X_abc = abc (x^3 + y^3 + z^3)` over `F_p[x, y, z]`.
    MooreDeterminant {
        p: u64,
        triples: Vec<(u64, u64, u64)>,
    },
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub object: CorpusObject,
    pub expectations: Vec<Expectation>,
    pub meta: BTreeMap<String, String>,
}

impl CorpusEntry {
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        object: CorpusObject,
        expectations: Vec<Expectation>,
    ) -> Self {
        CorpusEntry {
            name: name.into(),
            description: description.into(),
            object,
            expectations,
            meta: BTreeMap::new(),
        }
    }

    /// Canonical JSON of the object; families emit one line per member.
    pub fn to_json(&self) -> String {
        match &self.object {
            CorpusObject::Factorization(x) => x.to_json(),
            CorpusObject::Module(m) => m.to_json(),
            CorpusObject::Family(xs) => xs.iter().map(|(_, x)| x.to_json()).collect(),
            CorpusObject::ModuleFamily(ms) => ms.iter().map(|(_, m)| m.to_json()).collect(),
        }
    }
}

fn diag(field: &RootedField, ring: &Ring, f: &str, es: &[&str]) -> MatrixFactorization {
    let factors = es.iter().map(|e| PolyMatrix::parse(ring, &[&[e]])).collect();
    MatrixFactorization::new(field, &ring.parse(f).expect("corpus polynomial"), factors).expect("corpus factorization")
}

fn e6_field() -> (RootedField, Ring) {
    (RootedField::new(3, None).expect("d = 3"), Ring::new(7, &["y"]))
}

/// The seven factorizations of `y^4` with three factors, by name.
pub fn e6_factorizations() -> Vec<(String, MatrixFactorization)> {
    let (f, r) = e6_field();
    let two = |ms: [[[&str; 2]; 2]; 3]| {
        let factors = ms.iter().map(|m| PolyMatrix::parse(&r, &[&m[0], &m[1]])).collect();
        MatrixFactorization::new(&f, &r.parse("y^4").expect("f"), factors).expect("corpus factorization")
    };
    vec![
        ("P1".into(), diag(&f, &r, "y^4", &["y^4", "1", "1"])),
        ("X_phi1".into(), diag(&f, &r, "y^4", &["y^3", "y", "1"])),
        ("X_psi1".into(), diag(&f, &r, "y^4", &["y^3", "1", "y"])),
        ("X_phi2".into(), diag(&f, &r, "y^4", &["y^2", "y^2", "1"])),
        ("X_beta".into(), diag(&f, &r, "y^4", &["y^2", "y", "y"])),
        (
            "X_alpha".into(),
            two([
                [["0", "-y^2"], ["1", "-y"]],
                [["0", "-y^3"], ["1", "-y^2"]],
                [["0", "-y^3"], ["1", "-y"]],
            ]),
        ),
        (
            "X_xi".into(),
            two([
                [["y", "0"], ["0", "y^3"]],
                [["0", "y"], ["y", "1"]],
                [["-y", "1"], ["y^2", "0"]],
            ]),
        ),
    ]
}

/// The module `M_1` over the 3-fold cover of `y^4`.
pub fn e6_m1() -> CoverModule {
    let (f, r) = e6_field();
    CoverModule::parse(
        &f,
        &r,
        "y^4",
        &[&["0", "0", "y"], &["-y^3", "0", "0"], &["0", "1", "0"]],
    )
    .expect("M1")
}

/// The E6 entries: the seven factorizations, their 21 shifts, `M_1` and its flat.
pub fn e6_d3() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (name, x) in e6_factorizations() {
        let mut exp = vec![
            Expectation::Valid,
            Expectation::Reduced(name == "X_beta"),
            Expectation::Order(3),
            Expectation::SharpFlat,
            Expectation::EquivariantRoundTrip,
        ];
        if name == "X_alpha" || name == "X_xi" {
            exp.push(Expectation::NoSplit {
                truncation: 8,
                cert_degree: 2,
            });
        }
        out.push(CorpusEntry::new(
            format!("e6/{name}"),
            format!("{name} in MF_3(y^4)"),
            CorpusObject::Factorization(x),
            exp,
        ));
    }
    let shifts: Vec<(String, MatrixFactorization)> = e6_factorizations()
        .into_iter()
        .flat_map(|(name, x)| {
            (0..3).map(move |k| {
                let label = match k {
                    0 => name.clone(),
                    1 => format!("T {name}"),
                    _ => format!("T^{k} {name}"),
                };
                (label, x.shift(k))
            })
        })
        .collect();
    out.push(CorpusEntry::new(
        "e6/classes",
        "the seven factorizations of y^4 and their shifts: 21 classes",
        CorpusObject::Family(shifts),
        vec![Expectation::PairwiseNotIso { truncation: 8 }],
    ));
    let m1 = e6_m1();
    let (f, r) = e6_field();
    let x = diag(&f, &r, "y^4", &["y^3", "y", "1"]);
    out.push(CorpusEntry::new(
        "e6/M1",
        "the module M1 over k[[y, z]]/(y^4 + z^3)",
        CorpusObject::Module(m1.clone()),
        vec![Expectation::Valid, Expectation::FlatSharp, Expectation::MuIndependent],
    ));
    out.push(CorpusEntry::new(
        "e6/M1_flat",
        "flat(M1), splitting into the shifts of X_phi1",
        CorpusObject::Factorization(m1.flat()),
        vec![
            Expectation::Valid,
            Expectation::SharpFlat,
            Expectation::EquivariantRoundTrip,
            Expectation::SplitsInto {
                truncation: 8,
                cert_degree: 2,
                summands: (0..3).map(|k| x.shift(k)).collect(),
            },
        ],
    ));
    out
}

/// Admissible triples `(1, b, c)` with `1 + b^3 + c^3 = 0` and `bc != 0`.
pub fn moore_triples(p: u64) -> Vec<(u64, u64, u64)> {
    let cube = |v: u64| v * v % p * v % p;
    let mut out = Vec::new();
    for b in 1..p {
        for c in 1..p {
            if (1 + cube(b) + cube(c)) % p == 0 {
                out.push((1, b, c));
            }
        }
    }
    out
}

/// Admissible triples at a prime, grouped into symmetry orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreBatch {
    pub p: u64,
    pub triples: Vec<(u64, u64, u64)>,
    /// Orbits under rescaling coordinates by cube roots of unity and
    /// rotating `(a, b, c) -> (b, c, a)`, each sorted, first element the
    /// representative. Triples in one orbit give isomorphic flats.
    pub orbits: Vec<Vec<(u64, u64, u64)>>,
}

/// Orbits of normalized triples `(1, b, c)` under the symmetries above.
pub fn moore_orbits(p: u64, triples: &[(u64, u64, u64)]) -> Vec<Vec<(u64, u64, u64)>> {
    let inv = |v: u64| crate::exactalg::field::inv_mod(v, p);
    let roots: Vec<u64> = (1..p).filter(|&z| z * z % p * z % p == 1).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut orbits = Vec::new();
    for &t in triples {
        if seen.contains(&t) {
            continue;
        }
        let mut orbit = std::collections::BTreeSet::from([t]);
        let mut stack = vec![t];
        while let Some((_, b, c)) = stack.pop() {
            let mut next = vec![(1, c * inv(b) % p, inv(b))];
            for &z in &roots {
                for &w in &roots {
                    next.push((1, b * z % p, c * w % p));
                }
            }
            for n in next {
                if orbit.insert(n) {
                    stack.push(n);
                }
            }
        }
        seen.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// First prime `p = 1 mod 6` whose admissible triples form at least
/// `min_orbits` symmetry orbits.
pub fn moore_scan(min_orbits: usize) -> MooreBatch {
    (7..)
        .step_by(6)
        .filter(|&p| crate::exactalg::field::is_prime(p))
        .map(|p| {
            let triples = moore_triples(p);
            let orbits = moore_orbits(p, &triples);
            MooreBatch { p, triples, orbits }
        })
        .find(|b| b.orbits.len() >= min_orbits)
        .expect("admissible primes exist")
}

/// `z` acting on `coker X_abc` over `F_p[x, y]`, for `f = x^3 + y^3`, `d = 3`.
pub fn moore(field: &RootedField, a: u64, b: u64, c: u64) -> Result<CoverModule, CorpusError> {
    let p = field.p();
    let (a, b, c) = (a % p, b % p, c % p);
    let cube = |v: u64| field.pow(v, 3);
    if a * b * c % p == 0 || (cube(a) + cube(b) + cube(c)) % p != 0 {
        return Err(CorpusError::NotAdmissible { a, b, c });
    }
    let r = Ring::new(p, &["x", "y"]);
    let q = |num: u64, den: u64| field.neg(field.mul(num, field.inv(den)));
    let (x, y) = (r.var(0), r.var(1));
    let zero = r.zero();
    let rows = vec![
        vec![zero.clone(), y.scale(q(c, a)), x.scale(q(a, c))],
        vec![x.scale(q(c, b)), zero.clone(), y.scale(q(b, c))],
        vec![y.scale(q(a, b)), x.scale(q(b, a)), zero],
    ];
    let phi = PolyMatrix::from_rows(&r, rows).expect("3 x 3");
    Ok(CoverModule::new(field, &r.parse("x^3 + y^3").expect("f"), phi).expect("Moore module satisfies phi^3 = -f I"))
}

/// The Moore matrix `X_abc` over `F_p[x, y, z]`.
pub fn moore_matrix(p: u64, a: u64, b: u64, c: u64) -> PolyMatrix {
    let r = Ring::new(p, &["x", "y", "z"]);
    let (x, y, z) = (r.var(0), r.var(1), r.var(2));
    let rows = vec![
        vec![x.scale(a), z.scale(b), y.scale(c)],
        vec![y.scale(b), x.scale(c), z.scale(a)],
        vec![z.scale(c), y.scale(a), x.scale(b)],
    ];
    PolyMatrix::from_rows(&r, rows).expect("3 x 3")
}

pub fn moore_entry() -> CorpusEntry {
    let batch = moore_scan(5);
    let (p, triples) = (batch.p, batch.triples.clone());
    let field = RootedField::new(3, Some(p)).expect("p = 1 mod 6");
    let members = triples
        .iter()
        .map(|&(a, b, c)| {
            (
                format!("({a},{b},{c})"),
                moore(&field, a, b, c).expect("scanned triples are admissible"),
            )
        })
        .collect();
    let mut e = CorpusEntry::new(
        "moore",
        "Moore-matrix modules over the 3-fold cover of x^3 + y^3",
        CorpusObject::ModuleFamily(members),
        vec![
            Expectation::Valid,
            Expectation::Reduced(true),
            Expectation::FlatSharp,
            Expectation::MuIndependent,
            Expectation::MooreDeterminant {
                p,
                triples: triples.clone(),
            },
            Expectation::OrbitsIsomorphic {
                orbits: batch.orbits.clone(),
            },
            Expectation::DistinctAtLeast {
                count: 5,
                truncation: 6,
            },
        ],
    );
    e.meta.insert("p".into(), p.to_string());
    e.meta.insert("triples".into(), triples.len().to_string());
    e.meta.insert("orbits".into(), batch.orbits.len().to_string());
    e
}

/// `X_k = (A, y I, A)` with `A = (x, y^k | 0, -x)`, a factorization of `x^2 y`.
pub fn dinfty(k: u32) -> MatrixFactorization {
    let field = RootedField::new(3, None).expect("d = 3");
    let r = Ring::new(field.p(), &["x", "y"]);
    let yk = format!("y^{k}");
    let a = PolyMatrix::parse(&r, &[&["x", &yk], &["0", "-x"]]);
    let yi = PolyMatrix::parse(&r, &[&["y", "0"], &["0", "y"]]);
    MatrixFactorization::new(&field, &r.parse("x^2*y").expect("f"), vec![a.clone(), yi, a]).expect("X_k")
}

pub fn dinfty_entries() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = (1..=6)
        .map(|k| {
            CorpusEntry::new(
                format!("dinfty/X_{k}"),
                format!("X_{k} in MF_3(x^2 y)"),
                CorpusObject::Factorization(dinfty(k)),
                vec![
                    Expectation::Valid,
                    Expectation::Reduced(true),
                    Expectation::NoSplit {
                        truncation: 8,
                        cert_degree: 2,
                    },
                    Expectation::SharpFlat,
                    Expectation::EquivariantRoundTrip,
                ],
            )
        })
        .collect();
    out.push(CorpusEntry::new(
        "dinfty/family",
        "X_1, ..., X_6 are pairwise non-isomorphic",
        CorpusObject::Family((1..=6).map(|k| (format!("X_{k}"), dinfty(k))).collect()),
        vec![Expectation::PairwiseNotIso { truncation: 8 }],
    ));
    out
}

/// `(y^2, y, ..., y)` with `a` factors, a factorization of `y^{a+1}`.
pub fn ulrich_mf(a: usize) -> MatrixFactorization {
    let field = RootedField::new(a as u64, None).expect("a >= 2");
    let r = Ring::new(field.p(), &["y"]);
    let mut es = vec!["y^2"];
    es.extend(std::iter::repeat_n("y", a - 1));
    diag(&field, &r, &format!("y^{}", a + 1), &es)
}

/// `mu^{-1} C` where `C` has `y^2` top-right and `y` on the subdiagonal,
/// so that the flat is `(C, ..., C)`.
pub fn ulrich_module(a: usize) -> CoverModule {
    let field = RootedField::new(a as u64, None).expect("a >= 2");
    let r = Ring::new(field.p(), &["y"]);
    let mut c = PolyMatrix::zeros(&r, a, a);
    c.set(0, a - 1, r.parse("y^2").expect("y^2"));
    for i in 1..a {
        c.set(i, i - 1, r.var(0));
    }
    let phi = c.scale(field.inv(field.mu()));
    CoverModule::new(&field, &r.parse(&format!("y^{}", a + 1)).expect("f"), phi).expect("cyclic module")
}

pub fn ulrich_entries() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for a in 2..=5 {
        let x = ulrich_mf(a);
        let n = 2 * (a as u32 + 1) + 2;
        let mut exp = vec![
            Expectation::Valid,
            Expectation::Reduced(true),
            Expectation::SharpFlat,
            Expectation::EquivariantRoundTrip,
        ];
        if a == 3 {
            let beta = e6_factorizations()
                .into_iter()
                .find(|(n, _)| n == "X_beta")
                .expect("X_beta")
                .1;
            exp.push(Expectation::Equals("e6/X_beta".into(), beta));
        }
        out.push(CorpusEntry::new(
            format!("ulrich/a{a}/mf"),
            format!("(y^2, y, ..., y) in MF_{a}(y^{})", a + 1),
            CorpusObject::Factorization(x.clone()),
            exp,
        ));
        out.push(CorpusEntry::new(
            format!("ulrich/a{a}/module"),
            format!("k[[t]] over the {a}-fold cover of y^{}", a + 1),
            CorpusObject::Module(ulrich_module(a)),
            vec![
                Expectation::Valid,
                Expectation::Ulrich(Some(true)),
                Expectation::NumGenerators(a),
                Expectation::RankS(a),
                Expectation::RankOverCover(1),
                Expectation::FlatSharp,
                Expectation::MuIndependent,
                Expectation::SplitsInto {
                    truncation: n,
                    cert_degree: 2,
                    summands: (0..a as i64).map(|k| x.shift(k)).collect(),
                },
            ],
        ));
    }
    out
}

/// The module `B` over `k[[x, y]]/(x^3 + y^4)` viewed as the 4-fold cover of `x^3`.
pub fn e6_d4_b() -> CoverModule {
    let field = RootedField::new(4, None).expect("d = 4");
    let r = Ring::new(field.p(), &["x"]);
    CoverModule::parse(
        &field,
        &r,
        "x^3",
        &[
            &["0", "0", "x", "0"],
            &["-x", "0", "0", "0"],
            &["0", "0", "0", "x"],
            &["0", "1", "0", "0"],
        ],
    )
    .expect("B")
}

pub fn e6_d4_entry() -> CorpusEntry {
    CorpusEntry::new(
        "e6_d4/B",
        "B over the 4-fold cover of x^3: Ulrich yet non-reduced",
        CorpusObject::Module(e6_d4_b()),
        vec![
            Expectation::Valid,
            Expectation::NumGenerators(3),
            Expectation::RankS(4),
            Expectation::Reduced(false),
            Expectation::Ulrich(None),
            Expectation::FlatSharp,
            Expectation::MuIndependent,
        ],
    )
}

/// Every entry, in a fixed order.
pub fn all_entries() -> Vec<CorpusEntry> {
    let mut out = e6_d3();
    out.push(moore_entry());
    out.extend(dinfty_entries());
    out.extend(ulrich_entries());
    out.push(e6_d4_entry());
    out
}

pub fn entry(name: &str) -> Result<CorpusEntry, CorpusError> {
    all_entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CorpusError::Unknown(name.into()))
}

fn iso_cert(x: &MatrixFactorization, y: &MatrixFactorization, v: &homalg::IsoVerdict) -> Option<Certificate> {
    v.certificate
        .as_ref()
        .map(|c| Certificate::isomorphism(x.factors(), y.factors(), &c.alpha, &c.alpha_inv))
}

fn check_valid_mf(name: &str, x: &MatrixFactorization) -> Finding {
    let ok = MatrixFactorization::new(x.field(), x.f(), x.factors().to_vec()).is_ok();
    Finding::new(name, "product = f·I", ok).with(Certificate::factorization(x.f(), x.factors()))
}

fn check_valid_module(name: &str, m: &CoverModule) -> Finding {
    let minus_f = -m.f();
    let ok = certify::power_is_scalar(m.phi(), m.d() as u32, &minus_f);
    Finding::new(name, "phi^d = -f·I", ok).with(Certificate::power_identity(m.phi(), m.d() as u32, &minus_f))
}

fn check_sharp_flat(name: &str, x: &MatrixFactorization) -> Finding {
    let Ok(sh) = cover::sharp(x) else {
        return Finding::new(name, "flat(sharp X) = sum of shifts", false).detail("arity differs from the field");
    };
    let u = cover::sharp_flat_certificate(x);
    let u_inv: Vec<PolyMatrix> = u.iter().map(cover::transpose).collect();
    let src = sh.flat();
    let tgt = cover::sum_of_shifts(x);
    let ok = certify::is_base_change(src.factors(), tgt.factors(), &u, &u_inv);
    Finding::new(name, "flat(sharp X) = sum of shifts", ok).with(Certificate::base_change(
        src.factors(),
        tgt.factors(),
        &u,
        &u_inv,
    ))
}

fn check_flat_sharp(name: &str, m: &CoverModule) -> Finding {
    let cert = m.flat_sharp_certificate();
    let (src, tgt) = m.flat_sharp_targets();
    let ok = cert.verify(&src, &tgt) && certify::are_inverse(&cert.g, &cert.s);
    // g src s = tgt, recorded as a base change with u = s, u_inv = g
    let c = Certificate::base_change(
        std::slice::from_ref(&src),
        std::slice::from_ref(&tgt),
        std::slice::from_ref(&cert.s),
        std::slice::from_ref(&cert.g),
    );
    Finding::new(name, "sharp(flat N) = sum of twists, g s = I", ok).with(c)
}

fn check_mu(name: &str, m: &CoverModule, seed: u64) -> Finding {
    let fld = m.field();
    let a = m.flat_with_mu(fld.zeta());
    let b = m.flat_with_mu(fld.mul(fld.omega(), fld.zeta()));
    let (Ok(a), Ok(b)) = (a, b) else {
        return Finding::new(name, "flat independent of mu", false).detail("mu is not a root of -1");
    };
    let s = Search::new(Search::default_for(m.f()).truncation, 2, seed);
    let v = homalg::is_isomorphic(&a, &b, &s);
    let mut f = Finding::new(name, "flat independent of mu", v.status == IsoStatus::CertifiedIso)
        .detail(format!("{:?}", v.status));
    if let Some(c) = iso_cert(&a, &b, &v) {
        f = f.with(c);
    }
    f
}

fn check_equivariant(name: &str, x: &MatrixFactorization, seed: u64) -> Vec<Finding> {
    let b = match cover::equivariant_b(x) {
        Ok(b) => b,
        Err(e) => return vec![Finding::new(name, "A(B(X)) = X", false).detail(e.to_string())],
    };
    let mut out = Vec::new();
    match b.projectors() {
        Ok(e) => {
            let p = x.field().p();
            let n = b.base().rank();
            let d = e.len();
            let idem = e.iter().all(|ek| ek.mul(ek) == *ek);
            let mut sum = FpMatrix::zeros(p, n, n);
            for ek in &e {
                sum = sum.add(ek);
            }
            let total = sum == FpMatrix::identity(p, n);
            let ring = b.base().ring();
            let inter = (0..d).all(|k| {
                let ek = PolyMatrix::from_fp(ring, &e[k]);
                let prev = PolyMatrix::from_fp(ring, &e[(k + d - 1) % d]);
                &ek * b.base().phi() == b.base().phi() * &prev
            });
            out.push(Finding::new(
                name,
                "E_k^2 = E_k, sum E_k = I, E_k phi = phi E_{k-1}",
                idem && total && inter,
            ));
        }
        Err(e) => out.push(Finding::new(name, "projector identities", false).detail(e.to_string())),
    }
    match b.equivariant_a() {
        Ok(ab) => {
            let s = Search::new(Search::default_for(x.f()).truncation, 2, seed);
            let v = homalg::is_isomorphic(&ab, x, &s);
            let mut f = Finding::new(
                name,
                "A(B(X)) certified isomorphic to X",
                v.status == IsoStatus::CertifiedIso,
            )
            .detail(format!("{:?}", v.status));
            if let Some(c) = iso_cert(&ab, x, &v) {
                f = f.with(c);
            }
            out.push(f);
        }
        Err(e) => out.push(Finding::new(name, "A(B(X)) certified isomorphic to X", false).detail(e.to_string())),
    }
    out
}

fn check_split(
    name: &str,
    x: &MatrixFactorization,
    truncation: u32,
    cert_degree: u32,
    expected: &[MatrixFactorization],
    seed: u64,
) -> Finding {
    let s = Search::new(truncation, cert_degree, seed);
    let dec = homalg::decompose(x, &s);
    let total = MatrixFactorization::direct_sum_all(&dec.summands).expect("summands share f and d");
    let mut certs = vec![Certificate::base_change(
        x.factors(),
        total.factors(),
        &dec.base_change.u,
        &dec.base_change.u_inv,
    )];
    let mut unmatched: Vec<&MatrixFactorization> = dec.summands.iter().collect();
    let mut all_matched = dec.summands.len() == expected.len();
    for want in expected {
        if let Some(i) = unmatched.iter().position(|got| *got == want) {
            unmatched.swap_remove(i);
            continue;
        }
        let hit = unmatched.iter().enumerate().find_map(|(i, got)| {
            let v = homalg::is_isomorphic(got, want, &s);
            (v.status == IsoStatus::CertifiedIso).then(|| (i, iso_cert(got, want, &v)))
        });
        match hit {
            Some((i, c)) => {
                unmatched.swap_remove(i);
                certs.extend(c);
            }
            None => all_matched = false,
        }
    }
    let ok = dec.status == SplitStatus::CertifiedSplit && all_matched && unmatched.is_empty();
    let mut f = Finding::new(
        name,
        format!(
            "CertifiedSplit into {} expected summands at (N={truncation}, D={cert_degree})",
            expected.len()
        ),
        ok,
    )
    .detail(format!("{:?}, {} summands", dec.status, dec.summands.len()));
    for c in certs {
        f = f.with(c);
    }
    f
}

fn check_no_split(name: &str, x: &MatrixFactorization, truncation: u32, cert_degree: u32, seed: u64) -> Finding {
    let dec = homalg::decompose(x, &Search::new(truncation, cert_degree, seed));
    Finding::new(
        name,
        format!("NoSplitFoundAtLevel(N={truncation}, D={cert_degree})"),
        dec.status == SplitStatus::NoSplitFoundAtLevel && dec.summands.len() == 1,
    )
    .detail(format!("{:?}", dec.status))
}

fn check_pairwise(name: &str, xs: &[(String, MatrixFactorization)], truncation: u32, seed: u64) -> Finding {
    let mut bad = Vec::new();
    let mut pairs = 0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            pairs += 1;
            let s = Search::new(truncation, 2, seed);
            let v = homalg::is_isomorphic(&xs[i].1, &xs[j].1, &s);
            if v.status != IsoStatus::NotIsoModN {
                bad.push(format!("{} ~ {}: {:?}", xs[i].0, xs[j].0, v.status));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{pairs} pairs")
    } else {
        bad.join("; ")
    };
    Finding::new(
        name,
        format!("{} members pairwise NotIsoModN at N={truncation}", xs.len()),
        bad.is_empty(),
    )
    .detail(detail)
}

fn check_distinct(
    name: &str,
    xs: &[(String, MatrixFactorization)],
    count: usize,
    truncation: u32,
    seed: u64,
) -> Finding {
    let s = Search::new(truncation, 2, seed);
    let mut chosen: Vec<&(String, MatrixFactorization)> = Vec::new();
    for x in xs {
        if chosen.len() == count {
            break;
        }
        if chosen
            .iter()
            .all(|c| homalg::is_isomorphic(&c.1, &x.1, &s).status == IsoStatus::NotIsoModN)
        {
            chosen.push(x);
        }
    }
    let labels: Vec<&str> = chosen.iter().map(|c| c.0.as_str()).collect();
    Finding::new(
        name,
        format!("at least {count} flats pairwise NotIsoModN at N={truncation}"),
        chosen.len() >= count,
    )
    .detail(labels.join(" "))
}

fn check_moore_det(name: &str, p: u64, triples: &[(u64, u64, u64)]) -> Finding {
    let r = Ring::new(p, &["x", "y", "z"]);
    let cubic = r.parse("x^3 + y^3 + z^3").expect("cubic");
    let bad: Vec<String> = triples
        .iter()
        .filter(|&&(a, b, c)| {
            let det = moore_matrix(p, a, b, c).det().expect("3 x 3");
            det != cubic.scale(a * b % p * c % p)
        })
        .map(|t| format!("{t:?}"))
        .collect();
    Finding::new(name, "det X_abc = abc (x^3 + y^3 + z^3)", bad.is_empty()).detail(if bad.is_empty() {
        format!("{} triples over F_{p}", triples.len())
    } else {
        bad.join(" ")
    })
}

fn check_orbits(name: &str, ms: &[(String, CoverModule)], orbits: &[Vec<(u64, u64, u64)>], seed: u64) -> Finding {
    let find = |t: &(u64, u64, u64)| {
        ms.iter()
            .find(|(l, _)| *l == format!("({},{},{})", t.0, t.1, t.2))
            .map(|(_, m)| m.flat())
    };
    let mut certs = Vec::new();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for orbit in orbits {
        let Some(rep) = find(&orbit[0]) else {
            bad.push(format!("{:?} missing", orbit[0]));
            continue;
        };
        let s = Search::new(6, 2, seed);
        for t in &orbit[1..] {
            pairs += 1;
            let Some(x) = find(t) else {
                bad.push(format!("{t:?} missing"));
                continue;
            };
            let v = homalg::is_isomorphic(&rep, &x, &s);
            match iso_cert(&rep, &x, &v) {
                Some(c) if v.status == IsoStatus::CertifiedIso => certs.push(c),
                _ => bad.push(format!("{:?} ~ {t:?}: {:?}", orbit[0], v.status)),
            }
        }
    }
    let mut f = Finding::new(
        name,
        format!("{} symmetry orbits: members certified isomorphic", orbits.len()),
        bad.is_empty(),
    )
    .detail(if bad.is_empty() {
        format!("{pairs} isomorphisms")
    } else {
        bad.join("; ")
    });
    for c in certs {
        f = f.with(c);
    }
    f
}

fn check_mf(name: &str, x: &MatrixFactorization, e: &Expectation, seed: u64) -> Vec<Finding> {
    match e {
        Expectation::Valid => vec![check_valid_mf(name, x)],
        Expectation::Reduced(want) => vec![Finding::new(name, format!("reduced = {want}"), x.is_reduced() == *want)],
        Expectation::Order(k) => {
            let s = Search::new(Search::default_for(x.f()).truncation.max(8), 2, seed);
            let got = homalg::order_of(x, &s);
            vec![Finding::new(name, format!("order = {k}"), got == *k).detail(format!("got {got}"))]
        }
        Expectation::SplitsInto {
            truncation,
            cert_degree,
            summands,
        } => vec![check_split(name, x, *truncation, *cert_degree, summands, seed)],
        Expectation::NoSplit {
            truncation,
            cert_degree,
        } => vec![check_no_split(name, x, *truncation, *cert_degree, seed)],
        Expectation::SharpFlat => vec![check_sharp_flat(name, x)],
        Expectation::EquivariantRoundTrip => check_equivariant(name, x, seed),
        Expectation::Equals(other, y) => vec![Finding::new(name, format!("equals {other}"), x == y)],
        other => {
            vec![Finding::new(name, format!("{other:?}"), false).detail("expectation does not apply to a factorization")]
        }
    }
}

fn check_module(name: &str, m: &CoverModule, e: &Expectation, seed: u64) -> Vec<Finding> {
    match e {
        Expectation::Valid => vec![check_valid_module(name, m)],
        Expectation::Reduced(want) => {
            let got = m.flat().is_reduced();
            vec![Finding::new(name, format!("flat reduced = {want}"), got == *want)]
        }
        Expectation::SplitsInto {
            truncation,
            cert_degree,
            summands,
        } => vec![check_split(name, &m.flat(), *truncation, *cert_degree, summands, seed)],
        Expectation::FlatSharp => vec![check_flat_sharp(name, m)],
        Expectation::MuIndependent => vec![check_mu(name, m, seed)],
        Expectation::NumGenerators(k) => {
            let got = m.num_generators();
            vec![Finding::new(name, format!("num_generators = {k}"), got == *k).detail(format!("got {got}"))]
        }
        Expectation::RankS(k) => vec![Finding::new(name, format!("rank_S = {k}"), m.rank() == *k)],
        Expectation::RankOverCover(k) => {
            let got = m.rank_over_cover(true);
            vec![
                Finding::new(name, format!("rank over the cover = {k}"), got.as_ref() == Ok(k))
                    .detail(format!("{got:?}")),
            ]
        }
        Expectation::Ulrich(want) => {
            let v = m.is_ulrich();
            let label = match want {
                Some(true) => "Ulrich",
                Some(false) => "not Ulrich",
                None => "NotApplicable (d > ord f)",
            };
            let mut ok = v.is_ulrich() == *want;
            if *want == Some(true) {
                ok &= v.mu_equals_rank();
            }
            vec![Finding::new(name, label, ok).detail(format!(
                "reduced={}, mu={}, rank={}",
                v.reduced, v.num_generators, v.rank
            ))]
        }
        other => vec![Finding::new(name, format!("{other:?}"), false).detail("expectation does not apply to a module")],
    }
}

/// Evaluates every expectation of an entry.
pub fn check_entry(entry: &CorpusEntry, seed: u64) -> Vec<Finding> {
    let name = entry.name.as_str();
    let mut out = Vec::new();
    for e in &entry.expectations {
        match (&entry.object, e) {
            (CorpusObject::Factorization(x), _) => out.extend(check_mf(name, x, e, seed)),
            (CorpusObject::Module(m), _) => out.extend(check_module(name, m, e, seed)),
            (CorpusObject::Family(xs), Expectation::PairwiseNotIso { truncation }) => {
                out.push(check_pairwise(name, xs, *truncation, seed))
            }
            (CorpusObject::Family(xs), Expectation::DistinctAtLeast { count, truncation }) => {
                out.push(check_distinct(name, xs, *count, *truncation, seed))
            }
            (CorpusObject::ModuleFamily(ms), Expectation::DistinctAtLeast { count, truncation }) => {
                let flats: Vec<(String, MatrixFactorization)> = ms.iter().map(|(l, m)| (l.clone(), m.flat())).collect();
                out.push(check_distinct(name, &flats, *count, *truncation, seed))
            }
            (CorpusObject::ModuleFamily(ms), Expectation::PairwiseNotIso { truncation }) => {
                let flats: Vec<(String, MatrixFactorization)> = ms.iter().map(|(l, m)| (l.clone(), m.flat())).collect();
                out.push(check_pairwise(name, &flats, *truncation, seed))
            }
            (CorpusObject::ModuleFamily(ms), Expectation::OrbitsIsomorphic { orbits }) => {
                out.push(check_orbits(name, ms, orbits, seed))
            }
            (_, Expectation::MooreDeterminant { p, triples }) => out.push(check_moore_det(name, *p, triples)),
            (CorpusObject::Family(xs), _) => {
                for (label, x) in xs {
                    out.extend(check_mf(&format!("{name}[{label}]"), x, e, seed));
                }
            }
            (CorpusObject::ModuleFamily(ms), _) => {
                for (label, m) in ms {
                    out.extend(check_module(&format!("{name}[{label}]"), m, e, seed));
                }
            }
        }
    }
    out
}

/// `f` as a polynomial in its ring, for callers building entries by hand.
pub fn poly(ring: &Ring, s: &str) -> Poly {
    ring.parse(s).expect("valid polynomial")
}
