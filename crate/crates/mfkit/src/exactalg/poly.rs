//! Sparse multivariate polynomials over `F_p`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::field::inv_mod;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists or moduli differ: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("exponent vector has length {got}, ring has {expected} variables")]
    ExponentLength { expected: usize, got: usize },
    #[error("coefficient {c} is not a canonical residue modulo {p}")]
    BadCoefficient { c: u64, p: u64 },
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// The coefficient field modulus together with an ordered variable list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    p: u64,
    vars: Arc<[String]>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.p, self.vars.join(","))
    }
}

impl Ring {
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S]) -> Self {
        Ring {
            p,
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        }
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn zero(&self) -> Poly {
        Poly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }
    pub fn one(&self) -> Poly {
        self.constant(1)
    }
    pub fn constant(&self, c: u64) -> Poly {
        self.term(c, Monomial::one(self.nvars()))
    }
    pub fn term(&self, c: u64, m: Monomial) -> Poly {
        let mut p = self.zero();
        let c = c % self.p;
        if c != 0 {
            p.terms.insert(m, c);
        }
        p
    }
    /// The `i`-th variable as a polynomial.
    pub fn var(&self, i: usize) -> Poly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.term(1, Monomial(e))
    }
    pub fn var_named(&self, name: &str) -> Option<Poly> {
        self.vars.iter().position(|v| v == name).map(|i| self.var(i))
    }

    /// Monomials of total degree `< bound`, in ascending graded order.
    pub fn monomials_below(&self, bound: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for deg in 0..bound {
            let mut cur = vec![0u32; self.nvars()];
            push_monomials_of_degree(&mut out, &mut cur, 0, deg);
        }
        out.sort();
        out
    }

    /// Parses expressions like `-3*x^2*y + y^4 - 1`.
    pub fn parse(&self, input: &str) -> Result<Poly, PolyError> {
        let err = |reason: &str| PolyError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        let mut result = self.zero();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in s.char_indices() {
            if (ch == '+' || ch == '-') && !(i > 0 && s[..i].ends_with('^')) {
                if !cur.is_empty() {
                    chunks.push((negative, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(err("dangling sign"));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err("trailing sign"));
        }
        chunks.push((negative, cur));
        for (neg, chunk) in chunks {
            let mut coeff: u64 = 1;
            let mut exps = vec![0u32; self.nvars()];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if let Ok(n) = factor.parse::<u64>() {
                    coeff = coeff * (n % self.p) % self.p;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let idx = self
                    .vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| err(&format!("unknown variable {name}")))?;
                exps[idx] += e;
            }
            if neg {
                coeff = (self.p - coeff) % self.p;
            }
            result = &result + &self.term(coeff, Monomial(exps));
        }
        Ok(result)
    }
}

fn push_monomials_of_degree(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, idx: usize, left: u32) {
    if idx + 1 == cur.len() {
        cur[idx] = left;
        out.push(Monomial(cur.clone()));
        cur[idx] = 0;
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[idx] = e;
        push_monomials_of_degree(out, cur, idx + 1, left - e);
    }
    cur[idx] = 0;
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial: a map from monomials to nonzero canonical residues.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Monomial, u64>,
}

impl Poly {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn p(&self) -> u64 {
        self.ring.p
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    /// Terms in ascending graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }
    pub fn constant_term(&self) -> u64 {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; coefficients
    /// must already be canonical residues.
    pub fn from_terms(ring: &Ring, terms: &[(u64, Vec<u32>)]) -> Result<Poly, PolyError> {
        let mut out = ring.zero();
        for (c, e) in terms {
            if *c >= ring.p {
                return Err(PolyError::BadCoefficient { c: *c, p: ring.p });
            }
            if e.len() != ring.nvars() {
                return Err(PolyError::ExponentLength {
                    expected: ring.nvars(),
                    got: e.len(),
                });
            }
            out.add_term(Monomial(e.clone()), *c);
        }
        Ok(out)
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) {
        let p = self.ring.p;
        let c = c % p;
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch {
                left: format!("{:?}", self.ring),
                right: format!("{:?}", other.ring),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(other)?;
        let p = self.ring.p;
        let mut out = self.ring.zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), c1 * c2 % p);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let p = self.ring.p;
        let c = c % p;
        if c == 0 {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), v * c % p)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every term of total degree `>= bound`.
    pub fn truncate(&self, bound: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < bound)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// Largest `e` with the polynomial in `n^e`; `None` stands for infinity.
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Coefficient of the lowest term in the graded order.
    pub fn lowest_coeff(&self) -> Option<u64> {
        self.terms.values().next().copied()
    }

    /// Division with remainder by `g` using graded-lex leading terms.
    pub fn div_rem(&self, g: &Poly) -> (Poly, Poly) {
        assert!(!g.is_zero(), "division by zero polynomial");
        let p = self.ring.p;
        let (lm, lc) = g.terms.iter().next_back().map(|(m, &c)| (m.clone(), c)).unwrap();
        let lc_inv = inv_mod(lc, p);
        let mut q = self.ring.zero();
        let mut rem = self.ring.zero();
        let mut work = self.clone();
        while let Some((m, c)) = work.terms.iter().next_back().map(|(m, &c)| (m.clone(), c)) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = c * lc_inv % p;
                let t = self.ring.term(qc, qm);
                q = &q + &t;
                work = &work - &(&t * g);
            } else {
                work.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        (q, rem)
    }

    /// `Some(q)` with `self = q * g` when `g` divides `self` exactly.
    pub fn exact_div(&self, g: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(g);
        r.is_zero().then_some(q)
    }

    /// Serializable `[c, [e...]]` terms in ascending order.
    pub fn to_wire(&self) -> Vec<(u64, Vec<u32>)> {
        self.terms().map(|(m, c)| (c, m.0.clone())).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (name, &e) in self.ring.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_add(&-rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.ring.p - 1)
    }
}
