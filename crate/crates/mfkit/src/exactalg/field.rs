//! Prime fields `F_p` carrying a distinguished element of order `2d`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("arity d must be at least 1, got {0}")]
    BadArity(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} is not congruent to 1 modulo 2d = {two_d}")]
    BadResidue { p: u64, two_d: u64 },
    #[error("zeta = {zeta} does not have multiplicative order exactly {two_d} modulo {p}")]
    BadZeta { p: u64, zeta: u64, two_d: u64 },
    #[error("prime {0} is too large (must be below 2^31)")]
    TooLarge(u64),
}

/// `F_p` with `p ≡ 1 (mod 2d)` together with `zeta` of order exactly `2d`.
///
/// `omega = zeta^2` is a primitive `d`-th root of unity and `mu = zeta` is a
/// `d`-th root of `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootedField {
    p: u64,
    d: u64,
    zeta: u64,
    omega: u64,
    mu: u64,
}

/// Wire form of the field header: `{"p": 7, "d": 3, "zeta": 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub p: u64,
    pub d: u64,
    pub zeta: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut i = 3;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` in `F_p^*`, or `None` for `a = 0`.
pub fn mult_order(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let mut order = p - 1;
    for q in prime_factors(p - 1) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, p) == 1 {
            order /= q;
        }
    }
    Some(order)
}

const MAX_PRIME: u64 = 1 << 31;

impl RootedField {
    /// Smallest admissible prime for `d` unless `p_override` is given; `zeta`
    /// is the smallest element of order exactly `2d`.
    pub fn new(d: u64, p_override: Option<u64>) -> Result<Self, FieldError> {
        if d == 0 {
            return Err(FieldError::BadArity(d));
        }
        let two_d = 2 * d;
        let p = match p_override {
            Some(p) => {
                if !is_prime(p) {
                    return Err(FieldError::NotPrime(p));
                }
                if p % two_d != 1 {
                    return Err(FieldError::BadResidue { p, two_d });
                }
                p
            }
            None => {
                let mut p = two_d + 1;
                while !is_prime(p) {
                    p += two_d;
                }
                p
            }
        };
        if p >= MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        let zeta = (2..p)
            .find(|&a| mult_order(a, p) == Some(two_d))
            .expect("F_p^* is cyclic and 2d divides p - 1");
        Ok(Self::assemble(p, d, zeta))
    }

    /// Rebuilds a field from an explicit header, checking every invariant.
    pub fn from_header(h: FieldHeader) -> Result<Self, FieldError> {
        if h.d == 0 {
            return Err(FieldError::BadArity(h.d));
        }
        if !is_prime(h.p) {
            return Err(FieldError::NotPrime(h.p));
        }
        if h.p >= MAX_PRIME {
            return Err(FieldError::TooLarge(h.p));
        }
        let two_d = 2 * h.d;
        if h.p % two_d != 1 {
            return Err(FieldError::BadResidue { p: h.p, two_d });
        }
        if mult_order(h.zeta, h.p) != Some(two_d) {
            return Err(FieldError::BadZeta {
                p: h.p,
                zeta: h.zeta,
                two_d,
            });
        }
        Ok(Self::assemble(h.p, h.d, h.zeta % h.p))
    }

    fn assemble(p: u64, d: u64, zeta: u64) -> Self {
        RootedField {
            p,
            d,
            zeta,
            omega: zeta * zeta % p,
            mu: zeta,
        }
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            p: self.p,
            d: self.d,
            zeta: self.zeta,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn zeta(&self) -> u64 {
        self.zeta
    }
    pub fn omega(&self) -> u64 {
        self.omega
    }
    pub fn mu(&self) -> u64 {
        self.mu
    }

    /// The `d` roots of `t^d + 1`, i.e. `omega^j * mu`.
    pub fn mu_choices(&self) -> Vec<u64> {
        (0..self.d)
            .map(|j| self.mul(self.pow(self.omega, j), self.mu))
            .collect()
    }

    pub fn elem(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }
    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.p)
    }
    /// `omega^k` for any integer `k`.
    pub fn omega_pow(&self, k: i64) -> u64 {
        self.pow(self.omega, k.rem_euclid(self.d as i64) as u64)
    }
    pub fn d_inv(&self) -> u64 {
        self.inv(self.d % self.p)
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "inverse of zero in F_{p}");
    pow_mod(a, p - 2, p)
}

/// An `r`-th root of `c` in `F_p`, if one exists.
pub fn nth_root(c: u64, r: u64, p: u64) -> Option<u64> {
    let c = c % p;
    if c == 0 {
        return Some(0);
    }
    if r == 1 {
        return Some(c);
    }
    let g = gcd(r, p - 1);
    if pow_mod(c, (p - 1) / g, p) != 1 {
        return None;
    }
    if p < 1 << 20 {
        return (1..p).find(|&x| pow_mod(x, r, p) == c);
    }
    // Large p: walk a generator's powers only over the coset of solutions.
    let gen = (2..p).find(|&a| mult_order(a, p) == Some(p - 1))?;
    let mut x = 1;
    for _ in 0..p - 1 {
        if pow_mod(x, r, p) == c {
            return Some(x);
        }
        x = x * gen % p;
    }
    None
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exhaustive order scan, independent of `mult_order`.
    fn brute_order(a: u64, p: u64) -> u64 {
        let mut x = a % p;
        let mut k = 1;
        while x != 1 {
            x = x * a % p;
            k += 1;
        }
        k
    }

    fn brute_smallest_zeta(p: u64, two_d: u64) -> u64 {
        (2..p).find(|&a| brute_order(a, p) == two_d).unwrap()
    }

    #[test]
    fn default_fields_match_exhaustive_scan() {
        let f3 = RootedField::new(3, None).unwrap();
        assert_eq!((f3.p(), f3.zeta(), f3.omega(), f3.mu()), (7, 3, 2, 3));
        assert_eq!(brute_smallest_zeta(7, 6), 3);

        let f2 = RootedField::new(2, None).unwrap();
        assert_eq!((f2.p(), f2.zeta(), f2.omega(), f2.mu()), (5, 2, 4, 2));
        assert_eq!(brute_smallest_zeta(5, 4), 2);

        let f4 = RootedField::new(4, None).unwrap();
        assert_eq!(f4.p(), 17);
        assert_eq!(f4.zeta(), brute_smallest_zeta(17, 8));
    }

    #[test]
    fn override_accepts_and_rejects() {
        let f = RootedField::new(3, Some(13)).unwrap();
        assert_eq!(f.p(), 13);
        assert_eq!(brute_order(f.zeta(), 13), 6);
        assert_eq!(RootedField::new(3, Some(15)), Err(FieldError::NotPrime(15)));
        assert_eq!(
            RootedField::new(3, Some(11)),
            Err(FieldError::BadResidue { p: 11, two_d: 6 })
        );
    }

    #[test]
    fn root_invariants_hold() {
        for d in 1..=12 {
            let f = RootedField::new(d, None).unwrap();
            let z = f.zeta();
            assert_eq!(f.pow(z, 2 * d), 1);
            assert_eq!(f.pow(z, d), f.p() - 1);
            for k in 1..2 * d {
                assert_ne!(f.pow(z, k), 1);
            }
            assert_eq!(f.omega(), f.mul(z, z));
            assert_eq!(f.pow(f.mu(), d), f.neg(1));
            assert_eq!(f.mul(d % f.p(), f.d_inv()), 1);
            for mu in f.mu_choices() {
                assert_eq!(f.pow(mu, d), f.neg(1));
            }
        }
    }

    #[test]
    fn header_roundtrip_and_validation() {
        let f = RootedField::new(3, None).unwrap();
        assert_eq!(RootedField::from_header(f.header()).unwrap(), f);
        let bad = FieldHeader { p: 7, d: 3, zeta: 2 };
        assert!(matches!(RootedField::from_header(bad), Err(FieldError::BadZeta { .. })));
    }

    #[test]
    fn nth_roots() {
        assert_eq!(nth_root(4, 2, 7).map(|x| x * x % 7), Some(4));
        assert_eq!(nth_root(3, 2, 7), None);
        assert_eq!(nth_root(6, 3, 7).map(|x| pow_mod(x, 3, 7)), Some(6));
    }
}
