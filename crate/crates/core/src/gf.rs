//! Arithmetic in finite fields `F_{p^h}` of small order.
//!
//! A field is built once and then passed around as a context object; elements
//! are plain indices into its enumeration. The element with coefficient
//! vector `(c_0, ..., c_{h-1})`, least degree first, has index
//! `c_0 + c_1 p + ... + c_{h-1} p^{h-1}`, so the enumeration order of the
//! field is the counting order of these indices. Index `0` is the zero
//! element and index `1` is the multiplicative identity.
//!
//! The reduction modulus is chosen deterministically: among all irreducible
//! monic polynomials of degree `h` over `F_p`, the one whose non-leading
//! coefficient vector has the smallest index in the same encoding. For `F_4`
//! this is `x^2 + x + 1`, for `F_8` it is `x^3 + x + 1`, for `F_9` it is
//! `x^2 + 1`.
//!
//! Multiplication, inversion, powers and Frobenius maps go through discrete
//! logarithm tables with respect to a fixed primitive element, so they are
//! constant time per call after construction. Addition is coefficient-wise
//! and uses a plain XOR when `p = 2`. Field orders are capped at `2^20`;
//! construction of the largest fields takes a moment because the log table
//! walks the whole multiplicative group.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest admissible field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// A field element, stored as its index in the field enumeration.
///
/// Elements do not know which field they belong to; all arithmetic goes
/// through a [`Field`]. Two elements compare equal exactly when their
/// indices agree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The enumeration index of the element.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field order {0} exceeds the cap of 2^20")]
    TooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("coefficient {coefficient} is out of range for characteristic {p}")]
    CoefficientRange { coefficient: u32, p: u32 },
    #[error("element index {index} is out of range for a field of order {q}")]
    IndexRange { index: u32, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("field of order {0} has no index-two subfield")]
    NoQuadraticSubfield(u32),
}

/// A finite field `F_{p^h}`, `p^h <= 2^20`.
pub struct Field {
    p: u32,
    h: u32,
    q: u32,
    /// Monic reduction modulus, coefficients least degree first, length `h + 1`.
    modulus: Vec<u32>,
    /// `exp[i]` is `g^i` for a fixed primitive element `g`; length `2(q-1)`
    /// so that sums of two logarithms never need an explicit reduction.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(q = {}^{})", self.p, self.h)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h
    }
}

impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient vector (least degree first, length `h`) of the index `c`.
fn digits(mut c: u32, p: u32, h: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(h as usize);
    for _ in 0..h {
        out.push(c % p);
        c /= p;
    }
    out
}

/// Polynomial remainder of `a` modulo `b` over `F_p`, in place on a copy.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let lead_inv = mod_inverse(b[db], p);
    loop {
        let dr = match r.iter().rposition(|&c| c != 0) {
            Some(d) if d >= db => d,
            _ => break,
        };
        let factor = r[dr] * lead_inv % p;
        let shift = dr - db;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
    }
    r
}

/// Inverse of `a` modulo the prime `p`, for `a != 0`.
fn mod_inverse(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Product of two coefficient vectors reduced by `modulus`, over `F_p`.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    let mut r = poly_rem(&prod, modulus, p);
    r.truncate(modulus.len() - 1);
    r.resize(modulus.len() - 1, 0);
    r
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    let mut idx = 0u32;
    for &c in coeffs.iter().rev() {
        idx = idx * p + c;
    }
    idx
}

/// True when `f` (monic, degree `h >= 1`) has no monic divisor of degree
/// between 1 and `h / 2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let h = f.len() - 1;
    for d in 1..=(h / 2) {
        let count = (p as u64).pow(d as u32);
        for c in 0..count {
            let mut divisor = digits(c as u32, p, d as u32);
            divisor.push(1);
            let r = poly_rem(f, &divisor, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Builds `F_{p^h}` with the canonical modulus and log tables.
    pub fn new(p: u32, h: u32) -> Result<Arc<Field>, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if h == 0 {
            return Err(GfError::DegreeZero);
        }
        let q64 = (p as u64).checked_pow(h).ok_or(GfError::TooLarge(u64::MAX))?;
        if q64 > MAX_FIELD_ORDER {
            return Err(GfError::TooLarge(q64));
        }
        let q = q64 as u32;

        let modulus = if h == 1 {
            // Degree one needs no reduction; the modulus is only recorded.
            vec![0, 1]
        } else {
            let mut found = None;
            for c in 0..q {
                let mut f = digits(c, p, h);
                f.push(1);
                if is_irreducible(&f, p) {
                    found = Some(f);
                    break;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        // Find a primitive element by order testing against the prime
        // factors of q - 1, then fill exp and log by walking its powers.
        let group = (q - 1) as u64;
        let factors = prime_factors(group);
        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![0u32; q as usize];
        let mut generator = None;
        'candidates: for g in 2..q.max(3) {
            if q == 2 {
                generator = Some(1);
                break;
            }
            let g_poly = digits(g, p, h);
            for &r in &factors {
                let e = group / r;
                if poly_pow_index(&g_poly, e, &modulus, p) == 1 {
                    continue 'candidates;
                }
            }
            generator = Some(g);
            break;
        }
        let g = generator.expect("the multiplicative group is cyclic");

        let g_poly = digits(g, p, h);
        let mut acc = vec![0u32; h as usize];
        acc[0] = 1;
        for i in 0..group as usize {
            let idx = encode(&acc, p);
            exp[i] = idx;
            exp[i + group as usize] = idx;
            log[idx as usize] = i as u32;
            acc = poly_mul_mod(&acc, &g_poly, &modulus, p);
        }
        debug_assert_eq!(encode(&acc, p), 1, "the generator has order q - 1");

        Ok(Arc::new(Field { p, h, q, modulus, exp, log }))
    }

    /// Builds the field of order `q`, factoring `q` as a prime power.
    pub fn from_order(q: u64) -> Result<Arc<Field>, GfError> {
        if q > MAX_FIELD_ORDER {
            return Err(GfError::TooLarge(q));
        }
        if q < 2 {
            return Err(GfError::NotPrimePower(q));
        }
        let mut p = 2u64;
        while p * p <= q {
            if q % p == 0 {
                let mut h = 0u32;
                let mut rest = q;
                while rest % p == 0 {
                    rest /= p;
                    h += 1;
                }
                if rest != 1 {
                    return Err(GfError::NotPrimePower(q));
                }
                return Field::new(p as u32, h);
            }
            p += 1;
        }
        // q itself is prime.
        Field::new(q as u32, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// The order `p^h` of the field.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Reduction modulus, coefficients least degree first, monic of degree `h`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// The element with the given index, range checked.
    pub fn element(&self, index: u32) -> Result<Fe, GfError> {
        if index < self.q {
            Ok(Fe(index))
        } else {
            Err(GfError::IndexRange { index, q: self.q })
        }
    }

    /// The element with coefficient vector `coeffs`, least degree first.
    /// Missing high coefficients are taken as zero.
    pub fn element_from_coeffs(&self, coeffs: &[u32]) -> Result<Fe, GfError> {
        if coeffs.len() > self.h as usize {
            return Err(GfError::CoefficientRange {
                coefficient: coeffs[self.h as usize],
                p: self.p,
            });
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(GfError::CoefficientRange { coefficient: c, p: self.p });
            }
            idx = idx * self.p + c;
        }
        Ok(Fe(idx))
    }

    /// Coefficient vector of `a`, least degree first, length `h`.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.0, self.p, self.h)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let mut result = 0u32;
        let mut scale = 1u32;
        let (mut x, mut y) = (a.0, b.0);
        while x > 0 || y > 0 {
            result += (x % self.p + y % self.p) % self.p * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        Fe(result)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let mut result = 0u32;
        let mut scale = 1u32;
        let mut x = a.0;
        while x > 0 {
            result += (self.p - x % self.p) % self.p * scale;
            x /= self.p;
            scale *= self.p;
        }
        Fe(result)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Fe(self.exp[i])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        let group = (self.q - 1) as usize;
        Ok(Fe(self.exp[group - self.log[a.0 as usize] as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a` raised to the integer power `e`, with `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        let group = (self.q - 1) as u64;
        let i = (self.log[a.0 as usize] as u64 as u128 * (e % group) as u128
            % group as u128) as usize;
        Fe(self.exp[i])
    }

    /// The Frobenius power `a^(p^e)`.
    pub fn frobenius(&self, a: Fe, e: u32) -> Fe {
        if a.0 == 0 {
            return Fe(0);
        }
        let group = (self.q - 1) as u64;
        let mut scale = 1u64;
        for _ in 0..(e % self.h) {
            scale = scale * self.p as u64 % group;
        }
        let i = (self.log[a.0 as usize] as u64 * scale % group) as usize;
        Fe(self.exp[i])
    }

    /// Conjugation over the index-two subfield: `a^(p^(h/2))`.
    /// Requires even extension degree.
    pub fn conj(&self, a: Fe) -> Result<Fe, GfError> {
        if self.h % 2 != 0 {
            return Err(GfError::NoQuadraticSubfield(self.q));
        }
        Ok(self.frobenius(a, self.h / 2))
    }

    /// Norm onto the index-two subfield: `a * conj(a) = a^(q0 + 1)` where
    /// `q0^2 = q`. The result is returned as an element of this field; it is
    /// always fixed by conjugation.
    pub fn relative_norm(&self, a: Fe) -> Result<Fe, GfError> {
        let c = self.conj(a)?;
        let n = self.mul(a, c);
        debug_assert_eq!(self.conj(n).unwrap(), n);
        Ok(n)
    }

    /// The order of the index-two subfield, `sqrt(q)`.
    pub fn subfield_order(&self) -> Result<u32, GfError> {
        if self.h % 2 != 0 {
            return Err(GfError::NoQuadraticSubfield(self.q));
        }
        Ok(self.p.pow(self.h / 2))
    }

    /// Human-readable modulus, highest degree first, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (deg, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && deg > 0 { String::new() } else { c.to_string() };
            let var = match deg {
                0 => String::new(),
                1 => "x".to_string(),
                d => format!("x^{}", d),
            };
            terms.push(format!("{}{}", coeff, var));
        }
        terms.join(" + ")
    }
}

/// `base^e` in the field defined by `modulus`, returning the element index.
fn poly_pow_index(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> u32 {
    let h = modulus.len() - 1;
    let mut result = vec![0u32; h];
    result[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    encode(&result, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_tables() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // With x the class of the variable: x * x = x + 1, x * (x + 1) = 1.
        assert_eq!(f.mul(Fe(2), Fe(2)), Fe(3));
        assert_eq!(f.mul(Fe(2), Fe(3)), Fe(1));
        assert_eq!(f.add(Fe(2), Fe(3)), Fe(1));
        assert_eq!(f.inv(Fe(2)).unwrap(), Fe(3));
        assert_eq!(f.inv(Fe(3)).unwrap(), Fe(2));
        assert_eq!(f.frobenius(Fe(2), 1), Fe(3));
        assert_eq!(f.conj(Fe(2)).unwrap(), Fe(3));
        assert_eq!(f.relative_norm(Fe(2)).unwrap(), Fe(1));
        assert_eq!(f.pow(Fe(2), 3), Fe(1));
    }

    #[test]
    fn f8_modulus() {
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        assert_eq!(f.modulus_string(), "x^3 + x + 1");
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe(1));
        }
    }

    #[test]
    fn f9_arithmetic() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x has index 3 and x^2 = -1 = 2.
        assert_eq!(f.mul(Fe(3), Fe(3)), Fe(2));
        assert_eq!(f.conj(Fe(3)).unwrap(), Fe(6));
        assert_eq!(f.relative_norm(Fe(3)).unwrap(), Fe(1));
        assert_eq!(f.neg(Fe(3)), Fe(6));
        assert_eq!(f.coeffs(Fe(5)), vec![2, 1]);
        assert_eq!(f.element_from_coeffs(&[2, 1]).unwrap(), Fe(5));
    }

    #[test]
    fn field_axioms_exhaustive_f9() {
        let f = Field::new(3, 2).unwrap();
        let q = f.q();
        for a in 0..q {
            for b in 0..q {
                let (a, b) = (Fe(a), Fe(b));
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    let c = Fe(c);
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for f in [Field::new(2, 3).unwrap(), Field::new(3, 2).unwrap()] {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(
                        f.frobenius(f.add(a, b), 1),
                        f.add(f.frobenius(a, 1), f.frobenius(b, 1))
                    );
                }
                assert_eq!(f.frobenius(a, f.h()), a);
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_f16() {
        let f = Field::new(2, 4).unwrap();
        for a in f.elements() {
            let n = f.relative_norm(a).unwrap();
            assert_eq!(f.conj(n).unwrap(), n);
            for b in f.elements() {
                assert_eq!(
                    f.relative_norm(f.mul(a, b)).unwrap(),
                    f.mul(
                        f.relative_norm(a).unwrap(),
                        f.relative_norm(b).unwrap()
                    )
                );
            }
        }
    }

    #[test]
    fn from_order_factors_prime_powers() {
        let f = Field::from_order(9).unwrap();
        assert_eq!((f.p(), f.h()), (3, 2));
        let f = Field::from_order(1024).unwrap();
        assert_eq!((f.p(), f.h()), (2, 10));
        assert!(matches!(Field::from_order(12), Err(GfError::NotPrimePower(12))));
        assert!(matches!(Field::from_order(1), Err(GfError::NotPrimePower(1))));
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(matches!(Field::new(2, 21), Err(GfError::TooLarge(_))));
        assert!(Field::new(2, 20).is_ok());
    }

    #[test]
    fn large_field_smoke() {
        let f = Field::new(2, 16).unwrap();
        for idx in [1u32, 2, 12_345, 65_535] {
            let a = Fe(idx);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe(1));
            assert_eq!(f.pow(a, (f.q() - 1) as u64), Fe(1));
        }
    }

    #[test]
    fn prime_field_has_modular_arithmetic() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.add(Fe(5), Fe(4)), Fe(2));
        assert_eq!(f.mul(Fe(5), Fe(4)), Fe(6));
        assert_eq!(f.inv(Fe(3)).unwrap(), Fe(5));
        assert_eq!(f.neg(Fe(2)), Fe(5));
        assert!(f.conj(Fe(2)).is_err());
    }

    #[test]
    fn zero_element_edge_cases() {
        let f = Field::new(2, 2).unwrap();
        assert!(matches!(f.inv(Fe(0)), Err(GfError::ZeroInverse)));
        assert_eq!(f.pow(Fe(0), 0), Fe(1));
        assert_eq!(f.pow(Fe(0), 5), Fe(0));
        assert_eq!(f.frobenius(Fe(0), 1), Fe(0));
    }
}
