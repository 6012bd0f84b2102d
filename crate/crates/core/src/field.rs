//! Ground fields for exact arithmetic: the rationals and prime fields F_p.
//!
//! Every numeric computation in this crate runs over one of these fields.
//! Field elements never pass through floating point; rank and membership
//! questions are therefore exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

/// A field given as a value ("field object"). Elements do not know which
/// field they belong to; all arithmetic goes through the field value, which
/// lets F_p carry its modulus at runtime.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Ord + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, String>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers with arbitrary-precision representation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational, String> {
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim())
                    .map_err(|_| format!("invalid rational numerator `{num}`"))?;
                let d = BigInt::from_str(den.trim())
                    .map_err(|_| format!("invalid rational denominator `{den}`"))?;
                if d.is_zero() {
                    return Err(format!("zero denominator in `{s}`"));
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n =
                    BigInt::from_str(s).map_err(|_| format!("invalid rational number `{s}`"))?;
                Ok(BigRational::from_integer(n))
            }
        }
    }
    fn format_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// A prime field F_p with runtime modulus. Elements are canonical residues
/// in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField, String> {
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i128(&self, n: i128) -> u64 {
        let p = self.p as i128;
        (n.rem_euclid(p)) as u64
    }

    fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let p = self.p as u128;
        let mut acc: u128 = 1;
        let mut b = base as u128 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i128(n as i128)
    }
    fn parse_elem(&self, s: &str) -> Result<u64, String> {
        let s = s.trim();
        // Accept a/b as a shorthand for a * b^-1 so fixture files can be
        // shared between ground fields.
        if let Some((num, den)) = s.split_once('/') {
            let a = self.parse_elem(num)?;
            let b = self.parse_elem(den)?;
            return self
                .div(&a, &b)
                .ok_or_else(|| format!("division by zero in `{s}`"));
        }
        let n = i128::from_str(s).map_err(|_| format!("invalid integer `{s}`"))?;
        Ok(self.reduce_i128(n))
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Runtime description of a ground field, as selected on the command line.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroundField {
    Rationals,
    Prime(u64),
}

impl FromStr for GroundField {
    type Err = String;

    fn from_str(s: &str) -> Result<GroundField, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(GroundField::Rationals);
        }
        if let Some(rest) = s.strip_prefix('f').or_else(|| s.strip_prefix('F')) {
            let p: u64 = rest
                .parse()
                .map_err(|_| format!("invalid field spec `{s}`: expected q or f<prime>"))?;
            if !is_prime(p) {
                return Err(format!("invalid field spec `{s}`: {p} is not prime"));
            }
            return Ok(GroundField::Prime(p));
        }
        Err(format!("invalid field spec `{s}`: expected q or f<prime>"))
    }
}

impl fmt::Display for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundField::Rationals => write!(f, "q"),
            GroundField::Prime(p) => write!(f, "f{p}"),
        }
    }
}
