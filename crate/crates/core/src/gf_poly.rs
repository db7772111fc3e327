//! Prime fields and dense univariate polynomials over them.
//!
//! Coefficients are stored low-to-high (`coeffs[i]` is the coefficient of
//! `X^i`) with no trailing zeros, so the zero polynomial is the empty vector.
//! Binary polynomials additionally have a hexadecimal codec: the coefficient
//! string is written highest degree first, left-padded to whole nibbles.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("irreducibility is undefined for constant polynomials")]
    ConstantPolynomial,
    #[error("hex codec requires p = 2, got p = {0}")]
    NonBinaryField(u64),
    #[error("invalid hex string {0:?}")]
    InvalidHex(String),
    #[error("polynomial JSON needs exactly one of \"hex\" or \"coeffs\"")]
    BadEncoding,
}

/// The field of integers modulo a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PrimeField {
    p: u64,
}

impl<'de> Deserialize<'de> for PrimeField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        PrimeField::new(p).map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, GfError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(GfError::NotPrime(p))
        }
    }

    pub fn binary() -> Self {
        PrimeField { p: 2 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.p as u128 - b as u128) % self.p as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    fn check_same(&self, other: &PrimeField) -> Result<(), GfError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(GfError::FieldMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }
}

/// Dense polynomial over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Polynomial {
    /// Builds a polynomial from low-to-high coefficients, reducing each
    /// coefficient and trimming trailing zeros.
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        trim(&mut coeffs);
        Polynomial { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Polynomial {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Polynomial::new(field, vec![1])
    }

    /// `c * X^deg`.
    pub fn monomial(field: PrimeField, deg: usize, c: u64) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c;
        Polynomial::new(field, coeffs)
    }

    /// Binary polynomial from the exponents of its nonzero terms.
    pub fn binary_from_exponents(exponents: &[usize]) -> Self {
        let deg = exponents.iter().copied().max().unwrap_or(0);
        let mut coeffs = vec![0; deg + 1];
        for &e in exponents {
            coeffs[e] ^= 1;
        }
        Polynomial::new(PrimeField::binary(), coeffs)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, GfError> {
        self.field.check_same(&other.field)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                self.field.add(a, b)
            })
            .collect();
        Ok(Polynomial::new(self.field, coeffs))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, GfError> {
        self.field.check_same(&other.field)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                self.field.sub(a, b)
            })
            .collect();
        Ok(Polynomial::new(self.field, coeffs))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, GfError> {
        self.field.check_same(&other.field)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.field));
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Polynomial::new(f, out))
    }

    /// Euclidean division: returns `(q, r)` with `self = q * divisor + r`
    /// and `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), GfError> {
        self.field.check_same(&divisor.field)?;
        let f = self.field;
        let dlen = divisor.coeffs.len();
        if dlen == 0 {
            return Err(GfError::DivisionByZero);
        }
        if self.coeffs.len() < dlen {
            return Ok((Polynomial::zero(f), self.clone()));
        }
        let lead_inv = f
            .inv(divisor.leading_coeff())
            .expect("trimmed polynomial has nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dlen + 1];
        for shift in (0..quot.len()).rev() {
            let c = f.mul(rem[shift + dlen - 1], lead_inv);
            if c == 0 {
                continue;
            }
            quot[shift] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, d));
            }
        }
        rem.truncate(dlen - 1);
        Ok((Polynomial::new(f, quot), Polynomial::new(f, rem)))
    }

    /// True when `divisor` divides `self` exactly.
    pub fn divisible_by(&self, divisor: &Polynomial) -> Result<bool, GfError> {
        Ok(self.divrem(divisor)?.1.is_zero())
    }

    /// Scales to leading coefficient 1. The zero polynomial is returned as is.
    pub fn to_monic(&self) -> Polynomial {
        match self.field.inv(self.leading_coeff()) {
            Some(inv) => Polynomial::new(
                self.field,
                self.coeffs.iter().map(|&c| self.field.mul(c, inv)).collect(),
            ),
            None => self.clone(),
        }
    }

    /// Deterministic irreducibility test by trial division against every
    /// monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(&self) -> Result<bool, GfError> {
        let deg = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(GfError::ConstantPolynomial),
        };
        for d in 1..=deg / 2 {
            for cand in monic_polynomials(self.field, d) {
                if self.divisible_by(&cand)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// MSB-first hex string of a binary polynomial. The zero polynomial
    /// encodes as `"0"`.
    pub fn to_hex(&self) -> Result<String, GfError> {
        if self.field.p != 2 {
            return Err(GfError::NonBinaryField(self.field.p));
        }
        if self.is_zero() {
            return Ok("0".to_string());
        }
        let nibbles = self.coeffs.len().div_ceil(4);
        let mut s = String::with_capacity(nibbles);
        for nib in (0..nibbles).rev() {
            let mut v = 0u32;
            for bit in (0..4).rev() {
                v = (v << 1) | self.coeffs.get(nib * 4 + bit).copied().unwrap_or(0) as u32;
            }
            s.push(char::from_digit(v, 16).unwrap().to_ascii_uppercase());
        }
        Ok(s)
    }

    pub fn from_hex(s: &str, field: PrimeField) -> Result<Polynomial, GfError> {
        if field.p != 2 {
            return Err(GfError::NonBinaryField(field.p));
        }
        if s.is_empty() {
            return Err(GfError::InvalidHex(s.to_string()));
        }
        let mut coeffs = Vec::with_capacity(s.len() * 4);
        for ch in s.chars().rev() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| GfError::InvalidHex(s.to_string()))?;
            for bit in 0..4 {
                coeffs.push(((v >> bit) & 1) as u64);
            }
        }
        Ok(Polynomial::new(field, coeffs))
    }
}

/// All monic polynomials of exactly degree `deg` over `field`.
pub fn monic_polynomials(field: PrimeField, deg: usize) -> impl Iterator<Item = Polynomial> {
    let p = field.p;
    let count = (p as u128).pow(deg as u32);
    (0..count).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push((idx % p as u128) as u64);
            idx /= p as u128;
        }
        coeffs.push(1);
        Polynomial::new(field, coeffs)
    })
}

fn trim(coeffs: &mut Vec<u64>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[F_{}]({})", self.field.p, self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("X")?,
                (1, c) => write!(f, "{c}X")?,
                (i, 1) => write!(f, "X^{i}")?,
                (i, c) => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<u64>>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = if self.field.p == 2 {
            PolynomialRepr {
                p: 2,
                hex: Some(self.to_hex().expect("binary field")),
                coeffs: None,
            }
        } else {
            PolynomialRepr {
                p: self.field.p,
                hex: None,
                coeffs: Some(self.coeffs.clone()),
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = PolynomialRepr::deserialize(d)?;
        let field = PrimeField::new(repr.p).map_err(D::Error::custom)?;
        match (repr.hex, repr.coeffs) {
            (Some(h), None) => Polynomial::from_hex(&h, field).map_err(D::Error::custom),
            (None, Some(c)) => {
                if let Some(&bad) = c.iter().find(|&&x| x >= field.p) {
                    return Err(D::Error::custom(format!(
                        "coefficient {bad} is not reduced mod {}",
                        field.p
                    )));
                }
                Ok(Polynomial::new(field, c))
            }
            _ => Err(D::Error::custom(GfError::BadEncoding)),
        }
    }
}
