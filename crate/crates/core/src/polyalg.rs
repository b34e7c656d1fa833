//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Index `i` of the coefficient vector holds the coefficient on `x^i`. The
//! vector is kept trimmed: its last entry is nonzero unless the polynomial is
//! the constant zero, which is stored as `[0]`.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    /// Builds a polynomial from low-to-high coefficients, trimming trailing zeros.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(coeffs.into_iter().map(Into::into).collect())
    }

    pub fn zero() -> Self {
        Polynomial {
            coeffs: vec![BigInt::zero()],
        }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs([0, 1])
    }

    /// `(1+x)^t`.
    pub fn binomial_power(t: usize) -> Self {
        Polynomial {
            coeffs: binomial_row(t),
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(BigInt::zero());
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient on `x^i`; zero outside the stored range, including negative `i`.
    pub fn coeff(&self, i: isize) -> BigInt {
        if i < 0 {
            return BigInt::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_default()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// True when every coefficient is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// Coefficient sequence read backwards: `x^d p(1/x)`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Multiplies by `(1+x)^t`, one Pascal step (`c_i += c_{i-1}`) at a time.
    pub fn mul_binomial_power(&self, t: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reserve(t);
        for _ in 0..t {
            coeffs.push(BigInt::zero());
            for i in (1..coeffs.len()).rev() {
                let (lo, hi) = coeffs.split_at_mut(i);
                hi[0] += &lo[i - 1];
            }
        }
        Polynomial { coeffs }
    }

    /// Divides by `(1+x)` if it divides exactly.
    fn div_one_plus_x(&self) -> Option<Self> {
        let d = self.degree();
        if d == 0 {
            return None;
        }
        // Synthetic division at the root -1, from the leading coefficient down.
        let mut quotient = vec![BigInt::zero(); d];
        let mut carry = self.coeffs[d].clone();
        for i in (0..d).rev() {
            let next = &self.coeffs[i] - &carry;
            quotient[i] = carry;
            carry = next;
        }
        carry.is_zero().then_some(Polynomial { coeffs: quotient })
    }

    /// Returns the largest `k` with `(1+x)^k | p` and the cofactor `p / (1+x)^k`.
    pub fn remove_binomial_factor(&self) -> Result<(usize, Polynomial)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut k = 0;
        let mut q = self.clone();
        while let Some(next) = q.div_one_plus_x() {
            q = next;
            k += 1;
        }
        Ok((k, q))
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate_at(&self, x0: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x0 + c)
    }

    /// Sum of coefficients, i.e. the value at 1.
    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

/// Row `t` of Pascal's triangle, built by the additive recurrence.
pub fn binomial_row(t: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..t {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        row = next;
    }
    row
}

/// `C(t, i)` read from a precomputed row; zero outside `0..=t`.
pub fn binomial_at(row: &[BigInt], i: isize) -> BigInt {
    if i < 0 {
        return BigInt::zero();
    }
    row.get(i as usize).cloned().unwrap_or_default()
}

impl Default for Polynomial {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Polynomial::new(coeffs)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n as isize).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl<'a> Mul<&'a Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    /// Comma-separated decimal coefficients, lowest power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        s.split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<BigInt>()
                    .map_err(|_| Error::ParseCoefficient(tok.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Polynomial::new)
    }
}

// JSON form: an array of decimal strings, so no consumer truncates to 64 bits.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CoeffsVisitor;

        impl<'de> Visitor<'de> for CoeffsVisitor {
            type Value = Polynomial;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of decimal coefficient strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Polynomial, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(entry) = seq.next_element::<serde_json::Value>()? {
                    let c = match &entry {
                        serde_json::Value::String(s) => s.parse::<BigInt>().ok(),
                        serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().ok(),
                        _ => None,
                    };
                    coeffs.push(c.ok_or_else(|| de::Error::custom(format!("bad coefficient {entry}")))?);
                }
                Ok(Polynomial::new(coeffs))
            }
        }

        deserializer.deserialize_seq(CoeffsVisitor)
    }
}

/// Serde adapter for a single `BigInt` as a decimal string.
pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p(&[1, 1]) + &p(&[0, 1]), p(&[1, 2]));
        let cancelled = &p(&[1, 4, 3, 1]) + &p(&[0, 0, 0, -1]);
        assert_eq!(cancelled, p(&[1, 4, 3]));
        assert_eq!(cancelled.degree(), 2);
        assert_eq!(&p(&[1, 3, 3, 1]) + &p(&[0, 1]), p(&[1, 4, 3, 1]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1]), p(&[1, 2, 1]));
        assert_eq!(
            &p(&[1, 6, 7, 4, 1]) * &p(&[1, 3, 3, 1]),
            p(&[1, 9, 28, 44, 40, 22, 7, 1])
        );
        assert_eq!(&p(&[2]) * &p(&[0, 1]), p(&[0, 2]));
        assert!((&p(&[0]) * &p(&[1, 2])).is_zero());
    }

    #[test]
    fn binomial_power_examples() {
        assert_eq!(p(&[1]).mul_binomial_power(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[1, 6, 7, 4, 1]).mul_binomial_power(2), p(&[1, 8, 20, 24, 16, 6, 1]));
        assert_eq!(p(&[1, 3, 2]).mul_binomial_power(1), p(&[1, 4, 5, 2]));
        assert_eq!(p(&[5, 7]).mul_binomial_power(0), p(&[5, 7]));
    }

    #[test]
    fn binomial_row_matches_small_rows() {
        assert_eq!(binomial_row(0), vec![BigInt::from(1)]);
        assert_eq!(Polynomial::binomial_power(4), p(&[1, 4, 6, 4, 1]));
        // C(32,16) already overflows i32.
        assert_eq!(binomial_row(32)[16], BigInt::from(601_080_390_i64));
    }

    #[test]
    fn remove_binomial_factor_examples() {
        assert_eq!(p(&[1, 2, 1]).remove_binomial_factor().unwrap(), (2, p(&[1])));
        assert_eq!(
            p(&[1, 9, 28, 44, 40, 22, 7, 1]).remove_binomial_factor().unwrap(),
            (3, p(&[1, 6, 7, 4, 1]))
        );
        assert_eq!(
            p(&[1, 4, 3, 1]).remove_binomial_factor().unwrap(),
            (0, p(&[1, 4, 3, 1]))
        );
        assert_eq!(p(&[7]).remove_binomial_factor().unwrap(), (0, p(&[7])));
    }

    #[test]
    fn remove_binomial_factor_rejects_zero() {
        assert!(matches!(
            Polynomial::zero().remove_binomial_factor(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn evaluate_examples() {
        let p2 = p(&[1, 9, 28, 44, 40, 22, 7, 1]);
        assert_eq!(p2.evaluate_at(&BigInt::from(1)), BigInt::from(152));
        assert_eq!(p2.evaluate_at(&BigInt::from(0)), BigInt::from(1));
        assert_eq!(p(&[1, 4, 3, 1]).evaluate_at(&BigInt::from(-1)), BigInt::from(-1));
    }

    #[test]
    fn trims_and_parses() {
        assert_eq!(p(&[0, 0, 0]), Polynomial::zero());
        assert_eq!("1, 6,7,4,1".parse::<Polynomial>().unwrap(), p(&[1, 6, 7, 4, 1]));
        assert_eq!("[1,2]".parse::<Polynomial>().unwrap(), p(&[1, 2]));
        assert!("1,a".parse::<Polynomial>().is_err());
        assert_eq!(p(&[1, 2, 3]).reversed(), p(&[3, 2, 1]));
        assert_eq!(p(&[1, 2]).shift(2), p(&[0, 0, 1, 2]));
    }

    #[test]
    fn json_uses_decimal_strings() {
        let big = Polynomial::binomial_power(80);
        let json = serde_json::to_string(&big).unwrap();
        assert!(json.starts_with(r#"["1","80","3160""#));
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, big);
        let loose: Polynomial = serde_json::from_str(r#"[1,"2",3]"#).unwrap();
        assert_eq!(loose, p(&[1, 2, 3]));
    }
}
