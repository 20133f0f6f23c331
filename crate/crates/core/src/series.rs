//! Truncated Laurent–Puiseux series in `x = n^(-1/2)` with exact rational coefficients.
//!
//! A [`PuiseuxSeries`] stores the coefficients of `x^v, x^(v+1), ..., x^(T-1)` and is
//! known modulo `O(x^T)`. Every operation derives the truncation order its output is
//! actually justified to, so precision loss shows up in the result instead of
//! silently producing wrong coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series is zero to order O(x^{truncation}); no leading term to invert")]
    ZeroLeadingTerm { truncation: i64 },
    #[error("series has a term x^{exponent} with exponent <= 0")]
    NonPositiveValuation { exponent: i64 },
    #[error("series has a Laurent term x^{exponent}")]
    NegativeValuation { exponent: i64 },
    #[error("ramification {0} is not supported; only n^(-1/2) series are implemented")]
    UnsupportedRamification(u32),
    #[error("invalid series coefficient {0:?}")]
    InvalidCoefficient(String),
}

/// Denominator of the fractional exponents of `n`.
///
/// Only `x = n^(-1/2)` is implemented. The type exists so that callers carrying a
/// ramification from elsewhere get a checked rejection instead of a wrong result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ramification(u32);

impl Ramification {
    pub const SQUARE_ROOT: Ramification = Ramification(2);

    pub fn new(r: u32) -> Result<Self, SeriesError> {
        if r == 2 {
            Ok(Ramification(r))
        } else {
            Err(SeriesError::UnsupportedRamification(r))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    valuation: i64,
    coeffs: Vec<Rational>,
    truncation: i64,
}

impl PuiseuxSeries {
    /// Builds `sum coeffs[i] x^(valuation + i) + O(x^truncation)`.
    ///
    /// Coefficients at or beyond the truncation are dropped and missing ones are
    /// zero-filled. The result is normalized.
    pub fn new(valuation: i64, mut coeffs: Vec<Rational>, truncation: i64) -> Self {
        let len = (truncation - valuation).max(0) as usize;
        coeffs.resize(len, Rational::zero());
        let mut s = PuiseuxSeries {
            valuation: valuation.min(truncation),
            coeffs,
            truncation,
        };
        s.normalize();
        s
    }

    pub fn zero(truncation: i64) -> Self {
        PuiseuxSeries {
            valuation: truncation,
            coeffs: Vec::new(),
            truncation,
        }
    }

    pub fn one(truncation: i64) -> Self {
        Self::constant(Rational::one(), truncation)
    }

    pub fn constant(c: Rational, truncation: i64) -> Self {
        Self::monomial(c, 0, truncation)
    }

    /// `c·x^exponent + O(x^truncation)`.
    pub fn monomial(c: Rational, exponent: i64, truncation: i64) -> Self {
        if exponent >= truncation {
            return Self::zero(truncation);
        }
        Self::new(exponent, vec![c], truncation)
    }

    /// The series variable `x` itself.
    pub fn x(truncation: i64) -> Self {
        Self::monomial(Rational::one(), 1, truncation)
    }

    /// Series from integer coefficients starting at `valuation`.
    pub fn from_ints(valuation: i64, coeffs: &[i64], truncation: i64) -> Self {
        Self::new(
            valuation,
            coeffs.iter().map(|&c| rational::int(c)).collect(),
            truncation,
        )
    }

    fn normalize(&mut self) {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                self.coeffs.clear();
                self.valuation = self.truncation;
            }
            Some(0) => {}
            Some(lead) => {
                self.coeffs.drain(..lead);
                self.valuation += lead as i64;
            }
        }
    }

    pub fn ramification(&self) -> Ramification {
        Ramification::SQUARE_ROOT
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Coefficients of `x^valuation ..= x^(truncation-1)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^exponent`, or `None` when it lies beyond the truncation.
    pub fn coeff(&self, exponent: i64) -> Option<Rational> {
        if exponent >= self.truncation {
            None
        } else if exponent < self.valuation {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[(exponent - self.valuation) as usize].clone())
        }
    }

    pub(crate) fn coeff_ref(&self, exponent: i64) -> Option<&Rational> {
        if exponent < self.valuation || exponent >= self.truncation {
            None
        } else {
            Some(&self.coeffs[(exponent - self.valuation) as usize])
        }
    }

    /// Leading coefficient, if the series is nonzero to its truncation order.
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// Forget every coefficient from `x^truncation` on.
    pub fn truncate(&self, truncation: i64) -> Self {
        if truncation >= self.truncation {
            return self.clone();
        }
        let keep = (truncation - self.valuation).max(0) as usize;
        Self::new(
            self.valuation,
            self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
            truncation,
        )
    }

    /// Multiplication by `x^e`.
    pub fn shift(&self, e: i64) -> Self {
        PuiseuxSeries {
            valuation: self.valuation + e,
            coeffs: self.coeffs.clone(),
            truncation: self.truncation + e,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.truncation);
        }
        PuiseuxSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            truncation: self.truncation,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let truncation = self.truncation.min(other.truncation);
        let valuation = self.valuation.min(other.valuation).min(truncation);
        let coeffs = (valuation..truncation)
            .map(|e| match (self.coeff_ref(e), other.coeff_ref(e)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Rational::zero(),
            })
            .collect();
        Self::new(valuation, coeffs, truncation)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
            truncation: self.truncation,
        }
    }

    /// Cauchy product; truncation is `min(T1 + v2, T2 + v1)`.
    pub fn mul(&self, other: &Self) -> Self {
        let valuation = self.valuation + other.valuation;
        let truncation =
            (self.truncation + other.valuation).min(other.truncation + self.valuation);
        let len = (truncation - valuation).max(0) as usize;
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = (0..len)
            .map(|i| {
                let mut acc = Rational::zero();
                for p in 0..=i {
                    let (x, y) = (&a[p], &b[i - p]);
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                acc
            })
            .collect();
        Self::new(valuation, coeffs, truncation.max(valuation))
    }

    /// Multiplicative inverse; the result has valuation `-v` and the same number of
    /// known coefficients as the input.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let lead = self.leading().ok_or(SeriesError::ZeroLeadingTerm {
            truncation: self.truncation,
        })?;
        let inv_lead = lead.recip();
        let len = self.coeffs.len();
        let mut r: Vec<Rational> = Vec::with_capacity(len);
        r.push(inv_lead.clone());
        for i in 1..len {
            let mut acc = Rational::zero();
            for m in 1..=i {
                let s = &self.coeffs[m];
                if !s.is_zero() {
                    acc += s * &r[i - m];
                }
            }
            r.push(-acc * &inv_lead);
        }
        Ok(Self::new(-self.valuation, r, len as i64 - self.valuation))
    }

    /// Dense coefficients of `x^0 .. x^(truncation-1)` for a series with valuation >= 1.
    fn dense_from_one(&self) -> Vec<Rational> {
        let t = self.truncation.max(0) as usize;
        let mut out = vec![Rational::zero(); t];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.valuation as usize) + i] = c.clone();
        }
        out
    }

    /// `exp(s)` for a series without constant or Laurent part.
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        if !self.is_zero() && self.valuation < 1 {
            return Err(SeriesError::NonPositiveValuation {
                exponent: self.valuation,
            });
        }
        if self.truncation <= 0 {
            return Ok(Self::zero(self.truncation));
        }
        let s = self.dense_from_one();
        let t = s.len();
        // n f_n = sum_{k=1..n} k s_k f_{n-k}
        let weighted: Vec<Rational> = s
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        let mut f: Vec<Rational> = Vec::with_capacity(t);
        f.push(Rational::one());
        for n in 1..t {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !weighted[k].is_zero() {
                    acc += &weighted[k] * &f[n - k];
                }
            }
            f.push(acc / BigInt::from(n));
        }
        Ok(Self::new(0, f, self.truncation))
    }

    /// `log(1 + s)` for a series without constant or Laurent part.
    pub fn log1p_series(&self) -> Result<Self, SeriesError> {
        if !self.is_zero() && self.valuation < 1 {
            return Err(SeriesError::NonPositiveValuation {
                exponent: self.valuation,
            });
        }
        if self.truncation <= 0 {
            return Ok(Self::zero(self.truncation));
        }
        let s = self.dense_from_one();
        let t = s.len();
        // n L_n = n s_n - sum_{k=1..n-1} k L_k s_{n-k}
        let mut l: Vec<Rational> = vec![Rational::zero(); t];
        let mut weighted: Vec<Rational> = vec![Rational::zero(); t];
        for n in 1..t {
            let mut acc = &s[n] * BigInt::from(n);
            for k in 1..n {
                if !weighted[k].is_zero() && !s[n - k].is_zero() {
                    acc -= &weighted[k] * &s[n - k];
                }
            }
            l[n] = acc / BigInt::from(n);
            weighted[n] = &l[n] * BigInt::from(n);
        }
        Ok(Self::new(0, l, self.truncation))
    }

    /// Re-expands `s(n)` as a series for `s(n - j)`, i.e. substitutes
    /// `x -> x (1 - j x^2)^(-1/2)`.
    pub fn compose_shift(&self, j: u32) -> Result<Self, SeriesError> {
        if self.is_zero() || j == 0 {
            return Ok(self.clone());
        }
        if self.valuation < 0 {
            return Err(SeriesError::NegativeValuation {
                exponent: self.valuation,
            });
        }
        let t = self.truncation;
        let u = shifted_variable(j, t);
        let mut power = Self::one(t);
        for _ in 0..self.valuation {
            power = power.mul(&u);
        }
        let mut acc = Self::zero(t);
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        for (i, c) in self.coeffs[..=last].iter().enumerate() {
            if i > 0 {
                power = power.mul(&u);
            }
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
        }
        Ok(acc)
    }
}

/// `(n - j)^(-1/2)` in terms of `x = n^(-1/2)`: `x * sum_k C(2k, k) (j x^2 / 4)^k`.
pub fn shifted_variable(j: u32, truncation: i64) -> PuiseuxSeries {
    if truncation <= 1 {
        return PuiseuxSeries::zero(truncation);
    }
    let len = (truncation - 1) as usize;
    let mut coeffs = vec![Rational::zero(); len];
    let mut w = Rational::one();
    let j = BigInt::from(j);
    for (m, slot) in coeffs.iter_mut().enumerate().step_by(2) {
        if m > 0 {
            let k = (m / 2) as i64;
            w *= Rational::new(BigInt::from(2 * k - 1) * &j, BigInt::from(2 * k));
        }
        *slot = w.clone();
    }
    PuiseuxSeries::new(1, coeffs, truncation)
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.valuation + i as i64;
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}", rational::to_string(c))?;
            match e {
                0 => {}
                1 => f.write_str("*x")?,
                _ => write!(f, "*x^{e}")?,
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "O(x^{})", self.truncation)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&PuiseuxSeries> for &PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $method(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
                PuiseuxSeries::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries::neg(self)
    }
}

/// Wire form: `{"valuation": v, "truncation": T, "coeffs": ["p/q", ...]}`.
#[derive(Serialize, Deserialize)]
struct SeriesJson {
    valuation: i64,
    truncation: i64,
    #[serde(with = "crate::rational::serde_str_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for PuiseuxSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            valuation: self.valuation,
            truncation: self.truncation,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PuiseuxSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        if j.coeffs.len() as i64 > (j.truncation - j.valuation).max(0) {
            return Err(serde::de::Error::custom(
                "more coefficients than the truncation order allows",
            ));
        }
        Ok(PuiseuxSeries::new(j.valuation, j.coeffs, j.truncation))
    }
}
