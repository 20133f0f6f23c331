//! Recurrences, exponential frames and expansions, with their JSON wire forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("a recurrence needs at least two coefficient polynomials")]
    TooShort,
    #[error("leading polynomial p_0 is identically zero")]
    ZeroLeading,
    #[error("trailing polynomial p_{0} is identically zero")]
    ZeroTrailing(usize),
    #[error("declared order {declared} but {given} coefficient polynomials given")]
    OrderMismatch { declared: usize, given: usize },
    #[error("need {needed} initial values, got {given}")]
    InitialValues { needed: usize, given: usize },
    #[error("p_0({n}) = 0, cannot solve for t_{n}")]
    SingularStep { n: usize },
    #[error("t_{n} is not an integer")]
    NonIntegralTerm { n: usize },
    #[error("expansion declares K = {declared} but lists {given} coefficients")]
    ExpansionLength { declared: usize, given: usize },
}

/// Integer polynomial in `n`, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

/// `sum_{j=0}^{d} p_j(n) t_(n-j) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    coeffs: Vec<IntPoly>,
}

impl Recurrence {
    pub fn new(coeffs: Vec<IntPoly>) -> Result<Self, RecurrenceError> {
        if coeffs.len() < 2 {
            return Err(RecurrenceError::TooShort);
        }
        if coeffs[0].is_zero() {
            return Err(RecurrenceError::ZeroLeading);
        }
        let d = coeffs.len() - 1;
        if coeffs[d].is_zero() {
            return Err(RecurrenceError::ZeroTrailing(d));
        }
        Ok(Recurrence { coeffs })
    }

    pub fn from_i64(coeffs: &[&[i64]]) -> Result<Self, RecurrenceError> {
        Self::new(coeffs.iter().map(|c| IntPoly::from_i64(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[IntPoly] {
        &self.coeffs
    }

    /// Every `p_j` multiplied by `q`.
    pub fn scaled(&self, q: &IntPoly) -> Result<Self, RecurrenceError> {
        Self::new(self.coeffs.iter().map(|p| p.mul(q)).collect())
    }

    /// Unrolls the recurrence from `initial = [t_0, ..., t_(d-1)]` through `t_N`.
    ///
    /// Fails if some `p_0(n)` vanishes or does not divide the right-hand side.
    pub fn unroll(&self, initial: &[BigInt], n_max: usize) -> Result<Vec<BigInt>, RecurrenceError> {
        let d = self.order();
        if initial.len() != d {
            return Err(RecurrenceError::InitialValues {
                needed: d,
                given: initial.len(),
            });
        }
        let mut t: Vec<BigInt> = initial.iter().take(n_max + 1).cloned().collect();
        for n in d..=n_max {
            let nb = BigInt::from(n);
            let lead = self.coeffs[0].eval(&nb);
            if lead.is_zero() {
                return Err(RecurrenceError::SingularStep { n });
            }
            let rhs: BigInt = (1..=d)
                .filter(|&j| !self.coeffs[j].is_zero())
                .map(|j| self.coeffs[j].eval(&nb) * &t[n - j])
                .sum();
            let (q, r) = (-rhs).div_rem(&lead);
            if !r.is_zero() {
                return Err(RecurrenceError::NonIntegralTerm { n });
            }
            t.push(q);
        }
        Ok(t)
    }
}

/// `F(n) = exp(beta (n ln n - n) + c sqrt(n) + alpha ln n + kappa)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "rational::serde_str")]
    pub kappa: Rational,
}

impl Frame {
    pub fn new(beta: Rational, c: Rational, alpha: Rational, kappa: Rational) -> Self {
        Frame {
            beta,
            c,
            alpha,
            kappa,
        }
    }

    /// `2 beta j` when it is an integer, i.e. when `F(n-j)/F(n)` is a series in `x`.
    pub fn ratio_exponent(&self, j: usize) -> Option<i64> {
        let e = &self.beta * BigInt::from(2 * j);
        if e.is_integer() {
            e.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn with_kappa(&self, kappa: Rational) -> Self {
        Frame {
            kappa,
            ..self.clone()
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "beta = {}, c = {}, alpha = {}, kappa = {}",
            rational::to_string(&self.beta),
            rational::to_string(&self.c),
            rational::to_string(&self.alpha),
            rational::to_string(&self.kappa)
        )
    }
}

/// A frame together with `a_1 ..= a_K` of `1 + sum a_k n^(-k/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub frame: Frame,
    a: Vec<Rational>,
}

impl Expansion {
    pub fn new(frame: Frame, a: Vec<Rational>) -> Self {
        Expansion { frame, a }
    }

    #[allow(non_snake_case)]
    pub fn K(&self) -> usize {
        self.a.len()
    }

    /// `a_1 ..= a_K`; index 0 holds `a_1`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.a
    }

    /// `a_k`, with `a_0 = 1`.
    pub fn a(&self, k: usize) -> Option<&Rational> {
        if k == 0 {
            None
        } else {
            self.a.get(k - 1)
        }
    }

    pub fn truncated(&self, k: usize) -> Expansion {
        Expansion {
            frame: self.frame.clone(),
            a: self.a[..k.min(self.a.len())].to_vec(),
        }
    }

    /// `1 + sum_{k<=K} a_k x^k` as a series known modulo `O(x^truncation)`.
    pub fn series(&self, truncation: i64) -> crate::series::PuiseuxSeries {
        let mut c = Vec::with_capacity(self.a.len() + 1);
        c.push(Rational::one());
        c.extend(self.a.iter().cloned());
        crate::series::PuiseuxSeries::new(0, c, truncation)
    }
}

#[derive(Serialize, Deserialize)]
struct RecurrenceJson {
    order: usize,
    coeffs: Vec<Vec<IntJson>>,
}

/// Integers travel as JSON numbers when they fit in `i64`, as strings otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntJson {
    Small(i64),
    Big(String),
}

impl IntJson {
    fn from_bigint(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(s) => IntJson::Small(s),
            None => IntJson::Big(v.to_string()),
        }
    }

    fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            IntJson::Small(v) => Ok(BigInt::from(*v)),
            IntJson::Big(s) => s.parse().map_err(|_| format!("invalid integer {s:?}")),
        }
    }
}

impl Serialize for Recurrence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RecurrenceJson {
            order: self.order(),
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.coeffs().iter().map(IntJson::from_bigint).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Recurrence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = RecurrenceJson::deserialize(d)?;
        if j.coeffs.len() != j.order + 1 {
            return Err(D::Error::custom(RecurrenceError::OrderMismatch {
                declared: j.order,
                given: j.coeffs.len(),
            }));
        }
        let polys = j
            .coeffs
            .iter()
            .map(|p| {
                p.iter()
                    .map(IntJson::to_bigint)
                    .collect::<Result<Vec<_>, _>>()
                    .map(IntPoly::new)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Recurrence::new(polys).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    frame: Frame,
    #[serde(rename = "K")]
    k: usize,
    #[serde(with = "rational::serde_str_vec")]
    a: Vec<Rational>,
}

impl Serialize for Expansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExpansionJson {
            frame: self.frame.clone(),
            k: self.K(),
            a: self.a.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = ExpansionJson::deserialize(d)?;
        if j.k != j.a.len() {
            return Err(D::Error::custom(RecurrenceError::ExpansionLength {
                declared: j.k,
                given: j.a.len(),
            }));
        }
        Ok(Expansion::new(j.frame, j.a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn a85() -> Recurrence {
        Recurrence::from_i64(&[&[1], &[-1], &[1, -1]]).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(Recurrence::from_i64(&[&[1]]), Err(RecurrenceError::TooShort));
        assert_eq!(
            Recurrence::from_i64(&[&[0, 0], &[1]]),
            Err(RecurrenceError::ZeroLeading)
        );
        assert_eq!(
            Recurrence::from_i64(&[&[1], &[0]]),
            Err(RecurrenceError::ZeroTrailing(1))
        );
        assert!(Recurrence::from_i64(&[&[1], &[], &[1]]).is_ok());
    }

    #[test]
    fn poly_strips_trailing_zeros() {
        let p = IntPoly::from_i64(&[1, -1, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.eval(&BigInt::from(5)), BigInt::from(-4));
        assert_eq!(IntPoly::from_i64(&[0]).degree(), None);
    }

    #[test]
    fn unroll_matches_involutions() {
        let t = a85().unroll(&[BigInt::one(), BigInt::one()], 10).unwrap();
        assert_eq!(t[4], BigInt::from(10));
        assert_eq!(t[10], BigInt::from(9496));
        let fact = Recurrence::from_i64(&[&[1], &[0, -1]]).unwrap();
        let t = fact.unroll(&[BigInt::one()], 6).unwrap();
        assert_eq!(t[6], BigInt::from(720));
        let half = Recurrence::from_i64(&[&[2], &[-1]]).unwrap();
        assert_eq!(
            half.unroll(&[BigInt::one()], 3),
            Err(RecurrenceError::NonIntegralTerm { n: 1 })
        );
    }

    #[test]
    fn recurrence_json() {
        let j = serde_json::to_string(&a85()).unwrap();
        assert_eq!(j, r#"{"order":2,"coeffs":[[1],[-1],[1,-1]]}"#);
        let back: Recurrence = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a85());
        let bad = serde_json::from_str::<Recurrence>(r#"{"order":3,"coeffs":[[1],[-1]]}"#);
        assert!(bad.is_err());
        let big: Recurrence =
            serde_json::from_str(r#"{"order":1,"coeffs":[[1],["-123456789012345678901234567890"]]}"#)
                .unwrap();
        assert_eq!(big.coeffs()[1].degree(), Some(0));
    }

    #[test]
    fn frame_json_and_ratio_exponent() {
        let f = Frame::new(ratio(1, 2), int(1), int(0), ratio(-1, 4));
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"beta":"1/2","c":"1","alpha":"0","kappa":"-1/4"}"#);
        assert_eq!(serde_json::from_str::<Frame>(&j).unwrap(), f);
        assert_eq!(f.ratio_exponent(1), Some(1));
        assert_eq!(f.ratio_exponent(2), Some(2));
        let third = Frame::new(ratio(1, 3), int(0), int(0), int(0));
        assert_eq!(third.ratio_exponent(1), None);
        assert_eq!(third.ratio_exponent(3), Some(2));
    }

    #[test]
    fn expansion_json_checks_length() {
        let f = Frame::new(ratio(1, 2), int(1), int(0), ratio(-1, 4));
        let e = Expansion::new(f, vec![ratio(7, 24), ratio(-119, 1152)]);
        let j = serde_json::to_string(&e).unwrap();
        assert_eq!(
            j,
            r#"{"frame":{"beta":"1/2","c":"1","alpha":"0","kappa":"-1/4"},"K":2,"a":["7/24","-119/1152"]}"#
        );
        assert_eq!(serde_json::from_str::<Expansion>(&j).unwrap(), e);
        let bad = j.replace(r#""K":2"#, r#""K":3"#);
        assert!(serde_json::from_str::<Expansion>(&bad).is_err());
    }
}
