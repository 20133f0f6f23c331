//! Numeric evaluation of `C * F(n) * S_k(n)` and comparison with exact terms.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bigfloat::{bits_for_digits, BigFloat};
use crate::rational::{self, Rational};
use crate::recurrence::{Expansion, Frame, Recurrence, RecurrenceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("cannot deliver {digits} significant digits (supported: 1..={max})")]
    PrecisionUnachievable { digits: u32, max: u32 },
    #[error("evaluation point n = {0} is below 2")]
    InvalidPoint(u64),
    #[error("order k = {k} requested but the expansion has only {available} coefficients")]
    OrderUnavailable { k: usize, available: usize },
    #[error("truncation error estimate 1e{log10_estimate:.1} exceeds the requested 1e-{digits}")]
    TruncationDominates { log10_estimate: f64, digits: u32 },
    #[error("exact term t_{0} must be positive for a ratio check")]
    NonPositiveExact(u64),
    #[error(transparent)]
    Recurrence(#[from] RecurrenceError),
}

pub const MAX_DIGITS: u32 = 100_000;

/// The multiplicative constant in front of the frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionConstant {
    Rational(Rational),
    /// `1/sqrt(2)`, evaluated at working precision.
    InvSqrt2,
}

impl ConnectionConstant {
    pub fn one() -> Self {
        ConnectionConstant::Rational(rational::int(1))
    }

    pub fn to_bigfloat(&self, bits: u32) -> BigFloat {
        match self {
            ConnectionConstant::Rational(r) => BigFloat::from_rational(r, bits),
            ConnectionConstant::InvSqrt2 => {
                BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(2), bits).sqrt()
            }
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "1/sqrt2" | "1/sqrt(2)" => Some(ConnectionConstant::InvSqrt2),
            other => rational::parse(other).map(ConnectionConstant::Rational),
        }
    }

    pub fn latex(&self) -> Option<String> {
        match self {
            ConnectionConstant::InvSqrt2 => Some(r"\frac{1}{\sqrt{2}}".into()),
            ConnectionConstant::Rational(r) if r == &rational::int(1) => None,
            ConnectionConstant::Rational(r) => Some(if r.denom() == &BigInt::from(1) {
                r.numer().to_string()
            } else {
                format!(r"\frac{{{}}}{{{}}}", r.numer(), r.denom())
            }),
        }
    }
}

fn f64_of(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Rough `|E(n)|` for sizing the working precision.
fn exponent_magnitude(frame: &Frame, n: u64) -> f64 {
    let nf = n as f64;
    let e = f64_of(&frame.beta) * (nf * nf.ln() - nf)
        + f64_of(&frame.c) * nf.sqrt()
        + f64_of(&frame.alpha) * nf.ln()
        + f64_of(&frame.kappa);
    e.abs()
}

/// Decimal working precision for `digits` output digits at `n`, padded by the
/// size of the exponent argument since `exp` turns absolute error into relative.
pub fn working_digits(frame: &Frame, n: u64, digits: u32) -> u32 {
    let mag = exponent_magnitude(frame, n).max(1.0).log10().ceil() as u32;
    digits + mag + 10
}

fn working_bits(frame: &Frame, n: u64, digits: u32) -> u32 {
    bits_for_digits(working_digits(frame, n, digits)) + 16
}

fn check_request(exp: &Expansion, n: u64, k: usize, digits: u32) -> Result<(), NumericError> {
    if digits == 0 || digits > MAX_DIGITS {
        return Err(NumericError::PrecisionUnachievable {
            digits,
            max: MAX_DIGITS,
        });
    }
    if n < 2 {
        return Err(NumericError::InvalidPoint(n));
    }
    if k > exp.K() {
        return Err(NumericError::OrderUnavailable {
            k,
            available: exp.K(),
        });
    }
    Ok(())
}

/// `beta (n ln n - n) + c sqrt(n) + alpha ln n + kappa`.
pub fn frame_exponent(frame: &Frame, n: u64, bits: u32) -> BigFloat {
    let nb = BigFloat::from_bigint(&BigInt::from(n), bits);
    let ln_n = nb.ln();
    let mut e = BigFloat::from_rational(&frame.kappa, bits);
    if !frame.beta.is_zero() {
        e = e.add(&nb.mul(&ln_n).sub(&nb).mul_rational(&frame.beta));
    }
    if !frame.c.is_zero() {
        e = e.add(&nb.sqrt().mul_rational(&frame.c));
    }
    if !frame.alpha.is_zero() {
        e = e.add(&ln_n.mul_rational(&frame.alpha));
    }
    e
}

/// `1 + sum_{i<=k} a_i n^(-i/2)` by Horner in `n^(-1/2)`.
pub fn series_value(exp: &Expansion, n: u64, k: usize, bits: u32) -> BigFloat {
    let x = BigFloat::one(bits).div(&BigFloat::from_bigint(&BigInt::from(n), bits).sqrt());
    let mut acc = BigFloat::zero(bits);
    for a in exp.coeffs()[..k].iter().rev() {
        acc = acc.add(&BigFloat::from_rational(a, bits)).mul(&x);
    }
    acc.add(&BigFloat::one(bits))
}

/// `C F(n) S_k(n)` at an explicit binary precision.
pub fn eval_at_precision(exp: &Expansion, constant: &ConnectionConstant, n: u64, k: usize, bits: u32) -> BigFloat {
    let frame = frame_exponent(&exp.frame, n, bits).exp();
    constant
        .to_bigfloat(bits)
        .mul(&frame)
        .mul(&series_value(exp, n, k, bits))
}

/// `C F(n) (1 + sum_{i<=k} a_i n^(-i/2))`, good to at least `digits` significant digits.
pub fn eval_expansion(
    exp: &Expansion,
    constant: &ConnectionConstant,
    n: u64,
    k: usize,
    digits: u32,
) -> Result<BigFloat, NumericError> {
    check_request(exp, n, k, digits)?;
    Ok(eval_at_precision(exp, constant, n, k, working_bits(&exp.frame, n, digits)))
}

#[derive(Debug, Clone)]
pub struct RatioReport {
    pub n: u64,
    pub k: usize,
    pub digits: u32,
    pub working_digits: u32,
    pub asy_value: BigFloat,
    pub exact_value: BigFloat,
    pub ratio: BigFloat,
}

#[derive(Serialize)]
struct RatioReportJson<'a> {
    n: u64,
    k: usize,
    asy: &'a str,
    ratio: &'a str,
    digits: u32,
}

impl RatioReport {
    pub fn asy_string(&self) -> String {
        self.asy_value.to_sci(self.digits as usize)
    }

    pub fn exact_string(&self) -> String {
        self.exact_value.to_sci(self.digits as usize)
    }

    pub fn ratio_string(&self) -> String {
        self.ratio.to_sci(self.digits as usize)
    }

    /// `ratio - 1` at working precision.
    pub fn deviation(&self) -> BigFloat {
        self.ratio.sub(&BigFloat::one(self.ratio.precision()))
    }

    pub fn to_json(&self) -> String {
        let (asy, ratio) = (self.asy_string(), self.ratio_string());
        serde_json::to_string(&RatioReportJson {
            n: self.n,
            k: self.k,
            asy: &asy,
            ratio: &ratio,
            digits: self.digits,
        })
        .expect("report serializes")
    }

    /// Plain-text report for `check --report`.
    pub fn to_text(&self, title: &str) -> String {
        let dev = self.deviation();
        format!(
            "# {title}\n\
             n: {}\n\
             k: {} (series through n^(-{}/2))\n\
             digits: {} (working precision {} digits)\n\
             exact: {}\n\
             asymptotic: {}\n\
             ratio: {}\n\
             ratio - 1: {}\n",
            self.n,
            self.k,
            self.k,
            self.digits,
            self.working_digits,
            self.exact_string(),
            self.asy_string(),
            self.ratio_string(),
            dev.to_sci(6),
        )
    }
}

/// Compares `C F(n) S_k(n)` against the exact term `t_n`.
pub fn ratio_check(
    exp: &Expansion,
    constant: &ConnectionConstant,
    exact: &BigInt,
    n: u64,
    k: usize,
    digits: u32,
) -> Result<RatioReport, NumericError> {
    check_request(exp, n, k, digits)?;
    if exact <= &BigInt::zero() {
        return Err(NumericError::NonPositiveExact(n));
    }
    let wd = working_digits(&exp.frame, n, digits);
    let bits = bits_for_digits(wd) + 16;
    let asy = eval_at_precision(exp, constant, n, k, bits);
    let exact_f = BigFloat::from_bigint(exact, bits);
    let ratio = asy.div(&exact_f);
    Ok(RatioReport {
        n,
        k,
        digits,
        working_digits: wd,
        asy_value: asy,
        exact_value: exact_f,
        ratio,
    })
}

/// `log10` of the first omitted term, from the coefficients after `a_k`.
pub fn truncation_estimate(exp: &Expansion, n: u64, k: usize) -> Option<f64> {
    let next: Vec<f64> = (k + 1..=(k + 2).min(exp.K()))
        .filter_map(|i| {
            let a = exp.a(i)?;
            Some(rational::log10_abs(a) - i as f64 / 2.0 * (n as f64).log10())
        })
        .collect();
    if next.is_empty() {
        None
    } else {
        Some(next.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Estimates `C = t_n / (F(n) S_k(n))` from the exact term `t_n` of `rec`.
///
/// `exp` must carry at least `k + 1` coefficients so the first omitted term can
/// be bounded.
pub fn connection_constant(
    rec: &Recurrence,
    initial: &[BigInt],
    exp: &Expansion,
    n: u64,
    k: usize,
    digits: u32,
) -> Result<BigFloat, NumericError> {
    check_request(exp, n, k, digits)?;
    let estimate = truncation_estimate(exp, n, k).ok_or(NumericError::OrderUnavailable {
        k: k + 1,
        available: exp.K(),
    })?;
    if estimate > -(digits as f64) {
        return Err(NumericError::TruncationDominates {
            log10_estimate: estimate,
            digits,
        });
    }
    let terms = rec.unroll(initial, n as usize)?;
    connection_constant_from_exact(exp, &terms[n as usize], n, k, digits)
}

pub(crate) fn connection_constant_from_exact(
    exp: &Expansion,
    exact: &BigInt,
    n: u64,
    k: usize,
    digits: u32,
) -> Result<BigFloat, NumericError> {
    let report = ratio_check(exp, &ConnectionConstant::one(), exact, n, k, digits)?;
    Ok(BigFloat::one(report.ratio.precision()).div(&report.ratio))
}
