#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use recasym::rational::{int, ratio};
use recasym::recurrence::{Frame, IntPoly, Recurrence};
use recasym::{solve_expansion, PuiseuxSeries, Rational};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

/// Random series with valuation in `vals` and at most `max_len` known coefficients.
pub fn series_in(vals: std::ops::Range<i64>, max_len: usize) -> impl Strategy<Value = PuiseuxSeries> {
    (vals, prop::collection::vec(small_rational(), 0..=max_len), 0i64..3).prop_map(
        |(v, c, extra)| {
            let t = v + c.len() as i64 + extra;
            PuiseuxSeries::new(v, c, t)
        },
    )
}

pub fn laurent() -> impl Strategy<Value = PuiseuxSeries> {
    series_in(-3..4, 8)
}

/// Series with nonzero leading coefficient.
pub fn unit_led() -> impl Strategy<Value = PuiseuxSeries> {
    laurent().prop_filter("nonzero", |s| !s.is_zero())
}

/// Valuation at least one, truncation at most 40.
pub fn small_positive() -> impl Strategy<Value = PuiseuxSeries> {
    series_in(1..4, 12).prop_map(|s| s.truncate(s.truncation().min(40)))
}

/// Power series, truncation at most 20.
pub fn power_series() -> impl Strategy<Value = PuiseuxSeries> {
    series_in(0..3, 10).prop_map(|s| s.truncate(s.truncation().min(20)))
}

/// Nonzero integer polynomial of degree at most 2.
pub fn multiplier() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-5i64..=5, 1..=3)
        .prop_map(|c| IntPoly::from_i64(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// Agreement on every order both operands know.
pub fn agree(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<(), TestCaseError> {
    let t = a.truncation().min(b.truncation());
    prop_assert_eq!(a.truncate(t), b.truncate(t), "differ below x^{}", t);
    Ok(())
}

pub fn check_add_commutes(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.add(b), b.add(a));
    Ok(())
}

pub fn check_add_associates(a: &PuiseuxSeries, b: &PuiseuxSeries, c: &PuiseuxSeries) -> Result<(), TestCaseError> {
    agree(&a.add(b).add(c), &a.add(&b.add(c)))
}

pub fn check_mul_commutes(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.mul(b), b.mul(a));
    Ok(())
}

pub fn check_mul_associates(a: &PuiseuxSeries, b: &PuiseuxSeries, c: &PuiseuxSeries) -> Result<(), TestCaseError> {
    agree(&a.mul(b).mul(c), &a.mul(&b.mul(c)))
}

pub fn check_distributes(a: &PuiseuxSeries, b: &PuiseuxSeries, c: &PuiseuxSeries) -> Result<(), TestCaseError> {
    agree(&a.mul(&b.add(c)), &a.mul(b).add(&a.mul(c)))
}

pub fn check_additive_inverse(a: &PuiseuxSeries) -> Result<(), TestCaseError> {
    prop_assert!(a.add(&a.neg()).is_zero());
    Ok(())
}

pub fn check_invert(a: &PuiseuxSeries) -> Result<(), TestCaseError> {
    let inv = a.invert().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let p = a.mul(&inv);
    agree(&p, &PuiseuxSeries::one(p.truncation()))
}

pub fn check_exp_log(s: &PuiseuxSeries) -> Result<(), TestCaseError> {
    let e = s.exp_series().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let back = e
        .sub(&PuiseuxSeries::one(e.truncation()))
        .log1p_series()
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    agree(&back, s)
}

pub fn check_exp_additive(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<(), TestCaseError> {
    let lhs = a.add(b).exp_series().unwrap();
    let rhs = a.exp_series().unwrap().mul(&b.exp_series().unwrap());
    agree(&lhs, &rhs)
}

pub fn check_shift_semigroup(s: &PuiseuxSeries, i: u32, j: u32) -> Result<(), TestCaseError> {
    let stepwise = s.compose_shift(i).unwrap().compose_shift(j).unwrap();
    let direct = s.compose_shift(i + j).unwrap();
    agree(&stepwise, &direct)
}

pub fn check_shift_is_ring_map(a: &PuiseuxSeries, b: &PuiseuxSeries, j: u32) -> Result<(), TestCaseError> {
    let lhs = a.mul(b).compose_shift(j).unwrap();
    let rhs = a.compose_shift(j).unwrap().mul(&b.compose_shift(j).unwrap());
    agree(&lhs, &rhs)
}

pub fn a85() -> Recurrence {
    Recurrence::from_i64(&[&[1], &[-1], &[1, -1]]).unwrap()
}

pub fn a85_frame(kappa: Rational) -> Frame {
    Frame::new(ratio(1, 2), int(1), int(0), kappa)
}

pub const PROPERTY_K: usize = 6;

pub fn check_kappa_independent(kappa: &Rational) -> Result<(), TestCaseError> {
    let base = solve_expansion(&a85(), &a85_frame(int(0)), PROPERTY_K).unwrap();
    let other = solve_expansion(&a85(), &a85_frame(kappa.clone()), PROPERTY_K).unwrap();
    prop_assert_eq!(base.coeffs(), other.coeffs());
    Ok(())
}

pub fn check_scale_invariant(q: &IntPoly) -> Result<(), TestCaseError> {
    let frame = a85_frame(ratio(-1, 4));
    let base = solve_expansion(&a85(), &frame, PROPERTY_K).unwrap();
    let scaled = a85().scaled(q).unwrap();
    let other = solve_expansion(&scaled, &frame, PROPERTY_K)
        .map_err(|e| TestCaseError::fail(format!("{e} for multiplier {:?}", q.coeffs())))?;
    prop_assert_eq!(base.coeffs(), other.coeffs());
    Ok(())
}

/// `t_n = (n + s) t_(n-1)`, a shifted factorial.
pub fn shifted_factorial(s: i64) -> Recurrence {
    Recurrence::from_i64(&[&[1], &[-s, -1]]).unwrap()
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn rationals(v: &[(i128, i128)]) -> Vec<Rational> {
    v.iter()
        .map(|&(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
        .collect()
}

/// The nine rationals as printed in the reference display.
pub fn reference_nine() -> Vec<Rational> {
    rationals(&[
        (7, 24),
        (-119, 1152),
        (-7933, 414720),
        (1967381, 39813120),
        (-57200419, 1337720832),
        (-562799, 47775744),
        (-526420847, 40131624960),
        (1856209, 573308928),
        (-267645803, 2407897497600),
    ])
}

/// `a_1 ..= a_9` for the involution recurrence. `a_6 ..= a_9` were confirmed
/// independently by a least-squares fit of `t_n / F(n)` from a float recurrence
/// over `n = 10^4 ... 3.2 * 10^5` (agreement to about ten digits).
pub fn a85_nine() -> Vec<Rational> {
    rationals(&[
        (7, 24),
        (-119, 1152),
        (-7933, 414720),
        (1967381, 39813120),
        (-57200419, 1337720832),
        (6340449533, 687970713600),
        (3840755481827, 115579079884800),
        (-1165106617342939, 22191183337881600),
        (10362392814297883973, 263631258054033408000),
    ])
}
