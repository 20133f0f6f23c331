//! Binary floating point with a per-value precision, on top of `num-bigint`.
//!
//! A value is `mantissa * 2^exponent` with `|mantissa|` exactly `precision` bits
//! long. `+ - * /`, `sqrt` and conversions are correctly rounded (nearest, ties to
//! even). `exp` and `ln` evaluate in fixed point with at least 32 guard bits and
//! round once, which keeps them within one ulp.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

/// Bits needed for `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

fn round_to(mantissa: BigInt, exponent: i64, precision: u32, sticky: bool) -> BigFloat {
    if mantissa.is_zero() {
        return BigFloat::zero(precision);
    }
    let negative = mantissa.is_negative();
    let mut mag = mantissa.abs();
    let bits = mag.bits() as i64;
    let prec = precision as i64;
    let mut exponent = exponent;
    if bits <= prec {
        mag <<= (prec - bits) as usize;
        exponent -= prec - bits;
    } else {
        let shift = (bits - prec) as usize;
        let q: BigInt = &mag >> shift;
        let rem = &mag - (&q << shift);
        let half = BigInt::one() << (shift - 1);
        let round_up = match rem.cmp(&half) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => sticky || q.is_odd(),
        };
        mag = if round_up { q + 1u32 } else { q };
        exponent += shift as i64;
        if mag.bits() as i64 > prec {
            mag >>= 1usize;
            exponent += 1;
        }
    }
    BigFloat {
        mantissa: if negative { -mag } else { mag },
        exponent,
        precision,
    }
}

/// `ln 2 * 2^w`, truncated.
fn ln2_fixed(w: u64) -> BigInt {
    // ln 2 = 2 atanh(1/3)
    let guard = 16;
    let one = BigInt::one() << (w + guard) as usize;
    let mut power = one / 3u32;
    let mut sum = power.clone();
    let mut k = 1u32;
    loop {
        power /= 9u32;
        if power.is_zero() {
            break;
        }
        sum += &power / (2 * k + 1);
        k += 1;
    }
    (sum << 1usize) >> guard as usize
}

/// `2^shift` scaling of a signed integer with rounding to nearest.
fn shift_round(v: &BigInt, shift: i64) -> BigInt {
    if shift >= 0 {
        v << shift as usize
    } else {
        let s = (-shift) as usize;
        let half = BigInt::one() << (s - 1);
        if v.is_negative() {
            -((-v + half) >> s)
        } else {
            (v + half) >> s
        }
    }
}

impl BigFloat {
    pub fn zero(precision: u32) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision,
        }
    }

    pub fn one(precision: u32) -> Self {
        Self::from_bigint(&BigInt::one(), precision)
    }

    pub fn from_bigint(v: &BigInt, precision: u32) -> Self {
        round_to(v.clone(), 0, precision, false)
    }

    pub fn from_i64(v: i64, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), precision)
    }

    /// `num / den` rounded once.
    pub fn from_ratio(num: &BigInt, den: &BigInt, precision: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero(precision);
        }
        let shift = (precision as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        let (q, r) = (num.abs() << shift as usize).div_rem(&den.abs());
        let negative = num.is_negative() != den.is_negative();
        let q = if negative { -q } else { q };
        round_to(q, -shift, precision, !r.is_zero())
    }

    pub fn from_rational(r: &Rational, precision: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), precision)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        round_to(self.mantissa.clone(), self.exponent, precision, false)
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -&self.mantissa,
            ..self.clone()
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    /// Position just above the most significant bit: `|x| < 2^top`.
    fn top(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64
    }

    fn out_precision(&self, other: &Self) -> u32 {
        self.precision.max(other.precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.out_precision(other);
        if other.is_zero() {
            return self.with_precision(prec);
        }
        if self.is_zero() {
            return other.with_precision(prec);
        }
        // an addend below 1/8 ulp cannot move the rounded result
        let gap = prec as i64 + 3;
        if self.top() - other.top() > gap {
            return self.with_precision(prec);
        }
        if other.top() - self.top() > gap {
            return other.with_precision(prec);
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        round_to(a + b, e, prec, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        round_to(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            self.out_precision(other),
            false,
        )
    }

    pub fn div(&self, other: &Self) -> Self {
        let prec = self.out_precision(other);
        let q = Self::from_ratio(&self.mantissa, &other.mantissa, prec);
        BigFloat {
            exponent: q.exponent + self.exponent - other.exponent,
            ..q
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational(r, self.precision))
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.precision as i64;
        let mut shift = (2 * prec + 4 - self.mantissa.bits() as i64).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mantissa << shift as usize;
        let r = m.sqrt();
        let sticky = &r * &r != m;
        round_to(r, (self.exponent - shift) / 2, self.precision, sticky)
    }

    /// `x * 2^w` rounded to an integer.
    fn to_fixed(&self, w: i64) -> BigInt {
        shift_round(&self.mantissa, self.exponent + w)
    }

    pub fn exp(&self) -> Self {
        let prec = self.precision;
        if self.is_zero() {
            return Self::one(prec);
        }
        let mag = self.top().max(0) as u64;
        // halvings before the Taylor sum; each squaring back doubles the error
        let halvings = ((prec as f64).sqrt() as u64).max(4);
        let w = prec as u64 + 32 + halvings + mag + 8;
        let x = self.to_fixed(w as i64);
        let l2 = ln2_fixed(w);
        let (k, _) = (&x * 2u32 + &l2).div_mod_floor(&(&l2 * 2u32));
        let r = &x - &k * &l2;
        let r = shift_round(&r, -(halvings as i64));
        let one = BigInt::one() << w as usize;
        let mut sum = one.clone();
        let mut term = one;
        let mut i = 1u32;
        loop {
            term = (&term * &r) >> w as usize;
            term /= i;
            if term.is_zero() {
                break;
            }
            sum += &term;
            i += 1;
        }
        for _ in 0..halvings {
            sum = (&sum * &sum) >> w as usize;
        }
        let k = k.to_i64().expect("exponent out of range");
        round_to(sum, k - w as i64, prec, false)
    }

    /// Natural logarithm, with absolute error far below one ulp of ln 2.
    pub fn ln(&self) -> Self {
        assert!(
            !self.is_zero() && !self.is_negative(),
            "ln of a non-positive number"
        );
        let prec = self.precision;
        let bits = self.mantissa.bits() as i64;
        // x = y * 2^e2 with y in [1, 2)
        let mut e2 = self.exponent + bits - 1;
        let w = prec as u64 + 64 + (64 - e2.unsigned_abs().leading_zeros() as u64);
        let one = BigInt::one() << w as usize;
        let mut y = shift_round(&self.mantissa, w as i64 - (bits - 1));
        // move y into [1/sqrt 2, sqrt 2)
        if (&y * &y) > (&one * &one * 2u32) {
            y = shift_round(&y, -1);
            e2 += 1;
        }
        let z = ((&y - &one) << w as usize) / (&y + &one);
        // atanh is odd; summing |z| keeps the shifts truncating towards zero
        let negative = z.is_negative();
        let z = z.abs();
        let zz = (&z * &z) >> w as usize;
        let mut term = z.clone();
        let mut sum = z;
        let mut k = 1u32;
        loop {
            term = (&term * &zz) >> w as usize;
            if term.is_zero() {
                break;
            }
            sum += &term / (2 * k + 1);
            k += 1;
        }
        if negative {
            sum = -sum;
        }
        let total = sum * 2u32 + ln2_fixed(w) * BigInt::from(e2);
        round_to(total, -(w as i64), prec, false)
    }

    pub fn powf(&self, y: &Self) -> Self {
        let guard = self.precision + 64;
        let lx = self.with_precision(guard).ln();
        lx.mul(&y.with_precision(guard)).exp().with_precision(self.precision)
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        match d.mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// `log10 |x|` as an `f64`; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        crate::rational::log10_int(&self.mantissa.abs())
            + self.exponent as f64 * std::f64::consts::LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let sign = if self.is_negative() { -1.0 } else { 1.0 };
        sign * 10f64.powf(self.log10_abs())
    }

    /// Decimal exponent and the `digits` leading digits of `|x|`, rounded half up.
    pub fn decimal_digits(&self, digits: usize) -> (i64, BigInt) {
        assert!(digits >= 1);
        let mag = self.mantissa.abs();
        let mut e10 = self.log10_abs().floor() as i64;
        let low = BigInt::from(10u32).pow(digits as u32 - 1);
        let high = &low * 10u32;
        loop {
            let scale = digits as i64 - 1 - e10;
            let mut num = mag.clone();
            let mut den = BigInt::one();
            if self.exponent >= 0 {
                num <<= self.exponent as usize;
            } else {
                den <<= (-self.exponent) as usize;
            }
            let ten = BigInt::from(10u32);
            if scale >= 0 {
                num *= ten.pow(scale as u32);
            } else {
                den *= ten.pow((-scale) as u32);
            }
            // place the exponent on the unrounded value, then round
            let floor = &num / &den;
            if floor >= high {
                e10 += 1;
            } else if floor < low {
                e10 -= 1;
            } else {
                let n = (num * 2u32 + &den) / (den * 2u32);
                return if n == high { (e10 + 1, low) } else { (e10, n) };
            }
        }
    }

    /// Normalized scientific notation with `digits` significant digits and a
    /// lowercase `e`; the exponent is omitted when it is zero.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (e10, n) = self.decimal_digits(digits);
        let s = n.to_string();
        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if s.len() > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        if e10 != 0 {
            out.push_str(&format!("e{e10}"));
        }
        out
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.mantissa == other.mantissa && self.exponent == other.exponent
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_sci(digits.max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn f(v: i64) -> BigFloat {
        BigFloat::from_i64(v, P)
    }

    #[test]
    fn rounding_is_to_nearest_even() {
        // 2^4 + 1 at 4 bits: 17 -> 16 (tie, even), 19 -> 20
        assert_eq!(BigFloat::from_i64(17, 4), BigFloat::from_i64(16, 4));
        assert_eq!(BigFloat::from_i64(19, 4), BigFloat::from_i64(20, 4));
        assert_eq!(BigFloat::from_i64(25, 4), BigFloat::from_i64(24, 4));
        assert_eq!(BigFloat::from_i64(27, 4), BigFloat::from_i64(28, 4));
    }

    #[test]
    fn division_and_decimal_output() {
        let third = f(1).div(&f(3));
        assert_eq!(third.to_sci(10), "3.333333333e-1");
        let two_thirds = BigFloat::from_ratio(&BigInt::from(2), &BigInt::from(3), P);
        assert_eq!(two_thirds.to_sci(5), "6.6667e-1");
        assert_eq!(f(-12345).to_sci(3), "-1.23e4");
        assert_eq!(f(9999).to_sci(2), "1.0e4");
        assert_eq!(f(7).to_sci(1), "7");
    }

    #[test]
    fn just_below_a_power_of_ten() {
        let one = BigFloat::one(P);
        let tiny = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(10).pow(28), P);
        let v = one.sub(&tiny.mul_rational(&Rational::from_integer(BigInt::from(3))));
        assert_eq!(v.to_sci(28), "9.999999999999999999999999997e-1");
        assert_eq!(v.to_sci(30), "9.99999999999999999999999999700e-1");
        assert_eq!(v.to_sci(5), "1.0000");
        let w = BigFloat::from_i64(99_995, P);
        assert_eq!(w.to_sci(4), "1.000e5");
        assert_eq!(w.to_sci(5), "9.9995e4");
    }

    #[test]
    fn sqrt_two() {
        let r = f(2).sqrt();
        assert_eq!(r.to_sci(31), "1.414213562373095048801688724210");
        assert_eq!(f(1).div(&r).to_sci(30), "7.07106781186547524400844362105e-1");
        assert_eq!(f(144).sqrt().to_sci(5), "1.2000e1");
    }

    #[test]
    fn exp_and_ln_constants() {
        let e = f(1).exp();
        assert_eq!(e.to_sci(40), "2.718281828459045235360287471352662497757");
        let ln2 = f(2).ln();
        assert_eq!(ln2.to_sci(40), "6.931471805599453094172321214581765680755e-1");
        let ln1000 = f(1000).ln();
        assert_eq!(ln1000.to_sci(30), "6.90775527898213705205397436405");
        assert!(f(1).ln().is_zero() || f(1).ln().log10_abs() < -55.0);
        let m = f(-1).div(&f(4)).exp();
        assert_eq!(m.to_sci(30), "7.78800783071404868245170266978e-1");
    }

    #[test]
    fn exp_ln_round_trip() {
        for v in [3i64, 17, 1000, 123456789] {
            let x = f(v);
            let back = x.ln().exp();
            let rel = back.sub(&x).abs().div(&x);
            assert!(rel.log10_abs() < -55.0, "v = {v}");
        }
        let big = f(3485).exp();
        assert!((big.log10_abs() - 3485.0 / std::f64::consts::LN_10).abs() < 1e-9);
        let small = f(-50).exp();
        assert!((small.log10_abs() + 50.0 / std::f64::consts::LN_10).abs() < 1e-9);
    }

    #[test]
    fn powf_matches_integer_power() {
        let r = f(10).powf(&f(3));
        assert_eq!(r.to_sci(20), "1.0000000000000000000e3");
    }

    #[test]
    fn add_with_disparate_magnitudes() {
        let tiny = BigFloat::from_ratio(&BigInt::one(), &(BigInt::one() << 400usize), P);
        let one = f(1);
        assert_eq!(one.add(&tiny), one);
        assert_eq!(one.sub(&one), BigFloat::zero(P));
        assert_eq!(f(5).cmp_value(&f(7)), Ordering::Less);
    }

    #[test]
    fn huge_integer_rounds_once() {
        let n = BigInt::from(10u32).pow(1300) + 1u32;
        let x = BigFloat::from_bigint(&n, 100);
        assert_eq!(x.to_sci(25), "1.000000000000000000000000e1300");
    }
}
