//! Helpers around [`BigRational`], the coefficient domain of every exact computation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lowest-terms `p/q` text, or `p` when the denominator is one.
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
    }
}

/// Rough `log10 |r|`, good to a few ulps of an `f64`; `-inf` for zero.
pub fn log10_abs(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_int(&r.numer().abs()) - log10_int(r.denom())
}

pub(crate) fn log10_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let (_, digits) = n.to_u64_digits();
        let mut acc = 0.0f64;
        for d in digits.iter().rev() {
            acc = acc * 18446744073709551616.0 + *d as f64;
        }
        return acc.log10();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    log10_int(&top) + shift as f64 * std::f64::consts::LOG10_2
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| de::Error::custom(format!("invalid rational {s:?}")))
    }
}

/// Serde adapter for a list of `p/q` strings.
pub mod serde_str_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&to_string(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).ok_or_else(|| de::Error::custom(format!("invalid rational {s:?}"))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["7/24", "-119/1152", "0", "5", "-3"] {
            assert_eq!(to_string(&parse(s).unwrap()), s);
        }
        assert_eq!(to_string(&parse("6/8").unwrap()), "3/4");
        assert_eq!(to_string(&parse("3/-6").unwrap()), "-1/2");
        assert!(parse("1/0").is_none());
        assert!(parse("x").is_none());
    }

    #[test]
    fn log10_matches_f64() {
        assert!((log10_abs(&ratio(1000, 1)) - 3.0).abs() < 1e-12);
        assert!((log10_abs(&ratio(-1, 8)) + 8f64.log10()).abs() < 1e-12);
        let big = BigInt::from(10).pow(1300);
        assert!((log10_int(&big) - 1300.0).abs() < 1e-9);
    }
}
