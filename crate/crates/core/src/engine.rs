//! Order-by-order solution of `sum_j p_j(n) t_(n-j) = 0` for the ansatz
//! `t_n = F(n) (1 + sum_k a_k n^(-k/2))`.
//!
//! Dividing the recurrence by `F(n)` gives the residual series
//!
//! ```text
//! E(x) = sum_j L_j(x) Phi_j(x) S(u_j(x)),   x = n^(-1/2)
//! ```
//!
//! with `L_j = p_j(x^-2)`, `Phi_j = F(n-j)/F(n)` and `u_j(x) = (n-j)^(-1/2)`.
//! `E` is linear in `S`, so each unknown `a_k` enters affinely and is fixed by one
//! scalar equation at the lowest coefficient it reaches.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;
use crate::recurrence::{Expansion, Frame, IntPoly, Recurrence};
use crate::series::{PuiseuxSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("frame does not fit the recurrence: residual coefficient of x^{order} is {residual} and no unknown can cancel it")]
    FrameMismatch { order: i64, residual: Rational },
    #[error("coefficient a_{k} is undetermined (resonance at x^{order})")]
    ResonantOrder { k: usize, order: i64 },
    #[error("2*beta*j = {value} is not an integer for j = {j}")]
    Ramification { j: usize, value: Rational },
    #[error("no rational value for {parameter}: {detail}")]
    NoRationalRoot { parameter: String, detail: String },
    #[error("several rational values for {parameter}: {}", format_candidates(.candidates))]
    AmbiguousRoot {
        parameter: String,
        candidates: Vec<Rational>,
    },
    #[error("working truncation grew past {limit} without resolving the expansion")]
    GuardExhausted { limit: i64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn format_candidates(c: &[Rational]) -> String {
    c.iter()
        .map(crate::rational::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Intermediate truncation beyond the requested number of terms.
pub const GUARD_ORDER: i64 = 4;
const MAX_EXTRA_GUARD: i64 = 64;

/// `p(n)` at `n = x^-2`: a finite Laurent polynomial of valuation `-2 deg p`.
pub fn poly_to_laurent(p: &IntPoly, truncation: i64) -> PuiseuxSeries {
    let Some(deg) = p.degree() else {
        return PuiseuxSeries::zero(truncation);
    };
    let v = -2 * deg as i64;
    let mut coeffs = vec![Rational::zero(); 2 * deg + 1];
    for (i, c) in p.coeffs().iter().enumerate() {
        coeffs[2 * (deg - i)] = Rational::from_integer(c.clone());
    }
    PuiseuxSeries::new(v, coeffs, truncation)
}

/// `F(n-j)/F(n) = x^(2 beta j) exp(g(x)) + O(x^(T + 2 beta j))`.
///
/// `kappa` cancels and is never read.
pub fn frame_ratio(frame: &Frame, j: usize, truncation: i64) -> Result<PuiseuxSeries, EngineError> {
    let lead = frame.ratio_exponent(j).ok_or_else(|| EngineError::Ramification {
        j,
        value: &frame.beta * BigInt::from(2 * j),
    })?;
    if j == 0 {
        return Ok(PuiseuxSeries::one(truncation));
    }
    let t = truncation;
    let jr = Rational::from_integer(BigInt::from(j));
    // ln(1 - j/n)
    let log_shift = PuiseuxSeries::monomial(-&jr, 2, t + 2).log1p_series()?;

    let mut g = PuiseuxSeries::zero(t);
    if !frame.beta.is_zero() {
        // (n-j) ln(n-j) - n ln n + j + j ln n = (n - j) ln(1 - j/n) + j
        let n_minus_j = PuiseuxSeries::new(-2, vec![Rational::one(), Rational::zero(), -&jr], t + 2);
        let block = n_minus_j.mul(&log_shift).add(&PuiseuxSeries::constant(jr.clone(), t));
        g = g.add(&block.scale(&frame.beta));
    }
    if !frame.c.is_zero() {
        // sqrt(n-j) - sqrt(n) = 1/u_j(x) - 1/x
        let u = PuiseuxSeries::x(t + 2).compose_shift(j as u32)?;
        let sqrt_shift = u.invert()?;
        let block = sqrt_shift.sub(&PuiseuxSeries::monomial(Rational::one(), -1, t));
        g = g.add(&block.scale(&frame.c));
    }
    if !frame.alpha.is_zero() {
        g = g.add(&log_shift.truncate(t).scale(&frame.alpha));
    }
    Ok(g.exp_series()?.shift(lead))
}

/// The weights `W_j = L_j Phi_j` of `E = sum_j W_j S(u_j)`.
fn residual_weights(
    rec: &Recurrence,
    frame: &Frame,
    truncation: i64,
) -> Result<Vec<Option<PuiseuxSeries>>, EngineError> {
    rec.coeffs()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            if p.is_zero() {
                return Ok(None);
            }
            let phi = frame_ratio(frame, j, truncation)?;
            let deg = p.degree().unwrap_or(0) as i64;
            // enough terms of L_j to be exact against phi
            let l = poly_to_laurent(p, phi.truncation() - phi.valuation() - 2 * deg);
            Ok(Some(l.mul(&phi)))
        })
        .collect()
}

/// `E(x)` for `S = 1`, i.e. `sum_j L_j Phi_j`.
pub(crate) fn frame_residual(
    rec: &Recurrence,
    frame: &Frame,
    truncation: i64,
) -> Result<PuiseuxSeries, EngineError> {
    Ok(residual_weights(rec, frame, truncation)?
        .into_iter()
        .flatten()
        .fold(PuiseuxSeries::zero(i64::MAX / 4), |acc, w| acc.add(&w)))
}

fn check_admissible(rec: &Recurrence, frame: &Frame) -> Result<(), EngineError> {
    for j in 1..=rec.order() {
        if frame.ratio_exponent(j).is_none() {
            return Err(EngineError::Ramification {
                j,
                value: &frame.beta * BigInt::from(2 * j),
            });
        }
    }
    Ok(())
}

/// Dense coefficients `x^0 .. x^(len-1)` of `u_j(x)^k = x^k (1 - j x^2)^(-k/2)`.
fn shifted_power(j: usize, k: usize, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    if k >= len {
        return out;
    }
    let mut c = Rational::one();
    let (jb, kb) = (BigInt::from(j), BigInt::from(k));
    let mut m = 0usize;
    while k + 2 * m < len {
        if m > 0 {
            // c_m = c_(m-1) (k + 2m - 2) j / (2m)
            let num = (&kb + BigInt::from(2 * m - 2)) * &jb;
            c *= Rational::new(num, BigInt::from(2 * m));
        }
        out[k + 2 * m] = c.clone();
        if j == 0 {
            break;
        }
        m += 1;
    }
    out
}

/// Coefficient of `x^idx` in `w * dense`, where `dense` holds `x^0 ..`.
fn product_coeff(w: &PuiseuxSeries, dense: &[Rational], idx: i64) -> Rational {
    let mut acc = Rational::zero();
    for (i, c) in w.coeffs().iter().enumerate() {
        let e = w.valuation() + i as i64;
        let other = idx - e;
        if other < 0 {
            break;
        }
        if let Some(d) = dense.get(other as usize) {
            if !c.is_zero() && !d.is_zero() {
                acc += c * d;
            }
        }
    }
    acc
}

enum Attempt<T> {
    Done(T),
    NeedTruncation(i64),
}

struct Residual {
    weights: Vec<(usize, PuiseuxSeries)>,
    /// Truncation of `E` when every `S(u_j)` is known modulo `O(x^dense_len)`.
    truncation: i64,
    lowest: i64,
    dense_len: usize,
}

impl Residual {
    fn new(rec: &Recurrence, frame: &Frame, truncation: i64) -> Result<Self, EngineError> {
        let weights: Vec<(usize, PuiseuxSeries)> = residual_weights(rec, frame, truncation)?
            .into_iter()
            .enumerate()
            .filter_map(|(j, w)| w.map(|w| (j, w)))
            .collect();
        let dense_len = truncation.max(0) as usize;
        let e_trunc = weights
            .iter()
            .map(|(_, w)| w.truncation().min(truncation + w.valuation()))
            .min()
            .unwrap_or(truncation);
        let lowest = weights
            .iter()
            .map(|(_, w)| w.valuation())
            .min()
            .unwrap_or(e_trunc);
        Ok(Residual {
            weights,
            truncation: e_trunc,
            lowest,
            dense_len,
        })
    }

    fn coeff(&self, shifted: &[Vec<Rational>], idx: i64) -> Rational {
        self.weights
            .iter()
            .zip(shifted)
            .map(|((_, w), s)| product_coeff(w, s, idx))
            .sum()
    }

    fn powers(&self, k: usize) -> Vec<Vec<Rational>> {
        self.weights
            .iter()
            .map(|(j, _)| shifted_power(*j, k, self.dense_len))
            .collect()
    }
}

/// Computes `a_1 ..= a_K` for `rec` under `frame`.
///
/// The first equation sits at the lowest order reached by `E(1 + a_1 x)`; each
/// later unknown `a_k` is fixed by the next order up.
pub fn solve_expansion(rec: &Recurrence, frame: &Frame, k_max: usize) -> Result<Expansion, EngineError> {
    check_admissible(rec, frame)?;
    let mut truncation = k_max as i64 + GUARD_ORDER;
    let limit = truncation + MAX_EXTRA_GUARD;
    loop {
        match try_solve(rec, frame, k_max, truncation)? {
            Attempt::Done(a) => return Ok(Expansion::new(frame.clone(), a)),
            Attempt::NeedTruncation(extra) => {
                truncation += extra;
                if truncation > limit {
                    return Err(EngineError::GuardExhausted { limit });
                }
            }
        }
    }
}

fn try_solve(
    rec: &Recurrence,
    frame: &Frame,
    k_max: usize,
    truncation: i64,
) -> Result<Attempt<Vec<Rational>>, EngineError> {
    let res = Residual::new(rec, frame, truncation)?;
    let mut shifted = res.powers(0);
    let mut a = Vec::with_capacity(k_max);
    if k_max == 0 {
        return Ok(Attempt::Done(a));
    }

    // base order: lowest coefficient touched by S = 1 or by a_1
    let first = res.powers(1);
    let mut base = res.lowest;
    loop {
        if base >= res.truncation {
            return Ok(Attempt::NeedTruncation(2));
        }
        if !res.coeff(&shifted, base).is_zero() || !res.coeff(&first, base).is_zero() {
            break;
        }
        base += 1;
    }

    for k in 1..=k_max {
        let order = base + k as i64 - 1;
        if order >= res.truncation {
            return Ok(Attempt::NeedTruncation(order - res.truncation + 1));
        }
        let unknown = if k == 1 { first.clone() } else { res.powers(k) };
        // a_k must not disturb orders that are already solved
        for low in (res.lowest + k as i64)..order {
            let q = res.coeff(&unknown, low);
            if !q.is_zero() {
                return Err(EngineError::FrameMismatch {
                    order: low,
                    residual: q,
                });
            }
        }
        let p = res.coeff(&shifted, order);
        let q = res.coeff(&unknown, order);
        if q.is_zero() {
            return Err(if p.is_zero() {
                EngineError::ResonantOrder { k, order }
            } else {
                EngineError::FrameMismatch { order, residual: p }
            });
        }
        let ak = -p / q;
        for (s, u) in shifted.iter_mut().zip(&unknown) {
            for (dst, src) in s.iter_mut().zip(u) {
                if !src.is_zero() {
                    *dst += src * &ak;
                }
            }
        }
        a.push(ak);
    }
    Ok(Attempt::Done(a))
}

/// The first order `v0` at which `E(1 + a_1 x)` is not identically zero, and
/// `E` evaluated on the full expansion, both through generic series operations.
fn substituted_residual(
    rec: &Recurrence,
    exp: &Expansion,
    truncation: i64,
) -> Result<(i64, PuiseuxSeries), EngineError> {
    let weights: Vec<PuiseuxSeries> = residual_weights(rec, &exp.frame, truncation)?
        .into_iter()
        .flatten()
        .collect();
    let js: Vec<u32> = rec
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, _)| j as u32)
        .collect();
    let s = exp.series(truncation);
    let x = PuiseuxSeries::x(truncation);
    let mut e0 = PuiseuxSeries::zero(i64::MAX / 4);
    let mut e1 = PuiseuxSeries::zero(i64::MAX / 4);
    let mut e = PuiseuxSeries::zero(i64::MAX / 4);
    for (w, &j) in weights.iter().zip(&js) {
        e0 = e0.add(w);
        e1 = e1.add(&w.mul(&x.compose_shift(j)?));
        e = e.add(&w.mul(&s.compose_shift(j)?));
    }
    let e0_trunc = e0.truncate(e.truncation());
    let base = e0_trunc.valuation().min(e1.valuation());
    Ok((base, e))
}

/// Number of consecutive orders `x^v0, x^(v0+1), ...` at which the residual of
/// `exp` vanishes exactly. A correct `K`-term expansion scores at least `K`.
pub fn residual_check(rec: &Recurrence, exp: &Expansion) -> Result<usize, EngineError> {
    check_admissible(rec, &exp.frame)?;
    let want = exp.K() as i64;
    let mut truncation = want + GUARD_ORDER;
    let limit = truncation + MAX_EXTRA_GUARD;
    loop {
        let (base, e) = substituted_residual(rec, exp, truncation)?;
        let verified = (e.valuation() - base).max(0);
        // zeros proven right up to the truncation may continue beyond it
        let open_ended = e.is_zero();
        if verified > want || !open_ended || truncation >= limit {
            return Ok(verified as usize);
        }
        truncation += want + 1 - verified;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::series::shifted_variable;

    fn a85() -> Recurrence {
        Recurrence::from_i64(&[&[1], &[-1], &[1, -1]]).unwrap()
    }

    fn a85_frame() -> Frame {
        Frame::new(ratio(1, 2), int(1), int(0), ratio(-1, 4))
    }

    #[test]
    fn laurent_substitution() {
        assert_eq!(poly_to_laurent(&IntPoly::from_i64(&[1]), 5), PuiseuxSeries::one(5));
        assert_eq!(
            poly_to_laurent(&IntPoly::from_i64(&[-1, 1]), 5),
            PuiseuxSeries::from_ints(-2, &[1, 0, -1], 5)
        );
        assert_eq!(
            poly_to_laurent(&IntPoly::from_i64(&[0, 0, 1]), 5),
            PuiseuxSeries::from_ints(-4, &[1], 5)
        );
    }

    #[test]
    fn frame_ratio_leading_terms() {
        let f = a85_frame();
        let r1 = frame_ratio(&f, 1, 8).unwrap();
        assert_eq!(r1.valuation(), 1);
        assert_eq!(r1.leading(), Some(&int(1)));
        assert_eq!(r1.truncation(), 9);
        let r2 = frame_ratio(&f, 2, 8).unwrap();
        assert_eq!(r2.valuation(), 2);
        assert_eq!(r2.leading(), Some(&int(1)));
        let third = Frame::new(ratio(1, 3), int(0), int(0), int(0));
        assert!(matches!(
            frame_ratio(&third, 1, 8),
            Err(EngineError::Ramification { j: 1, .. })
        ));
    }

    #[test]
    fn frame_ratio_ignores_kappa() {
        let f = a85_frame();
        assert_eq!(
            frame_ratio(&f, 2, 10).unwrap(),
            frame_ratio(&f.with_kappa(int(7)), 2, 10).unwrap()
        );
    }

    #[test]
    fn frame_ratio_pure_exponent() {
        // F = n^(1/2): F(n-1)/F(n) = (1 - x^2)^(1/2)
        let f = Frame::new(int(0), int(0), ratio(1, 2), int(0));
        let r = frame_ratio(&f, 1, 8).unwrap();
        let expected = PuiseuxSeries::new(
            0,
            vec![int(1), int(0), ratio(-1, 2), int(0), ratio(-1, 8), int(0), ratio(-1, 16)],
            8,
        );
        assert_eq!(r.truncate(7), expected.truncate(7));
    }

    #[test]
    fn a85_first_terms() {
        let e = solve_expansion(&a85(), &a85_frame(), 2).unwrap();
        assert_eq!(e.coeffs(), &[ratio(7, 24), ratio(-119, 1152)]);
    }

    #[test]
    fn a85_without_sqrt_term_is_a_mismatch() {
        let f = Frame::new(ratio(1, 2), int(0), int(0), int(0));
        match solve_expansion(&a85(), &f, 1) {
            Err(EngineError::FrameMismatch { order, .. }) => assert_eq!(order, 1),
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn factorial_stirling_series() {
        // n! = n^n e^-n sqrt(n) sqrt(2 pi) (1 + 1/(12n) + 1/(288 n^2) - 139/(51840 n^3) ...)
        let rec = Recurrence::from_i64(&[&[1], &[0, -1]]).unwrap();
        let f = Frame::new(int(1), int(0), ratio(1, 2), int(0));
        let e = solve_expansion(&rec, &f, 6).unwrap();
        assert_eq!(
            e.coeffs(),
            &[int(0), ratio(1, 12), int(0), ratio(1, 288), int(0), ratio(-139, 51840)]
        );
        assert!(residual_check(&rec, &e).unwrap() >= 6);
    }

    #[test]
    fn constant_sequence_has_trivial_series() {
        let rec = Recurrence::from_i64(&[&[1], &[-1]]).unwrap();
        let f = Frame::new(int(0), int(0), int(0), int(0));
        let e = solve_expansion(&rec, &f, 5).unwrap();
        assert!(e.coeffs().iter().all(Zero::is_zero));
    }

    #[test]
    fn residual_counts_solved_orders() {
        let rec = a85();
        let e = solve_expansion(&rec, &a85_frame(), 9).unwrap();
        assert!(residual_check(&rec, &e).unwrap() >= 9);
        let mut bad = e.coeffs().to_vec();
        bad[0] = ratio(7, 25);
        let bad = Expansion::new(a85_frame(), bad);
        assert_eq!(residual_check(&rec, &bad).unwrap(), 0);
        let empty = Expansion::new(a85_frame(), vec![]);
        residual_check(&rec, &empty).unwrap();
    }

    #[test]
    fn shifted_power_matches_series_power() {
        let u = shifted_variable(2, 12);
        let mut p = PuiseuxSeries::one(12);
        for k in 0..6 {
            let dense = shifted_power(2, k, 12);
            for (e, c) in dense.iter().enumerate() {
                assert_eq!(p.coeff(e as i64).unwrap(), *c, "k = {k}, e = {e}");
            }
            p = p.mul(&u);
        }
    }
}
