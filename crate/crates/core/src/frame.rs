//! Recovering the exponential frame `(beta, c, alpha)` from the recurrence alone.
//!
//! `beta` comes from the degrees of the coefficient polynomials. `c` and `alpha`
//! are pinned by the lowest coefficients of the residual of `S = 1`. Those
//! coefficients are polynomials in `(c, alpha)` of known degree, so they are
//! recovered exactly by evaluating the residual on a small grid of rational
//! frames and interpolating.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::engine::{self, EngineError};
use crate::rational::Rational;
use crate::recurrence::{Frame, Recurrence};

/// Dense univariate polynomial over the rationals, ascending coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly(Vec<Rational>);

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut out = vec![Rational::zero(); xs.len()];
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            // basis polynomial prod_{m != i} (x - x_m) / (x_i - x_m)
            let mut basis = vec![Rational::one()];
            let mut denom = Rational::one();
            for (m, xm) in xs.iter().enumerate() {
                if m == i {
                    continue;
                }
                let mut next = vec![Rational::zero(); basis.len() + 1];
                for (d, b) in basis.iter().enumerate() {
                    next[d + 1] += b;
                    next[d] -= b * xm;
                }
                basis = next;
                denom *= xi - xm;
            }
            let scale = yi / denom;
            for (o, b) in out.iter_mut().zip(&basis) {
                *o += b * &scale;
            }
        }
        QPoly::new(out)
    }

    /// Distinct rational roots, by the rational root theorem.
    pub fn rational_roots(&self) -> Result<Vec<Rational>, String> {
        if self.is_zero() {
            return Err("polynomial is identically zero".into());
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * &lcm).to_integer())
            .collect();
        let mut roots = Vec::new();
        if ints[0].is_zero() {
            roots.push(Rational::zero());
            while ints[0].is_zero() {
                ints.remove(0);
            }
        }
        let p = QPoly::new(ints.iter().cloned().map(Rational::from_integer).collect());
        match p.degree() {
            Some(0) | None => {}
            Some(1) => roots.push(-&p.0[0] / &p.0[1]),
            Some(deg) => {
                let limit = 1u64 << 40;
                let a0 = ints[0].abs().to_u64().filter(|&v| v <= limit);
                let an = ints[deg].abs().to_u64().filter(|&v| v <= limit);
                let (Some(a0), Some(an)) = (a0, an) else {
                    return Err("coefficients too large for root enumeration".into());
                };
                for num in divisors(a0) {
                    for den in divisors(an) {
                        for sign in [1i64, -1] {
                            let r = Rational::new(BigInt::from(sign) * BigInt::from(num), BigInt::from(den));
                            if p.eval(&r).is_zero() && !roots.contains(&r) {
                                roots.push(r);
                            }
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `beta = max_j (deg p_j - deg p_0) / j` over the nonzero `p_j`, `j >= 1`.
pub fn newton_beta(rec: &Recurrence) -> Rational {
    let d0 = rec.coeffs()[0].degree().unwrap_or(0) as i64;
    rec.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(j, p)| {
            p.degree()
                .map(|d| Rational::new(BigInt::from(d as i64 - d0), BigInt::from(j)))
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Orders above the lowest one that are used to fix `c` and `alpha`.
const FRAME_ORDERS: i64 = 2;

/// Bivariate coefficient `sum B[m][l] c^m alpha^l` of one residual order.
struct Bivariate(Vec<Vec<Rational>>);

impl Bivariate {
    fn in_alpha(&self, c: &Rational) -> QPoly {
        let width = self.0.first().map_or(0, Vec::len);
        let coeffs = (0..width)
            .map(|l| {
                self.0
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, row| acc * c + &row[l])
            })
            .collect();
        QPoly::new(coeffs)
    }

    fn in_c(&self, alpha: &Rational) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .map(|row| {
                    row.iter()
                        .rev()
                        .fold(Rational::zero(), |acc, v| acc * alpha + v)
                })
                .collect(),
        )
    }

    fn depends_on_c(&self) -> bool {
        self.0.iter().skip(1).any(|row| row.iter().any(|v| !v.is_zero()))
    }

    fn depends_on_alpha(&self) -> bool {
        self.0.iter().any(|row| row.iter().skip(1).any(|v| !v.is_zero()))
    }

    fn constant(&self) -> Rational {
        self.0[0][0].clone()
    }
}

/// Residual coefficients of `S = 1` at orders `lowest ..= lowest + FRAME_ORDERS`
/// as bivariate polynomials in `(c, alpha)`.
fn symbolic_orders(rec: &Recurrence, beta: &Rational, lowest: i64) -> Result<Vec<Bivariate>, EngineError> {
    let c_deg = FRAME_ORDERS as usize;
    let a_deg = c_deg / 2;
    let c_pts: Vec<Rational> = (0..=c_deg).map(|v| Rational::from_integer(v.into())).collect();
    let a_pts: Vec<Rational> = (0..=a_deg).map(|v| Rational::from_integer(v.into())).collect();
    let top = lowest + FRAME_ORDERS;

    // values[ia][ic][r]
    let mut values = vec![vec![Vec::new(); c_pts.len()]; a_pts.len()];
    for (ia, alpha) in a_pts.iter().enumerate() {
        for (ic, c) in c_pts.iter().enumerate() {
            let frame = Frame::new(beta.clone(), c.clone(), alpha.clone(), Rational::zero());
            let mut truncation = FRAME_ORDERS + 4;
            let e0 = loop {
                let e0 = engine::frame_residual(rec, &frame, truncation)?;
                if e0.truncation() > top {
                    break e0;
                }
                truncation += top + 1 - e0.truncation();
            };
            values[ia][ic] = (lowest..=top)
                .map(|r| e0.coeff(r).expect("within truncation"))
                .collect();
        }
    }

    Ok((0..=FRAME_ORDERS as usize)
        .map(|r| {
            // interpolate in c for each alpha sample, then in alpha per power of c
            let per_alpha: Vec<Vec<Rational>> = values
                .iter()
                .map(|row| {
                    let ys: Vec<Rational> = row.iter().map(|v| v[r].clone()).collect();
                    let mut p = QPoly::interpolate(&c_pts, &ys).0;
                    p.resize(c_deg + 1, Rational::zero());
                    p
                })
                .collect();
            let grid = (0..=c_deg)
                .map(|m| {
                    let ys: Vec<Rational> = per_alpha.iter().map(|p| p[m].clone()).collect();
                    let mut q = QPoly::interpolate(&a_pts, &ys).0;
                    q.resize(a_deg + 1, Rational::zero());
                    q
                })
                .collect();
            Bivariate(grid)
        })
        .collect())
}

fn unique_root(poly: &QPoly, parameter: &str) -> Result<Rational, EngineError> {
    let roots = poly.rational_roots().map_err(|detail| EngineError::NoRationalRoot {
        parameter: parameter.into(),
        detail,
    })?;
    match roots.len() {
        0 => Err(EngineError::NoRationalRoot {
            parameter: parameter.into(),
            detail: format!("{} has no rational root", describe(poly)),
        }),
        1 => Ok(roots.into_iter().next().unwrap()),
        _ => Err(EngineError::AmbiguousRoot {
            parameter: parameter.into(),
            candidates: roots,
        }),
    }
}

fn describe(p: &QPoly) -> String {
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("({})*z^{i}", crate::rational::to_string(c)))
        .collect();
    terms.join(" + ")
}

/// Frame `(beta, c, alpha, kappa = 0)` for the dominant formal solution of `rec`.
pub fn frame_solve(rec: &Recurrence) -> Result<Frame, EngineError> {
    let beta = newton_beta(rec);
    for j in 1..=rec.order() {
        let v = &beta * BigInt::from(2 * j);
        if !v.is_integer() {
            return Err(EngineError::Ramification { j, value: v });
        }
    }
    let two_beta = (&beta * BigInt::from(2)).to_integer().to_i64().unwrap_or(0);
    let lowest = rec
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, p)| p.degree().map(|d| two_beta * j as i64 - 2 * d as i64))
        .min()
        .unwrap_or(0);

    let orders = symbolic_orders(rec, &beta, lowest)?;
    let mut c: Option<Rational> = None;
    let mut alpha: Option<Rational> = None;
    for (offset, b) in orders.iter().enumerate() {
        let order = lowest + offset as i64;
        match (&c, &alpha) {
            (Some(_), Some(_)) => break,
            (Some(cv), None) => {
                let p = b.in_alpha(cv);
                check_constant(&p, order)?;
                if !p.is_zero() {
                    alpha = Some(unique_root(&p, "alpha")?);
                }
            }
            (None, Some(av)) => {
                let p = b.in_c(av);
                check_constant(&p, order)?;
                if !p.is_zero() {
                    c = Some(unique_root(&p, "c")?);
                }
            }
            (None, None) => match (b.depends_on_c(), b.depends_on_alpha()) {
                (false, false) => {
                    let k = b.constant();
                    if !k.is_zero() {
                        return Err(constant_residual(order, &k));
                    }
                }
                (true, false) => c = Some(unique_root(&b.in_c(&Rational::zero()), "c")?),
                (false, true) => alpha = Some(unique_root(&b.in_alpha(&Rational::zero()), "alpha")?),
                (true, true) => {
                    return Err(EngineError::NoRationalRoot {
                        parameter: "c, alpha".into(),
                        detail: format!("order x^{order} couples both parameters"),
                    })
                }
            },
        }
    }
    let missing = |name: &str| EngineError::NoRationalRoot {
        parameter: name.into(),
        detail: "not determined by the lowest residual orders".into(),
    };
    Ok(Frame::new(
        beta,
        c.ok_or_else(|| missing("c"))?,
        alpha.ok_or_else(|| missing("alpha"))?,
        Rational::zero(),
    ))
}

fn check_constant(p: &QPoly, order: i64) -> Result<(), EngineError> {
    if p.degree() == Some(0) {
        return Err(constant_residual(order, &p.coeffs()[0]));
    }
    Ok(())
}

fn constant_residual(order: i64, k: &Rational) -> EngineError {
    EngineError::NoRationalRoot {
        parameter: "frame".into(),
        detail: format!(
            "residual at x^{order} is the nonzero constant {}; the recurrence needs a frame outside exp(beta(n ln n - n) + c sqrt(n) + alpha ln n)",
            crate::rational::to_string(k)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = QPoly::new(vec![ratio(1, 3), int(-2), int(0), ratio(5, 7)]);
        let xs: Vec<Rational> = (0..4).map(int).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(QPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn rational_roots_found() {
        // (2z - 1)(z + 3) z = 2z^3 + 5z^2 - 3z
        let p = QPoly::new(vec![int(0), int(-3), int(5), int(2)]);
        assert_eq!(p.rational_roots().unwrap(), vec![int(-3), int(0), ratio(1, 2)]);
        let q = QPoly::new(vec![int(-2), int(0), int(1)]);
        assert!(q.rational_roots().unwrap().is_empty());
        let lin = QPoly::new(vec![ratio(-1, 2), ratio(3, 4)]);
        assert_eq!(lin.rational_roots().unwrap(), vec![ratio(2, 3)]);
    }

    #[test]
    fn beta_from_degrees() {
        let a85 = Recurrence::from_i64(&[&[1], &[-1], &[1, -1]]).unwrap();
        assert_eq!(newton_beta(&a85), ratio(1, 2));
        let fact = Recurrence::from_i64(&[&[1], &[0, -1]]).unwrap();
        assert_eq!(newton_beta(&fact), int(1));
        let constant = Recurrence::from_i64(&[&[1], &[-1]]).unwrap();
        assert_eq!(newton_beta(&constant), int(0));
    }

    #[test]
    fn a85_frame() {
        let rec = Recurrence::from_i64(&[&[1], &[-1], &[1, -1]]).unwrap();
        let f = frame_solve(&rec).unwrap();
        assert_eq!(f, Frame::new(ratio(1, 2), int(1), int(0), int(0)));
    }

    #[test]
    fn factorial_and_constant_frames() {
        let fact = Recurrence::from_i64(&[&[1], &[0, -1]]).unwrap();
        assert_eq!(
            frame_solve(&fact).unwrap(),
            Frame::new(int(1), int(0), ratio(1, 2), int(0))
        );
        let constant = Recurrence::from_i64(&[&[1], &[-1]]).unwrap();
        assert_eq!(
            frame_solve(&constant).unwrap(),
            Frame::new(int(0), int(0), int(0), int(0))
        );
    }

    #[test]
    fn geometric_growth_is_outside_the_template() {
        let rec = Recurrence::from_i64(&[&[1], &[-2]]).unwrap();
        assert!(matches!(
            frame_solve(&rec),
            Err(EngineError::NoRationalRoot { .. })
        ));
    }

    #[test]
    fn odd_ramification_rejected() {
        // t_n = n t_(n-3): beta = 1/3
        let rec = Recurrence::from_i64(&[&[1], &[], &[], &[0, -1]]).unwrap();
        assert!(matches!(
            frame_solve(&rec),
            Err(EngineError::Ramification { .. })
        ));
    }
}
