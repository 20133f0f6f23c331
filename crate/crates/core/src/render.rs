//! LaTeX rendering of an expansion in powers of `n^(-1/2)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numeric::ConnectionConstant;
use crate::rational::Rational;
use crate::recurrence::{Expansion, Frame};

/// `n^{e/2}` for `e >= 1`.
fn half_power(e: usize) -> String {
    match e {
        1 => r"\sqrt{n}".into(),
        2 => "n".into(),
        _ if e.is_multiple_of(2) => format!("n^{{{}}}", e / 2),
        _ => format!(r"n^{{\frac{{{e}}}{{2}}}}"),
    }
}

fn term(a: &Rational, i: usize) -> String {
    let sign = if a.is_negative() { "-" } else { "+" };
    let num = a.numer().abs();
    let den = a.denom();
    let denom = if den.is_one() {
        half_power(i)
    } else {
        format!("{den} {}", half_power(i))
    };
    format!(r"{sign}\frac{{{num}}}{{{denom}}}")
}

/// `1+ \frac{7}{24 \sqrt{n}}-\frac{119}{1152 n}...` without the order term.
pub fn series_latex(exp: &Expansion) -> String {
    let mut s = String::from("1");
    let mut first = true;
    for (i, a) in exp.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let t = term(a, i + 1);
        if first && !a.is_negative() {
            s.push_str("+ ");
            s.push_str(&t[1..]);
        } else {
            s.push_str(&t);
        }
        first = false;
    }
    s
}

/// `O(\frac{1}{n^{(K+1)/2}})`.
pub fn order_latex(k: usize) -> String {
    format!(r"O(\frac{{1}}{{{}}})", half_power(k + 1))
}

fn coeff_n(r: &Rational, var: &str) -> String {
    if r.is_one() {
        return var.to_string();
    }
    if r.denom().is_one() {
        return format!("{}{var}", r.numer());
    }
    if r.numer() == &BigInt::from(1) {
        return format!("{var}/{}", r.denom());
    }
    format!("{}{var}/{}", r.numer(), r.denom())
}

fn signed(r: &Rational, body: &str, out: &mut String) {
    if r.is_zero() {
        return;
    }
    let abs = r.abs();
    let piece = match (body.is_empty(), abs.denom().is_one()) {
        (true, true) => abs.numer().to_string(),
        (true, false) => format!("{}/{}", abs.numer(), abs.denom()),
        (false, _) => coeff_n(&abs, body),
    };
    if r.is_negative() {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
    out.push_str(&piece);
}

/// `n^{n/2}e^{-n/2+\sqrt{n}-1/4}` style prefactor for a frame.
pub fn frame_latex(frame: &Frame) -> String {
    let mut s = String::new();
    if !frame.beta.is_zero() {
        s.push_str(&format!("n^{{{}}}", coeff_n(&frame.beta, "n")));
    }
    if !frame.alpha.is_zero() {
        let a = &frame.alpha;
        let e = if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        };
        s.push_str(&format!("n^{{{e}}}"));
    }
    let mut e = String::new();
    signed(&-frame.beta.clone(), "n", &mut e);
    signed(&frame.c, r"\sqrt{n}", &mut e);
    signed(&frame.kappa, "", &mut e);
    if !e.is_empty() {
        s.push_str(&format!("e^{{{e}}}"));
    }
    s
}

/// Full display `t_n = C F(n) (1 + ... + O(...))`.
pub fn expansion_latex(exp: &Expansion, constant: Option<&ConnectionConstant>) -> String {
    let mut pre = String::new();
    if let Some(c) = constant.and_then(ConnectionConstant::latex) {
        pre.push_str(&c);
        pre.push(' ');
    }
    pre.push_str(&frame_latex(&exp.frame));
    let pre = if pre.is_empty() { String::new() } else { format!(r"{pre} \, \cdot ") };
    format!(
        r"t_n \, = \, {pre}\left({} + {}\right)",
        series_latex(exp),
        order_latex(exp.K())
    )
}
