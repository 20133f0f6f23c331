//! Involution numbers `t_n` (OEIS A000085) by four independent exact routes.
//!
//! The recurrence is the fast path; the closed sum, the exponential generating
//! function and brute-force enumeration exist to cross-check it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("brute-force enumeration is limited to n <= {max}, got {n}")]
    InputTooLarge { n: usize, max: usize },
    #[error("EGF coefficient {n} times n! is not an integer")]
    NonIntegral { n: usize },
}

pub const BRUTE_FORCE_MAX: usize = 10;

/// `t_0 ..= t_N` from `t_n = t_(n-1) + (n-1) t_(n-2)`, `t_0 = t_1 = 1`.
pub fn seq_recurrence(n_max: usize) -> Vec<BigInt> {
    let mut t = Vec::with_capacity(n_max + 1);
    t.push(BigInt::one());
    if n_max >= 1 {
        t.push(BigInt::one());
    }
    for n in 2..=n_max {
        let next = &t[n - 1] + &t[n - 2] * BigInt::from(n - 1);
        t.push(next);
    }
    t
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(n + 1);
    f.push(BigInt::one());
    for i in 1..=n {
        let next = &f[i - 1] * BigInt::from(i);
        f.push(next);
    }
    f
}

/// `sum_{k=0}^{n/2} n! / ((n-2k)! 2^k k!)`, each term from a factorial table.
///
/// The `k = 0` term counts the identity permutation.
pub fn seq_sum(n: usize) -> BigInt {
    let f = factorials(n);
    (0..=n / 2)
        .map(|k| {
            let den = &f[n - 2 * k] * (BigInt::one() << k) * &f[k];
            let (q, r) = f[n].div_rem(&den);
            debug_assert!(r.is_zero());
            q
        })
        .sum()
}

/// `n! [z^n] e^z e^(z^2/2)` for `n = 0 ..= N`.
///
/// Both factors are held over one common denominator so the convolution is an
/// integer one; the final division by that denominator must be exact.
pub fn seq_egf(n_max: usize) -> Result<Vec<BigInt>, SeqError> {
    let f = factorials(n_max);
    let half = n_max / 2;
    // 1/m! = exp_num[m] / N!
    let exp_num: Vec<BigInt> = (0..=n_max).map(|m| &f[n_max] / &f[m]).collect();
    // 1/(2^i i!) = gauss_num[i] / (2^H H!)
    let gauss_den = (BigInt::one() << half) * &f[half];
    let gauss_num: Vec<BigInt> = (0..=half)
        .map(|i| &gauss_den / ((BigInt::one() << i) * &f[i]))
        .collect();
    let common = &f[n_max] * &gauss_den;
    (0..=n_max)
        .map(|n| {
            let acc: BigInt = (0..=n / 2)
                .map(|i| &exp_num[n - 2 * i] * &gauss_num[i])
                .sum();
            let (q, r) = (acc * &f[n]).div_rem(&common);
            if r.is_zero() {
                Ok(q)
            } else {
                Err(SeqError::NonIntegral { n })
            }
        })
        .collect()
}

/// Counts permutations `σ` of `{0..n}` with `σ∘σ = id` by visiting all `n!` of them.
pub fn brute_force_involutions(n: usize) -> Result<BigInt, SeqError> {
    if n > BRUTE_FORCE_MAX {
        return Err(SeqError::InputTooLarge {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let is_involution = |p: &[usize]| p.iter().enumerate().all(|(i, &j)| p[j] == i);
    let mut count: u64 = u64::from(is_involution(&perm));
    // Heap's algorithm, iterative form
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if is_involution(&perm) {
                count += 1;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(BigInt::from(count))
}

/// Number of decimal digits of `|v|` (`1` for zero) and its leading `count` digits.
pub fn digit_summary(v: &BigInt, count: usize) -> (usize, String) {
    let s = v.magnitude().to_string();
    let lead = s.chars().take(count).collect();
    (s.len(), lead)
}
