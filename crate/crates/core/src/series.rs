//! Exact power series for the wheel coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{factorial, Rational};

/// Coefficients of `log f` for a series `f` with constant term 1.
fn log_series(f: &[Rational]) -> Vec<Rational> {
    let n = f.len();
    let mut g = vec![Rational::zero(); n];
    for m in 1..n {
        let mut acc = Rational::from_integer(BigInt::from(m)) * &f[m];
        for k in 1..m {
            acc -= Rational::from_integer(BigInt::from(k)) * &g[k] * &f[m - k];
        }
        g[m] = acc / Rational::from_integer(BigInt::from(m));
    }
    g
}

/// `sinh(y/2)/(y/2)` as a series in `t = y²`, through `t^n`.
fn sinhc_half(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| Rational::new(BigInt::one(), BigInt::from(4).pow(k as u32) * factorial(2 * k + 1)))
        .collect()
}

/// `b_{2i}`: the coefficient of `y^{2i}` in `(1/2) log(sinh(y/2)/(y/2))`.
pub fn bernoulli_coeff(i: usize) -> Rational {
    wheel_coefficients(i).pop().unwrap_or_else(Rational::zero)
}

/// `[b_2, b_4, .., b_{2n}]`.
pub fn wheel_coefficients(n: usize) -> Vec<Rational> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    log_series(&sinhc_half(n)).into_iter().skip(1).map(|g| g * &half).collect()
}

/// Classical Bernoulli numbers with `B_1 = -1/2`.
pub fn classical_bernoulli(m: usize) -> Rational {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for k in 1..=m {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(k + 1)));
    }
    b.swap_remove(m)
}
