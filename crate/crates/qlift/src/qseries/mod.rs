//! Exact coefficient rings and truncated q-series on the q^(1/24) grid.
//!
//! * [`Rational`], [`FieldElem`] — exact coefficients (big rationals,
//!   optionally a + b·√d in a fixed quadratic field).
//! * [`Series24`] — the sparse truncated series with its operator algebra:
//!   sums, Cauchy products, inverses/quotients, U_m/V_m, twists, sieves,
//!   Θ = q·d/dq, and numeric evaluation.
//! * [`gen_binomial`], [`rankin_cohen`] — generalized binomials and the
//!   Rankin-Cohen bracket (weights may be half-integral).

mod field;
mod series;

pub use field::{fmt_rational, rat, ratio, FieldElem, Rational};
pub use series::{gen_binomial, rankin_cohen, Series24};

/// Sorted list of the positive divisors of `n` (n ≥ 1) by trial division.
pub(crate) fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0 requested");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Whether `n` (n ≥ 1) has no repeated prime factor.
pub(crate) fn is_square_free(n: u64) -> bool {
    assert!(n >= 1);
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}
