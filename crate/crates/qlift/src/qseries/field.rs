//! Exact coefficients: big rationals and quadratic-field elements a + b·√d.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational p/q from a pair of integers.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Render a rational as `p/q`, or bare `p` when the denominator is 1.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element a + b·√d of ℚ(√d) for a fixed square-free d, or a plain rational
/// when d = 0.
///
/// Construction normalizes b = 0 to disc 0, so rational values compare equal
/// regardless of which extension produced them. Elements of two different
/// nonzero discs never combine: that is a panic, not an implicit embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    a: Rational,
    b: Rational,
    disc: i64,
}

/// Combined disc of two operands; panics on a genuine mismatch.
pub(crate) fn join_disc(d1: i64, d2: i64) -> i64 {
    if d1 == d2 || d2 == 0 {
        d1
    } else if d1 == 0 {
        d2
    } else {
        panic!("coefficient field mismatch: sqrt({d1}) vs sqrt({d2})");
    }
}

fn assert_square_free(d: i64) {
    assert!(d != 1, "disc 1 is degenerate; use disc 0 for rationals");
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            panic!("disc {d} is not square-free");
        }
        while m % p == 0 {
            m /= p;
        }
        p += 1;
    }
}

impl FieldElem {
    /// a + b·√d. Requires d square-free; b = 0 collapses to disc 0.
    pub fn new(a: Rational, b: Rational, disc: i64) -> Self {
        if b.is_zero() {
            return FieldElem { a, b, disc: 0 };
        }
        assert!(disc != 0, "nonzero sqrt part requires a nonzero disc");
        assert_square_free(disc);
        FieldElem { a, b, disc }
    }

    /// Pure rational element.
    pub fn from_rational(a: Rational) -> Self {
        FieldElem { a, b: Rational::zero(), disc: 0 }
    }

    /// Integer element.
    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// √d itself.
    pub fn sqrt_disc(disc: i64) -> Self {
        Self::new(Rational::zero(), Rational::one(), disc)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate a − b·√d.
    pub fn conj(&self) -> Self {
        FieldElem { a: self.a.clone(), b: -self.b.clone(), disc: self.disc }
    }

    /// Field norm a² − d·b² (a rational).
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat(self.disc) * &self.b * &self.b
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero field element");
        let n = self.norm();
        FieldElem::new(&self.a / &n, -&self.b / &n, self.disc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = FieldElem::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Numeric value as a complex double (√d is i·√|d| for d < 0).
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let a = self.a.to_f64().expect("rational out of f64 range");
        let b = self.b.to_f64().expect("rational out of f64 range");
        if self.disc >= 0 {
            num_complex::Complex64::new(a + b * (self.disc as f64).sqrt(), 0.0)
        } else {
            num_complex::Complex64::new(a, b * ((-self.disc) as f64).sqrt())
        }
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl From<Rational> for FieldElem {
    fn from(a: Rational) -> Self {
        FieldElem::from_rational(a)
    }
}

impl std::ops::Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        let disc = join_disc(self.disc, rhs.disc);
        FieldElem::new(&self.a + &rhs.a, &self.b + &rhs.b, disc)
    }
}

impl std::ops::Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        let disc = join_disc(self.disc, rhs.disc);
        FieldElem::new(&self.a - &rhs.a, &self.b - &rhs.b, disc)
    }
}

impl std::ops::Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        // Fast path: both operands rational.
        if self.b.is_zero() && rhs.b.is_zero() {
            return FieldElem::from_rational(&self.a * &rhs.a);
        }
        let disc = join_disc(self.disc, rhs.disc);
        let a = &self.a * &rhs.a + rat(disc) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        FieldElem::new(a, b, disc)
    }
}

impl std::ops::Div for &FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self * &rhs.inv()
    }
}

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { a: -self.a.clone(), b: -self.b.clone(), disc: self.disc }
    }
}

macro_rules! delegate_by_value {
    ($($trait:ident :: $method:ident),*) => {$(
        impl std::ops::$trait for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
    )*};
}
delegate_by_value!(Add::add, Sub::sub, Mul::mul, Div::div);

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", fmt_rational(&self.a), fmt_rational(&-&self.b), self.disc)
        } else {
            write!(f, "{} + {}*sqrt({})", fmt_rational(&self.a), fmt_rational(&self.b), self.disc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(a: (i64, i64), b: (i64, i64), d: i64) -> FieldElem {
        FieldElem::new(ratio(a.0, a.1), ratio(b.0, b.1), d)
    }

    #[test]
    fn rational_collapse_and_equality() {
        assert_eq!(elem((3, 1), (0, 1), -11), FieldElem::from_int(3));
        assert!(elem((0, 1), (0, 1), -14).is_zero());
    }

    #[test]
    fn arithmetic_in_quadratic_field() {
        // (9 − 2√−11)(9 + 2√−11) = 81 + 4·11 = 125.
        let x = elem((9, 1), (-2, 1), -11);
        let y = x.conj();
        assert_eq!(&x * &y, FieldElem::from_int(125));
        assert_eq!(x.norm(), rat(125));
        assert_eq!(&(&x * &x.inv()) - &FieldElem::one(), FieldElem::zero());
    }

    #[test]
    fn conjugation_is_ring_automorphism() {
        let xs = [
            elem((1, 2), (3, 5), -14),
            elem((-7, 3), (2, 1), -14),
            elem((0, 1), (1, 1), -14),
            FieldElem::from_int(4),
        ];
        for x in &xs {
            assert_eq!(x.conj().conj(), *x);
            for y in &xs {
                assert_eq!((x + y).conj(), &x.conj() + &y.conj());
                assert_eq!((x * y).conj(), &x.conj() * &y.conj());
            }
        }
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn disc_mixing_is_fatal() {
        let _ = &elem((1, 1), (1, 1), -11) + &elem((1, 1), (1, 1), -14);
    }

    #[test]
    fn rationals_embed_into_any_disc() {
        let x = elem((1, 1), (1, 1), -11);
        let three = FieldElem::from_int(3);
        assert_eq!(&x + &three, elem((4, 1), (1, 1), -11));
        assert_eq!(&three * &x, elem((3, 1), (3, 1), -11));
    }

    #[test]
    fn display_formats() {
        assert_eq!(FieldElem::from_rational(ratio(-3, 4)).to_string(), "-3/4");
        assert_eq!(elem((9, 1), (-2, 1), -11).to_string(), "9 - 2*sqrt(-11)");
        assert_eq!(elem((1, 2), (3, 5), -14).to_string(), "1/2 + 3/5*sqrt(-14)");
    }

    #[test]
    #[should_panic(expected = "square-free")]
    fn disc_must_be_square_free() {
        let _ = elem((0, 1), (1, 1), 12);
    }
}
