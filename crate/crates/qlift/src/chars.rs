//! Real Dirichlet characters and Kronecker/Jacobi symbol evaluation.
//!
//! A [`RealChar`] is the product of up to three completely multiplicative
//! pieces: a Kronecker symbol `(D/·)` (top argument fixed), a coprimality
//! indicator `1_M`, and — for odd bottom arguments `r ≡ 3 (mod 4)`, where the
//! Jacobi-bottom character is odd — an explicit bottom-mode factor `(·/r)`.
//! Bottom arguments `r ≡ 1 (mod 4)` are converted to the equivalent
//! Kronecker-top form `(r/·)` at construction time; the two evaluation paths
//! are cross-checked in the test suite.

use num_integer::Integer;
use std::fmt;
use std::str::FromStr;

/// Jacobi symbol (a/m) for odd m ≥ 1, extended to all integers a by
/// reduction mod m. Returns 0 when gcd(a, m) > 1.
fn jacobi_odd(a: i64, m: u64) -> i64 {
    debug_assert!(m % 2 == 1 && m >= 1);
    let mut a = a.rem_euclid(m as i64) as u64;
    let mut m = m;
    let mut t = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}

/// Full Kronecker symbol (a/n): the completely multiplicative extension of
/// the Jacobi symbol to all integer bottom arguments, including 0, negative,
/// and even n.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut s = 1i64;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            s = -s;
        }
    }
    let e = n.trailing_zeros();
    n >>= e;
    if e > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = 1 for a ≡ ±1 (mod 8), −1 for a ≡ ±3 (mod 8).
        let r = a.rem_euclid(8);
        if (r == 3 || r == 5) && e % 2 == 1 {
            s = -s;
        }
    }
    s * jacobi_odd(a, n as u64)
}

/// Parity of a real character: the value at −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Real Dirichlet character `kronecker(top, ·) · (· / bottom) · 1_indicator`.
///
/// `top = 1`, `bottom = 1`, `indicator = 1` are the neutral settings; the
/// all-neutral character is the trivial character (identically 1 away from
/// nothing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealChar {
    top: i64,
    bottom: u64,
    indicator: u64,
}

impl RealChar {
    /// The trivial character (constant 1).
    pub fn trivial() -> Self {
        RealChar { top: 1, bottom: 1, indicator: 1 }
    }

    /// Kronecker character (d/·).
    pub fn kron(d: i64) -> Self {
        assert!(d != 0, "kronecker top argument must be nonzero");
        RealChar { top: d, bottom: 1, indicator: 1 }
    }

    /// Coprimality indicator 1_m.
    pub fn indicator(m: u64) -> Self {
        assert!(m >= 1, "indicator modulus must be positive");
        RealChar { top: 1, bottom: 1, indicator: m }
    }

    /// Jacobi-bottom character (·/r) for odd r ≥ 1.
    ///
    /// For r ≡ 1 (mod 4) this is the Kronecker character (r/·) and is stored
    /// that way; for r ≡ 3 (mod 4) the bottom form is kept explicitly and
    /// evaluated by periodic extension (value at n is the Jacobi symbol of
    /// n mod r over r).
    pub fn jacobi_bottom(r: u64) -> Self {
        assert!(r % 2 == 1, "Jacobi bottom argument must be odd");
        if r == 1 {
            RealChar::trivial()
        } else if r % 4 == 1 {
            RealChar::kron(r as i64)
        } else {
            RealChar { top: 1, bottom: r, indicator: 1 }
        }
    }

    /// Value at n, always in {−1, 0, 1}.
    pub fn eval(&self, n: i64) -> i64 {
        if self.indicator > 1 && n.gcd(&(self.indicator as i64)) != 1 {
            return 0;
        }
        let mut v = 1i64;
        if self.top != 1 {
            v *= kronecker(self.top, n);
        }
        if self.bottom > 1 {
            v *= jacobi_odd(n, self.bottom);
        }
        v
    }

    /// Parity: the value at −1 (0 never occurs there).
    pub fn parity(&self) -> Parity {
        if self.eval(-1) == 1 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// True for the all-neutral (trivial) character.
    pub fn is_trivial(&self) -> bool {
        self.top == 1 && self.bottom == 1 && self.indicator == 1
    }

    /// A modulus the character is periodic mod: lcm of the period of the
    /// Kronecker part (|D| when D ≡ 0, 1 mod 4, else 4|D|), the bottom
    /// argument, and the indicator modulus.
    pub fn modulus(&self) -> u64 {
        let top_period = if self.top == 1 {
            1
        } else {
            let d = self.top;
            let abs = d.unsigned_abs();
            if d.rem_euclid(4) <= 1 {
                abs
            } else {
                4 * abs
            }
        };
        top_period.lcm(&self.bottom).lcm(&self.indicator)
    }
}

/// Pointwise product of characters: tops multiply, bottoms multiply,
/// indicator moduli combine by lcm.
impl std::ops::Mul for &RealChar {
    type Output = RealChar;
    fn mul(self, rhs: &RealChar) -> RealChar {
        RealChar {
            top: self.top * rhs.top,
            bottom: self.bottom * rhs.bottom,
            indicator: self.indicator.lcm(&rhs.indicator),
        }
    }
}

impl std::ops::Mul for RealChar {
    type Output = RealChar;
    fn mul(self, rhs: RealChar) -> RealChar {
        &self * &rhs
    }
}

impl fmt::Display for RealChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.top != 1 {
            parts.push(format!("kron({})", self.top));
        }
        if self.bottom != 1 {
            parts.push(format!("jac({})", self.bottom));
        }
        if self.indicator != 1 {
            parts.push(format!("ind({})", self.indicator));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Character literals: `1`, or `*`-joined factors `kron(D)`, `ind(M)`,
/// `jac(R)`, e.g. `kron(-4)*ind(3)`.
impl FromStr for RealChar {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        let mut out = RealChar::trivial();
        for raw in s.split('*') {
            let tok = raw.trim();
            let pos = raw.as_ptr() as usize - s.as_ptr() as usize;
            let parse_err = |msg: &str| crate::Error::Parse { pos, msg: msg.to_string() };
            if tok == "1" {
                continue;
            }
            let (name, rest) = tok
                .split_once('(')
                .ok_or_else(|| parse_err("expected kron(D), ind(M), jac(R), or 1"))?;
            let arg = rest
                .strip_suffix(')')
                .ok_or_else(|| parse_err("missing closing parenthesis"))?;
            let factor = match name.trim() {
                "kron" => {
                    let d: i64 = arg.trim().parse().map_err(|_| parse_err("bad kron argument"))?;
                    if d == 0 {
                        return Err(parse_err("kron argument must be nonzero"));
                    }
                    RealChar::kron(d)
                }
                "ind" => {
                    let m: u64 = arg.trim().parse().map_err(|_| parse_err("bad ind argument"))?;
                    if m == 0 {
                        return Err(parse_err("ind argument must be positive"));
                    }
                    RealChar::indicator(m)
                }
                "jac" => {
                    let r: u64 = arg.trim().parse().map_err(|_| parse_err("bad jac argument"))?;
                    if r % 2 == 0 {
                        return Err(parse_err("jac argument must be odd"));
                    }
                    RealChar::jacobi_bottom(r)
                }
                other => return Err(parse_err(&format!("unknown factor `{other}`"))),
            };
            out = out * factor;
        }
        Ok(out)
    }
}
