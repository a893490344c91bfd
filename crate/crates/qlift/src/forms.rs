//! Concrete modular-form constructors.
//!
//! This module builds the specific q-expansions the rest of the crate
//! manipulates:
//!
//! * the Dedekind eta expansion and arbitrary [`EtaQuotient`]s, together with
//!   weight/character metadata ([`ghn_meta`]), cusp orders and the least
//!   common denominator of those orders;
//! * the transformation multiplier of eta as an exact 24th root of unity
//!   ([`eta_multiplier_nu`]);
//! * the classified table of twelve theta rows — weight-1/2 and weight-3/2
//!   series `Σ χ(n) n^ν q^(n²/D)` that admit eta-quotient expressions
//!   ([`theta_table`], [`theta_series_build`]);
//! * Bernoulli numbers/polynomials, generalized Bernoulli numbers and exact
//!   `L(1−k, χ)` values, feeding two-character Eisenstein series
//!   ([`eisenstein_pair`]) and the classical `E₄`, `E₆`, `Δ`, `θ`;
//! * the two worked eigenbasis fixtures over `ℚ(√−11)` and `ℚ(√−14)`
//!   ([`fixtures_examples`]);
//! * level/character bookkeeping for U/V/twist operators on forms with an
//!   eta-multiplier component ([`uv_meta_transition`]).

use crate::chars::{kronecker, Parity, RealChar};
use crate::qseries::{divisors, rat, ratio, FieldElem, Rational, Series24};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

// ---------------------------------------------------------------------------
// Eta and eta-quotients
// ---------------------------------------------------------------------------

/// The eta series on the universal grid: support exactly the indices `n²`
/// with `gcd(n, 6) = 1`, coefficient `kronecker(12, n)`.  (Equivalently
/// `q^(1/24) Π (1 − q^n)` by the pentagonal-number theorem.)
pub fn eta_series(prec: u64) -> Series24 {
    let mut s = Series24::zero(prec);
    let mut n: u64 = 1;
    while n * n < prec {
        if n % 2 != 0 && n % 3 != 0 {
            s.set(n * n, FieldElem::from_int(kronecker(12, n as i64)));
        }
        n += 1;
    }
    s
}

/// `η(δz)` truncated to `prec` grid indices.
fn eta_dilated(delta: u64, prec: u64) -> Series24 {
    assert!(delta >= 1);
    if delta == 1 {
        return eta_series(prec);
    }
    let sub = prec.div_ceil(delta);
    eta_series(sub).op_v(delta).truncated(prec)
}

/// A formal product `Π η(δz)^(r_δ)` with distinct positive dilations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotient {
    /// Build from (dilation, exponent) pairs; duplicates merge, zero
    /// exponents drop, factors sort by dilation.
    pub fn new(factors: &[(u64, i64)]) -> Self {
        let mut merged: std::collections::BTreeMap<u64, i64> = std::collections::BTreeMap::new();
        for &(delta, r) in factors {
            assert!(delta >= 1, "eta dilation must be positive");
            *merged.entry(delta).or_insert(0) += r;
        }
        merged.retain(|_, r| *r != 0);
        EtaQuotient {
            factors: merged.into_iter().collect(),
        }
    }

    /// The (dilation, exponent) pairs, sorted by dilation.
    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// Twice the weight: `Σ r_δ`.
    pub fn weight2(&self) -> i64 {
        self.factors.iter().map(|&(_, r)| r).sum()
    }

    /// `Σ δ·r_δ` — the valuation numerator on the universal grid (the order
    /// of the quotient at infinity is this divided by 24).
    pub fn sum_delta_r(&self) -> i64 {
        self.factors.iter().map(|&(d, r)| d as i64 * r).sum()
    }

    /// Replace every dilation δ by `m·δ` (the quotient evaluated at `mz`).
    pub fn dilate(&self, m: u64) -> Self {
        assert!(m >= 1);
        EtaQuotient {
            factors: self.factors.iter().map(|&(d, r)| (d * m, r)).collect(),
        }
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(delta, r)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "eta({delta})")?;
            if r != 1 {
                write!(f, "^{r}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// Parse literals like `eta(1)^15*eta(5)^-3`; `^1` may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let mut factors: Vec<(u64, i64)> = Vec::new();
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        skip_ws(&mut pos);
        if s[pos..].trim() == "1" {
            return Ok(EtaQuotient::new(&[]));
        }
        loop {
            skip_ws(&mut pos);
            if !s[pos..].starts_with("eta(") {
                return Err(err(pos, "expected `eta(`"));
            }
            pos += 4;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let delta: u64 = s[start..pos]
                .parse()
                .map_err(|_| err(start, "expected positive dilation"))?;
            if delta == 0 {
                return Err(err(start, "dilation must be positive"));
            }
            if pos >= bytes.len() || bytes[pos] != b')' {
                return Err(err(pos, "expected `)`"));
            }
            pos += 1;
            let mut exp: i64 = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let start = pos;
                if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                    pos += 1;
                }
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exp = s[start..pos]
                    .parse()
                    .map_err(|_| err(start, "expected integer exponent"))?;
            }
            factors.push((delta, exp));
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            if bytes[pos] != b'*' {
                return Err(err(pos, "expected `*` between factors"));
            }
            pos += 1;
        }
        Ok(EtaQuotient::new(&factors))
    }
}

/// Expand an eta-quotient to `prec` grid indices.
///
/// The valuation `Σ δ·r_δ / 24` must be non-negative (negative q-powers are
/// rejected); the expansion is exact through index `prec − 1`.
pub fn eta_quotient_series(e: &EtaQuotient, prec: u64) -> Result<Series24> {
    assert!(prec >= 1);
    let v_num: u64 = e
        .factors
        .iter()
        .filter(|&&(_, r)| r > 0)
        .map(|&(d, r)| d * r as u64)
        .sum();
    let v_den: u64 = e
        .factors
        .iter()
        .filter(|&&(_, r)| r < 0)
        .map(|&(d, r)| d * r.unsigned_abs())
        .sum();
    if v_num < v_den {
        return Err(Error::NegativeValuation(format!(
            "eta quotient {e} has order (Σ δ·r_δ)/24 = {}/24 at infinity",
            v_num as i64 - v_den as i64
        )));
    }
    // Work with enough headroom that dividing by the denominator (valuation
    // v_den) still leaves `prec` exact indices.
    let work = prec + v_den;
    let mut num = Series24::one(work);
    let mut den = Series24::one(work);
    for &(delta, r) in &e.factors {
        let factor = eta_dilated(delta, work).pow(r.unsigned_abs());
        if r > 0 {
            num = &num * &factor;
        } else {
            den = &den * &factor;
        }
    }
    let q = num.div(&den);
    let keep = prec.min(q.prec());
    Ok(q.truncated(keep))
}

// ---------------------------------------------------------------------------
// Weight / character / cusp metadata
// ---------------------------------------------------------------------------

/// Metadata of a form: twice the weight, level, real character, and the
/// eta-multiplier power `r mod 24` (0 for integer-weight / theta-multiplier
/// forms).  `ghn_ok` records whether both integrality congruences
/// (`Σ δ·r_δ ≡ 0` and `N·Σ r_δ/δ ≡ 0 mod 24`) hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMeta {
    pub weight2: i64,
    pub level: u64,
    pub character: RealChar,
    pub eta_power: i64,
    pub ghn_ok: bool,
}

impl fmt::Display for FormMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "weight2={} level={} character={} eta_power={} ghn_ok={}",
            self.weight2, self.level, self.character, self.eta_power, self.ghn_ok
        )
    }
}

/// Weight, character and eta-power metadata of an eta-quotient at level `N`.
///
/// For even `Σ r_δ` the character is `d ↦ ((−1)^k s / d)` with
/// `k = Σ r_δ / 2` and `s = Π δ^(r_δ)`; only the square-free kernel and the
/// sign matter, and a kernel `≡ 3 (mod 4)` is realized as the Kronecker
/// symbol of four times itself (same values at odd arguments, zero at even
/// ones, making it periodic).  For odd `Σ r_δ` the same formula is applied to
/// the rounded-down weight; the table of theta rows remains the authority on
/// half-integral multipliers.  Never fails: congruence violations only clear
/// the `ghn_ok` flag.
pub fn ghn_meta(e: &EtaQuotient, level: u64) -> FormMeta {
    assert!(level >= 1);
    let weight2 = e.weight2();
    let k_floor = weight2.div_euclid(2);
    // Square-free kernel of Π_{r_δ odd} δ.
    let mut kernel: u64 = 1;
    for &(delta, r) in &e.factors {
        if r % 2 != 0 {
            kernel *= delta;
        }
    }
    let mut p = 2u64;
    while p * p <= kernel {
        while kernel % (p * p) == 0 {
            kernel /= p * p;
        }
        p += 1;
    }
    let d_eff = if k_floor % 2 == 0 {
        kernel as i64
    } else {
        -(kernel as i64)
    };
    // d ≡ 3 (mod 4) would not be periodic at even arguments; 4d agrees on
    // odd arguments and vanishes on even ones.
    let d_char = if d_eff.rem_euclid(4) == 3 {
        4 * d_eff
    } else {
        d_eff
    };
    let character = if d_char == 1 {
        RealChar::trivial()
    } else {
        RealChar::kron(d_char)
    };
    let sum_dr = e.sum_delta_r();
    let eta_power = sum_dr.rem_euclid(24);
    // N·Σ r_δ/δ must be an integer divisible by 24 (checked exactly).
    let mut n_sum = Rational::zero();
    for &(delta, r) in &e.factors {
        n_sum += ratio(level as i64, delta as i64) * rat(r);
    }
    let ghn_ok = weight2 % 2 == 0
        && sum_dr.rem_euclid(24) == 0
        && n_sum.is_integer()
        && (n_sum.numer() % BigInt::from(24)).is_zero();
    FormMeta {
        weight2,
        level,
        character,
        eta_power,
        ghn_ok,
    }
}

/// Order of vanishing of the eta-quotient at the cusp `1/d` of level `N`:
/// `(1/24) Σ_δ gcd(d, δ)² r_δ / δ` (in the local variable of width
/// `N / gcd(d², N)` — the raw order, not scaled by the width).
pub fn cusp_order(e: &EtaQuotient, level: u64, d: u64) -> Rational {
    assert!(level >= 1 && d >= 1 && level % d == 0, "cusp denominator must divide the level");
    let mut acc = Rational::zero();
    for &(delta, r) in &e.factors {
        let g = d.gcd(&delta);
        acc += ratio((g * g) as i64, delta as i64) * rat(r);
    }
    acc / rat(24)
}

/// Least positive `D` such that `D·ord_(1/d)` is an integer for every
/// divisor `d` of the level.
pub fn denominator_d(e: &EtaQuotient, level: u64) -> u64 {
    let mut d_lcm: u64 = 1;
    for d in divisors(level) {
        let ord = cusp_order(e, level, d);
        let den = ord
            .denom()
            .abs()
            .to_u64()
            .expect("cusp-order denominator exceeds u64");
        d_lcm = d_lcm.lcm(&den);
    }
    d_lcm
}

// ---------------------------------------------------------------------------
// The eta transformation multiplier
// ---------------------------------------------------------------------------

/// An exact 24th root of unity `e(exp24/24)`, the value of the eta
/// multiplier on one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaMultiplier {
    exp24: u8,
}

impl EtaMultiplier {
    fn from_exp(x: i64) -> Self {
        EtaMultiplier {
            exp24: x.rem_euclid(24) as u8,
        }
    }

    /// The exponent `x` in `e(x/24)`, normalized to `0..24`.
    pub fn exponent(&self) -> u8 {
        self.exp24
    }

    /// Numeric value `exp(2πi·x/24)`.
    pub fn value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * self.exp24 as f64 / 24.0,
        )
    }
}

impl fmt::Display for EtaMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({}/24)", self.exp24)
    }
}

/// The multiplier `ν` of eta on a determinant-one integer matrix
/// `(a b; c d)`: the root of unity with `η((az+b)/(cz+d)) =
/// ν·(cz+d)^(1/2)·η(z)` (principal square root).
///
/// For `c > 0` the two-case closed formula applies (odd `c` carries a
/// Jacobi-symbol prefactor `(d/c)`, even `c` carries `(c/d)`; a prefactor of
/// −1 folds in as +12 on the exponent).  `c = 0` is the translation case
/// `η(z + b) = e(b/24)η(z)`, and `c < 0` reduces through
/// `ν(−γ) = i·ν(γ)`.  Panics on a non-unimodular matrix.
pub fn eta_multiplier_nu(gamma: [i64; 4]) -> EtaMultiplier {
    let [a, b, c, d] = gamma;
    assert_eq!(a * d - b * c, 1, "eta multiplier needs determinant one");
    if c == 0 {
        // a = d = ±1.
        return if d > 0 {
            EtaMultiplier::from_exp(b)
        } else {
            EtaMultiplier::from_exp(6 - b)
        };
    }
    if c < 0 {
        let base = eta_multiplier_nu([-a, -b, -c, -d]);
        return EtaMultiplier::from_exp(base.exp24 as i64 + 6);
    }
    let (mut x, prefactor) = if c % 2 != 0 {
        (
            (a + d) * c - b * d * (c * c - 1) - 3 * c,
            kronecker(d, c),
        )
    } else {
        (
            (a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d,
            kronecker(c, d),
        )
    };
    assert!(prefactor != 0, "multiplier prefactor vanished on a unimodular matrix");
    if prefactor == -1 {
        x += 12;
    }
    EtaMultiplier::from_exp(x)
}

// ---------------------------------------------------------------------------
// Theta rows
// ---------------------------------------------------------------------------

/// How a theta row is realized in terms of eta: either a single quotient or
/// an integer combination of quotients.
#[derive(Debug, Clone)]
pub enum ThetaRealization {
    Quotient(EtaQuotient),
    Combination(Vec<(i64, EtaQuotient)>),
}

/// One row of the theta classification: the series
/// `Σ_{n≥1} χ(n) n^ν q^(n²/D)` together with the level, character and
/// eta-power of its realization as (a combination of) eta-quotients.
#[derive(Debug, Clone)]
pub struct ThetaEntry {
    /// Row name, e.g. `theta:even:3`.
    pub name: &'static str,
    /// Exponent denominator `D ∈ {8, 24}`.
    pub d: u64,
    /// Character of the theta sum.
    pub chi: RealChar,
    /// 0 for the weight-1/2 family, 1 for the weight-3/2 family.
    pub nu: u8,
    /// Level of the realization.
    pub level: u64,
    /// Character of the realization.
    pub psi: RealChar,
    /// Eta-multiplier power of the realization.
    pub eta_power: i64,
    pub realization: ThetaRealization,
}

/// All twelve rows: six of weight 1/2 (`ν = 0`) and six of weight 3/2
/// (`ν = 1`), the last two of which are integer combinations of quotients
/// rather than single quotients.
pub fn theta_table() -> Vec<ThetaEntry> {
    let eq = |factors: &[(u64, i64)]| ThetaRealization::Quotient(EtaQuotient::new(factors));
    vec![
        ThetaEntry {
            name: "theta:even:1",
            d: 8,
            chi: RealChar::indicator(2),
            nu: 0,
            level: 8,
            psi: RealChar::kron(-4),
            eta_power: 3,
            realization: eq(&[(2, 2), (1, -1)]),
        },
        ThetaEntry {
            name: "theta:even:2",
            d: 8,
            chi: RealChar::kron(8),
            nu: 0,
            level: 32,
            psi: RealChar::kron(-8),
            eta_power: 3,
            realization: eq(&[(1, 1), (4, 1), (2, -1)]),
        },
        ThetaEntry {
            name: "theta:even:3",
            d: 24,
            chi: RealChar::kron(12),
            nu: 0,
            level: 1,
            psi: RealChar::trivial(),
            eta_power: 1,
            realization: eq(&[(1, 1)]),
        },
        ThetaEntry {
            name: "theta:even:4",
            d: 24,
            chi: RealChar::kron(24),
            nu: 0,
            level: 32,
            psi: RealChar::kron(8),
            eta_power: 1,
            realization: eq(&[(2, 3), (1, -1), (4, -1)]),
        },
        ThetaEntry {
            name: "theta:even:5",
            d: 24,
            chi: RealChar::indicator(6),
            nu: 0,
            level: 144,
            psi: RealChar::kron(12),
            eta_power: 1,
            realization: eq(&[(2, 1), (3, 2), (1, -1), (6, -1)]),
        },
        ThetaEntry {
            name: "theta:even:6",
            d: 24,
            chi: &RealChar::kron(8) * &RealChar::indicator(3),
            nu: 0,
            level: 288,
            psi: RealChar::kron(24),
            eta_power: 1,
            realization: eq(&[(1, 1), (4, 1), (6, 5), (2, -2), (3, -2), (12, -2)]),
        },
        ThetaEntry {
            name: "theta:odd:1",
            d: 8,
            chi: RealChar::kron(-4),
            nu: 1,
            level: 1,
            psi: RealChar::trivial(),
            eta_power: 3,
            realization: eq(&[(1, 3)]),
        },
        ThetaEntry {
            name: "theta:odd:2",
            d: 8,
            chi: RealChar::kron(-8),
            nu: 1,
            level: 32,
            psi: RealChar::kron(8),
            eta_power: 3,
            realization: eq(&[(2, 9), (1, -3), (4, -3)]),
        },
        ThetaEntry {
            name: "theta:odd:3",
            d: 24,
            chi: &RealChar::kron(-3) * &RealChar::indicator(2),
            nu: 1,
            level: 8,
            psi: RealChar::kron(-4),
            eta_power: 1,
            realization: eq(&[(1, 5), (2, -2)]),
        },
        ThetaEntry {
            name: "theta:odd:4",
            d: 24,
            chi: RealChar::kron(-24),
            nu: 1,
            level: 32,
            psi: RealChar::kron(-8),
            eta_power: 1,
            realization: eq(&[(2, 13), (1, -5), (4, -5)]),
        },
        ThetaEntry {
            name: "theta:odd:5",
            d: 8,
            chi: &RealChar::kron(-4) * &RealChar::indicator(3),
            nu: 1,
            level: 9,
            psi: RealChar::trivial(),
            eta_power: 3,
            realization: ThetaRealization::Combination(vec![
                (1, EtaQuotient::new(&[(1, 3)])),
                (3, EtaQuotient::new(&[(9, 3)])),
            ]),
        },
        ThetaEntry {
            name: "theta:odd:6",
            d: 8,
            chi: &RealChar::kron(-8) * &RealChar::indicator(3),
            nu: 1,
            level: 288,
            psi: RealChar::kron(8),
            eta_power: 3,
            realization: ThetaRealization::Combination(vec![
                (1, EtaQuotient::new(&[(2, 9), (1, -3), (4, -3)])),
                (-3, EtaQuotient::new(&[(18, 9), (9, -3), (36, -3)])),
            ]),
        },
    ]
}

/// Build the row's theta sum `Σ_{n≥1} χ(n) n^ν q^((24/D)·n²/24)` directly.
pub fn theta_series_build(entry: &ThetaEntry, prec: u64) -> Series24 {
    assert!(entry.d == 8 || entry.d == 24, "unsupported denominator");
    let step = 24 / entry.d;
    let mut s = Series24::zero(prec);
    let mut n: u64 = 1;
    while step * n * n < prec {
        let mut c = entry.chi.eval(n as i64);
        if entry.nu == 1 {
            c *= n as i64;
        }
        if c != 0 {
            s.set(step * n * n, FieldElem::from_int(c));
        }
        n += 1;
    }
    s
}

/// Expand the row's eta-quotient realization.
pub fn theta_realization_series(entry: &ThetaEntry, prec: u64) -> Result<Series24> {
    match &entry.realization {
        ThetaRealization::Quotient(e) => eta_quotient_series(e, prec),
        ThetaRealization::Combination(terms) => {
            let mut acc = Series24::zero(prec);
            for (c, e) in terms {
                let series = eta_quotient_series(e, prec)?;
                acc = &acc + &series.scale(&FieldElem::from_int(*c));
            }
            Ok(acc)
        }
    }
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and L-values
// ---------------------------------------------------------------------------

fn binom_bigint(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// Bernoulli number `B_k` (convention `B_1 = −1/2`).
pub fn bernoulli_number(k: u32) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    b.push(Rational::one());
    for m in 1..=k as u64 {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom_bigint(m + 1, j as u64)) * bj;
        }
        b.push(-acc / rat(m as i64 + 1));
    }
    b[k as usize].clone()
}

/// Bernoulli polynomial `B_k(x) = Σ_j C(k, j) B_j x^(k−j)` at a rational.
pub fn bernoulli_poly_at(k: u32, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut x_pow = Rational::one();
    // Accumulate in descending j so each step multiplies one more power of x.
    for j in (0..=k as u64).rev() {
        acc += Rational::from_integer(binom_bigint(k as u64, j)) * bernoulli_number(j as u32) * &x_pow;
        x_pow *= x;
    }
    acc
}

/// Generalized Bernoulli number `B_(k,χ) = M^(k−1) Σ_{a=1}^{M} χ(a) B_k(a/M)`
/// over the character's full modulus `M`.
pub fn gen_bernoulli(k: u32, chi: &RealChar) -> Rational {
    assert!(k >= 1);
    let m = chi.modulus();
    let mut acc = Rational::zero();
    for a in 1..=m {
        let c = chi.eval(a as i64);
        if c != 0 {
            let term = bernoulli_poly_at(k, &ratio(a as i64, m as i64));
            acc += term * rat(c);
        }
    }
    let mut scale = Rational::one();
    for _ in 1..k {
        scale *= rat(m as i64);
    }
    acc * scale
}

/// Exact special value `L(1 − k, χ) = −B_(k,χ)/k`.
pub fn l_neg(k: u32, chi: &RealChar) -> Rational {
    -gen_bernoulli(k, chi) / rat(k as i64)
}

// ---------------------------------------------------------------------------
// Eisenstein series and classical forms
// ---------------------------------------------------------------------------

/// An Eisenstein expansion plus a flag: `parity_ok = false` means the
/// requested `(k, ψ, φ)` has the wrong parity, the space is zero, and the
/// series returned is the zero series.
#[derive(Debug, Clone)]
pub struct EisensteinSeries {
    pub series: Series24,
    pub parity_ok: bool,
}

/// The two-character Eisenstein series of weight `k`: coefficient of `qⁿ` is
/// `Σ_{d|n} ψ(n/d) φ(d) d^(k−1)`, with constant term `L(1−k, φ)/2` when `ψ`
/// is the trivial modulus-1 character and 0 otherwise.
pub fn eisenstein_pair(k: u32, psi: &RealChar, phi: &RealChar, prec: u64) -> EisensteinSeries {
    assert!(k >= 1 && prec >= 1);
    let want_odd = k % 2 == 1;
    let is_odd = (psi.parity() == Parity::Odd) != (phi.parity() == Parity::Odd);
    if want_odd != is_odd {
        return EisensteinSeries {
            series: Series24::zero(prec),
            parity_ok: false,
        };
    }
    let mut s = Series24::zero(prec);
    if psi.is_trivial() {
        s.set(
            0,
            FieldElem::from_rational(l_neg(k, phi) / rat(2)),
        );
    }
    let n_max = (prec - 1) / 24;
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for d in divisors(n) {
            let sign = psi.eval((n / d) as i64) * phi.eval(d as i64);
            if sign != 0 {
                let term = BigInt::from(d).pow(k - 1);
                if sign > 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
        }
        if !acc.is_zero() {
            s.set(24 * n, FieldElem::from_rational(Rational::from_integer(acc)));
        }
    }
    EisensteinSeries {
        series: s,
        parity_ok: true,
    }
}

/// Classical `E₄ = 1 + 240 Σ σ₃(n) qⁿ`.
pub fn e4(prec: u64) -> Series24 {
    eisenstein_pair(4, &RealChar::trivial(), &RealChar::trivial(), prec)
        .series
        .scale_rat(&rat(240))
}

/// Classical `E₆ = 1 − 504 Σ σ₅(n) qⁿ`.
pub fn e6(prec: u64) -> Series24 {
    eisenstein_pair(6, &RealChar::trivial(), &RealChar::trivial(), prec)
        .series
        .scale_rat(&rat(-504))
}

/// The discriminant cusp form `Δ = η(z)²⁴`.
///
/// Computed as the 8th power of the sparse closed form
/// `η³ = Σ_{m≥0} (−1)^m (2m+1) q^((2m+1)²/8)`, chaining multiplications
/// against the sparse cube so no dense-by-dense product ever occurs; this
/// keeps high-precision requests (tens of thousands of grid indices) cheap.
pub fn delta(prec: u64) -> Series24 {
    let mut eta3 = Series24::zero(prec);
    let mut m = 0u64;
    loop {
        let n = 2 * m + 1;
        let idx = 3 * n * n;
        if idx >= prec {
            break;
        }
        let sign = if m % 2 == 0 { 1 } else { -1 };
        eta3.set(idx, FieldElem::from_int(sign * n as i64));
        m += 1;
    }
    if eta3.is_zero() {
        // Precision too low to see the leading term q¹ = q^(24/24).
        return Series24::zero(prec);
    }
    let mut acc = eta3.clone();
    for _ in 1..8 {
        acc = &acc * &eta3;
    }
    acc.truncated(prec)
}

/// The weight-1/2 unary theta series `θ(z) = 1 + 2 Σ_{n≥1} q^(n²)` on the
/// integer grid.
pub fn theta_z(prec: u64) -> Series24 {
    let mut s = Series24::zero(prec);
    s.set(0, FieldElem::one());
    let mut n: u64 = 1;
    while 24 * n * n < prec {
        s.set(24 * n * n, FieldElem::from_int(2));
        n += 1;
    }
    s
}

// ---------------------------------------------------------------------------
// Worked example fixtures
// ---------------------------------------------------------------------------

/// One worked eigenbasis fixture: the four-element triangular basis
/// `f_0..f_3`, the eigenform combinations `g_1..g_4` over a quadratic field,
/// the exact coordinates of the U-image of the associated quotient input,
/// and the first coefficients of the printed lift.
#[derive(Debug, Clone)]
pub struct ExampleFixture {
    pub name: &'static str,
    /// Lift index and dilation level (5 for the first example, 3 for the
    /// second).
    pub t: u64,
    /// The input form is `η(z)^eta_exponent ·` the named base form.
    pub eta_exponent: u64,
    /// `"E4"` or `"E6"`.
    pub base_form: &'static str,
    /// Weight of the decomposition space (the f/g bases).
    pub basis_weight: u32,
    /// Discriminant of the coefficient field of `g_2, g_3`.
    pub disc: i64,
    /// Level of the decomposition space.
    pub level: u64,
    /// Character of the decomposition space.
    pub character: RealChar,
    pub f_basis: Vec<Series24>,
    pub g_basis: Vec<Series24>,
    /// Coordinates of `(quotient input)|U_t` in `g_basis`.
    pub alphas: Vec<FieldElem>,
    /// First five integer coefficients of the final lift.
    pub printed_lift: [i64; 5],
    pub lmfdb_label: &'static str,
}

impl ExampleFixture {
    /// The base form (`E₄` or `E₆`) at the given precision.
    pub fn base_series(&self, prec: u64) -> Series24 {
        match self.base_form {
            "E4" => e4(prec),
            "E6" => e6(prec),
            other => panic!("unknown base form {other}"),
        }
    }

    /// The half-integral input `η(z)^e · base` at the given precision.
    pub fn input_series(&self, prec: u64) -> Series24 {
        let eta_pow = eta_series(prec).pow(self.eta_exponent);
        &eta_pow * &self.base_series(prec)
    }

    /// The integer-weight quotient input
    /// `η(z)^e / η(tz)^(e/t) · base` whose `U_t` image decomposes in the
    /// g-basis.
    pub fn quotient_input(&self, prec: u64) -> Series24 {
        let den_exp = self.eta_exponent / self.t;
        let quo = EtaQuotient::new(&[
            (1, self.eta_exponent as i64),
            (self.t, -(den_exp as i64)),
        ]);
        let series = eta_quotient_series(&quo, prec).expect("quotient input has positive order");
        &series * &self.base_series(prec)
    }
}

/// Both fixtures.
#[derive(Debug, Clone)]
pub struct ExampleCatalog {
    pub ex1: ExampleFixture,
    pub ex2: ExampleFixture,
}

/// Build the fixture catalog with all series truncated to `prec` grid
/// indices.
pub fn fixtures_examples(prec: u64) -> ExampleCatalog {
    let eqs = |factors: &[(u64, i64)]| {
        eta_quotient_series(&EtaQuotient::new(factors), prec)
            .expect("fixture basis quotients have non-negative order")
    };

    // --- First fixture: weight-6 space of level 5, field ℚ(√−11). ---
    let f0 = eqs(&[(1, 15), (5, -3)]);
    let f1 = eqs(&[(1, 9), (5, 3)]);
    let f2 = eqs(&[(1, 3), (5, 9)]);
    let f3 = eqs(&[(1, -3), (5, 15)]);
    let w11 = |a: i64, b: i64| FieldElem::new(rat(a), rat(b), -11);
    let g1 = &(&f0.scale_rat(&ratio(-67, 5)) + &f1.scale_rat(&rat(-200))) + &f2.scale_rat(&rat(-625));
    let g2 = &f1 + &f2.scale(&w11(9, -2));
    let g3 = g2.conj();
    let g4 = &(&f1 + &f2.scale_rat(&rat(40))) + &f3.scale_rat(&rat(335));
    // The coefficient with negative imaginary part pairs with g₂ (whose
    // f₁-coefficient 9 − 2√−11 also has negative imaginary part); the exact
    // linear solve is unique and leaves zero residual with this orientation.
    let alpha1 = FieldElem::new(ratio(-193125, 67), ratio(-1591875, 737), -11);
    let ex1 = ExampleFixture {
        name: "ex1",
        t: 5,
        eta_exponent: 5,
        base_form: "E4",
        basis_weight: 6,
        disc: -11,
        level: 5,
        character: RealChar::kron(5),
        f_basis: vec![f0, f1, f2, f3],
        g_basis: vec![g1, g2, g3, g4],
        alphas: vec![
            FieldElem::from_rational(ratio(-5, 67)),
            alpha1.clone(),
            alpha1.conj(),
            FieldElem::zero(),
        ],
        printed_lift: [1, -32, -243, 1024, 5766],
        lmfdb_label: "6.12.a.a",
    };

    // --- Second fixture: weight-9 space of level 3, field ℚ(√−14). ---
    let f0 = eqs(&[(1, 27), (3, -9)]);
    let f1 = eqs(&[(1, 3), (3, 15)]);
    let f2 = eqs(&[(1, 15), (3, 3)]);
    let f3 = eqs(&[(1, -9), (3, 27)]);
    let w14 = |a: i64, b: i64| FieldElem::new(rat(a), rat(b), -14);
    let g1 = &(&f1.scale_rat(&rat(270)) + &f2) + &f3.scale_rat(&rat(7281));
    let g2 = &(&f0.scale_rat(&ratio(809, 27)) + &f1.scale_rat(&rat(2187))) + &f2.scale_rat(&rat(810));
    let g3 = &f1.scale(&w14(15, -6)) + &f2;
    let g4 = g3.conj();
    let alpha3 = FieldElem::new(ratio(5296914, 809), ratio(-6348861, 809), -14);
    let ex2 = ExampleFixture {
        name: "ex2",
        t: 3,
        eta_exponent: 9,
        base_form: "E6",
        basis_weight: 9,
        disc: -14,
        level: 3,
        character: RealChar::kron(-3),
        f_basis: vec![f0, f1, f2, f3],
        g_basis: vec![g1, g2, g3, g4],
        alphas: vec![
            FieldElem::zero(),
            FieldElem::from_rational(ratio(27, 809)),
            alpha3.clone(),
            alpha3.conj(),
        ],
        printed_lift: [1, -512, -13092, 262144, 6546750],
        lmfdb_label: "2.20.a.a",
    };

    ExampleCatalog { ex1, ex2 }
}

// ---------------------------------------------------------------------------
// Level/character transitions under U, V and twists
// ---------------------------------------------------------------------------

/// A grid operator whose effect on (level, character, eta-power) is tracked
/// by [`uv_meta_transition`].
#[derive(Debug, Clone)]
pub enum GridOp {
    U(u64),
    V(u64),
    Twist(RealChar),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// The quadratic character attached to an odd prime: `(·/p)`, stored as a
/// Kronecker top for `p ≡ 1 (mod 4)` and in bottom (Jacobi) mode otherwise.
fn chi_p(p: u64) -> RealChar {
    RealChar::jacobi_bottom(p)
}

/// Track how `U_m`, `V_m`, or a twist transforms the (level, character,
/// eta-power) metadata of a form.
///
/// Integer-weight forms (`eta_power = 0`) follow the classical rules for any
/// `m ≥ 1`.  Forms with a nonzero eta-multiplier power follow the prime case
/// table (`m ∈ {2, 3}` with divisibility side conditions on the power, or
/// `m = p ≥ 5` prime); combinations outside the table return
/// [`Error::Uncovered`].  The `eta_power` branch conditions are evaluated on
/// the stored representative in `0..24` (most specific first for `U_2`).
/// Twisting by `ψ` multiplies the level by `modulus(ψ)²` and the character
/// by `ψ²`.
pub fn uv_meta_transition(meta: &FormMeta, op: &GridOp) -> Result<FormMeta> {
    let mut out = meta.clone();
    let n = meta.level;
    let r = meta.eta_power.rem_euclid(24);
    let uncovered = |msg: String| -> Result<FormMeta> { Err(Error::Uncovered(msg)) };
    match op {
        GridOp::Twist(psi) => {
            let m = psi.modulus();
            out.level = n * m * m;
            out.character = &(&meta.character * psi) * psi;
            Ok(out)
        }
        GridOp::U(1) | GridOp::V(1) => Ok(out),
        GridOp::U(m) | GridOp::V(m) if r == 0 => {
            // Classical integer-weight rules: V_m multiplies the level by m;
            // U_m multiplies by m except when m divides the level.
            if *m == 0 {
                return uncovered("operator index must be positive".into());
            }
            out.level = match op {
                GridOp::U(_) if n % m == 0 => n,
                _ => n * m,
            };
            Ok(out)
        }
        GridOp::U(m) | GridOp::V(m) if !is_prime(*m) => {
            uncovered(format!("composite index {m} with nonzero eta power"))
        }
        GridOp::U(2) => {
            if r % 2 != 0 {
                return uncovered("U_2 with odd eta power".into());
            }
            if r % 16 == 0 {
                out.level = 2 * n;
            } else if r % 4 == 0 {
                out.level = 4 * n;
            } else {
                out.level = 8 * n;
                if (r / 2) % 2 != 0 {
                    out.character = &out.character * &RealChar::kron(-4);
                }
            }
            out.eta_power = (2 * r).rem_euclid(24);
            Ok(out)
        }
        GridOp::V(2) => {
            if r % 2 != 0 {
                return uncovered("V_2 with odd eta power".into());
            }
            out.level = 8 * n / 4u64.gcd(&n);
            if (r / 2) % 2 != 0 {
                out.character = &out.character * &RealChar::kron(-4);
            }
            out.eta_power = (2 * r).rem_euclid(24);
            Ok(out)
        }
        GridOp::U(3) => {
            if r % 3 != 0 {
                return uncovered("U_3 with eta power not divisible by 3".into());
            }
            out.level = if n % 3 != 0 {
                3 * n
            } else if n % 9 != 0 {
                n
            } else {
                n / 3
            };
            if r % 2 != 0 {
                out.character = &out.character * &chi_p(3);
            }
            out.eta_power = (3 * r).rem_euclid(24);
            Ok(out)
        }
        GridOp::V(3) => {
            out.level = if n % 3 == 0 || r % 3 == 0 { 3 * n } else { 9 * n };
            if r % 2 != 0 {
                out.character = &out.character * &chi_p(3);
            }
            out.eta_power = (3 * r).rem_euclid(24);
            Ok(out)
        }
        GridOp::U(p) | GridOp::V(p) => {
            // p ≥ 5 prime.
            let p = *p;
            out.level = match op {
                GridOp::U(_) if n % p == 0 => n,
                _ => n * p,
            };
            if r % 2 != 0 {
                out.character = &out.character * &chi_p(p);
            }
            out.eta_power = ((p % 24) as i64 * r).rem_euclid(24);
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// Named series for the CLI
// ---------------------------------------------------------------------------

/// Resolve a named form: `E4`, `E6`, `delta`, `theta:even:1..6`,
/// `theta:odd:1..6`, or a fixture entry `ex1.f0`..`ex2.g4` (plus
/// `ex1.input`/`ex2.input` for the half-integral inputs).
pub fn named_series(name: &str, prec: u64) -> Result<Series24> {
    match name {
        "E4" | "e4" => return Ok(e4(prec)),
        "E6" | "e6" => return Ok(e6(prec)),
        "delta" => return Ok(delta(prec)),
        "eta" => return Ok(eta_series(prec)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("theta:") {
        for entry in theta_table() {
            if entry.name == format!("theta:{rest}") {
                return Ok(theta_series_build(&entry, prec));
            }
        }
        return Err(Error::UnknownLabel(name.to_string()));
    }
    if let Some((which, member)) = name.split_once('.') {
        let catalog = fixtures_examples(prec);
        let fixture = match which {
            "ex1" => catalog.ex1,
            "ex2" => catalog.ex2,
            _ => return Err(Error::UnknownLabel(name.to_string())),
        };
        return match member {
            "f0" => Ok(fixture.f_basis[0].clone()),
            "f1" => Ok(fixture.f_basis[1].clone()),
            "f2" => Ok(fixture.f_basis[2].clone()),
            "f3" => Ok(fixture.f_basis[3].clone()),
            "g1" => Ok(fixture.g_basis[0].clone()),
            "g2" => Ok(fixture.g_basis[1].clone()),
            "g3" => Ok(fixture.g_basis[2].clone()),
            "g4" => Ok(fixture.g_basis[3].clone()),
            "input" => Ok(fixture.input_series(prec)),
            _ => Err(Error::UnknownLabel(name.to_string())),
        };
    }
    Err(Error::UnknownLabel(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn eqs(factors: &[(u64, i64)], prec: u64) -> Series24 {
        eta_quotient_series(&EtaQuotient::new(factors), prec).unwrap()
    }

    /// Integer-grid prefix of a series as i64s (panics on non-integers).
    fn int_prefix(s: &Series24, count: u64) -> Vec<i64> {
        (1..=count)
            .map(|n| {
                let c = s.coeff_int(n);
                assert!(c.is_rational() && c.a().is_integer());
                c.a().to_integer().to_i64().unwrap()
            })
            .collect()
    }

    #[test]
    fn eta_support_and_signs() {
        let prec = 5000;
        let e = eta_series(prec);
        for (idx, coeff) in e.support() {
            let n = (idx as f64).sqrt().round() as u64;
            assert_eq!(n * n, idx, "support index {idx} is not a square");
            assert_eq!(n.gcd(&6), 1);
            assert_eq!(*coeff, FieldElem::from_int(kronecker(12, n as i64)));
        }
        assert_eq!(e.coeff(1), FieldElem::one());
        assert_eq!(e.coeff(25), FieldElem::from_int(-1));
        assert_eq!(e.coeff(2), FieldElem::zero());
        // Count: every n coprime to 6 with n² < prec appears.
        let expected = (1..)
            .take_while(|n| n * n < prec)
            .filter(|n| n % 6 == 1 || n % 6 == 5)
            .count();
        assert_eq!(e.terms(), expected);
    }

    #[test]
    fn eta_matches_euler_product() {
        // q^(1/24) Π (1 − q^m): build the product side directly.
        let n_max = 120u64;
        let mut product = Series24::one(24 * n_max + 1);
        for m in 1..=n_max {
            let mut factor = Series24::one(24 * n_max + 1);
            factor.set(24 * m, FieldElem::from_int(-1));
            product = &product * &factor;
            product = product.truncated(24 * n_max + 1);
        }
        let shifted = product.shift_up(1);
        let e = eta_series(shifted.prec());
        assert!(e.eq_through(&shifted, shifted.prec()));
    }

    #[test]
    fn eta_quotient_delta_prefix() {
        let d = delta(24 * 7);
        assert_eq!(int_prefix(&d, 6), vec![1, -24, 252, -1472, 4830, -6048]);
        assert_eq!(d.stride(), 24);
    }

    #[test]
    fn eta_quotient_triangular_row() {
        // η(2z)²/η(z) = Σ_{n≥0} q^(3(2n+1)²/24): indices 3 + 24·n(n+1)/2.
        let s = eqs(&[(2, 2), (1, -1)], 400);
        let expected: Vec<u64> = (0..).map(|n| 3 + 24 * n * (n + 1) / 2).take_while(|&i| i < 400).collect();
        let support: Vec<u64> = s.support().map(|(i, _)| i).collect();
        assert_eq!(support, expected);
        for (_, c) in s.support() {
            assert_eq!(*c, FieldElem::one());
        }
    }

    #[test]
    fn eta_quotient_trivial_and_errors() {
        let one = eqs(&[(1, 1), (1, -1)], 100);
        assert!(one.eq_through(&Series24::one(100), 100));
        assert!(matches!(
            eta_quotient_series(&EtaQuotient::new(&[(1, -1)]), 100),
            Err(Error::NegativeValuation(_))
        ));
    }

    #[test]
    fn eta_squared_coefficient() {
        // η² = q^(2/24)(1 − 2q + ...): index 26 carries −2.
        let s = eqs(&[(1, 2)], 60);
        assert_eq!(s.coeff(2), FieldElem::one());
        assert_eq!(s.coeff(26), FieldElem::from_int(-2));
    }

    #[test]
    fn eta_quotient_literal_round_trip() {
        let e: EtaQuotient = "eta(1)^15*eta(5)^-3".parse().unwrap();
        assert_eq!(e.factors(), &[(1, 15), (5, -3)]);
        assert_eq!(e.to_string(), "eta(1)^15*eta(5)^-3");
        let e2: EtaQuotient = "eta(2)".parse().unwrap();
        assert_eq!(e2.factors(), &[(2, 1)]);
        assert_eq!(e2.to_string(), "eta(2)");
        let one: EtaQuotient = "1".parse().unwrap();
        assert!(one.factors().is_empty());
        assert!("eta(0)".parse::<EtaQuotient>().is_err());
        assert!("eta(2".parse::<EtaQuotient>().is_err());
        assert!("eta(2)^".parse::<EtaQuotient>().is_err());
    }

    #[test]
    fn ghn_meta_examples() {
        let m = ghn_meta(&EtaQuotient::new(&[(1, 24)]), 1);
        assert_eq!(m.weight2, 24);
        assert!(m.character.is_trivial());
        assert_eq!(m.eta_power, 0);
        assert!(m.ghn_ok);

        let m = ghn_meta(&EtaQuotient::new(&[(1, 15), (5, -3)]), 5);
        assert_eq!(m.weight2, 12);
        assert_eq!(m.character, RealChar::kron(5));
        assert!(m.ghn_ok);

        let m = ghn_meta(&EtaQuotient::new(&[(1, 9), (5, 3)]), 5);
        assert_eq!(m.weight2, 12);
        assert_eq!(m.character, RealChar::kron(5));
        assert!(m.ghn_ok);

        // Half-integral: flagged, eta power reported mod 24.
        let m = ghn_meta(&EtaQuotient::new(&[(1, 1)]), 1);
        assert_eq!(m.weight2, 1);
        assert_eq!(m.eta_power, 1);
        assert!(!m.ghn_ok);

        // Weight-9 fixture space: character is the kronecker top −3.
        let m = ghn_meta(&EtaQuotient::new(&[(1, 27), (3, -9)]), 3);
        assert_eq!(m.weight2, 18);
        assert_eq!(m.character, RealChar::kron(-3));
        assert!(m.ghn_ok);
    }

    #[test]
    fn cusp_orders_and_denominators() {
        let eta = EtaQuotient::new(&[(1, 1)]);
        assert_eq!(cusp_order(&eta, 1, 1), ratio(1, 24));
        assert_eq!(denominator_d(&eta, 1), 24);

        let row = EtaQuotient::new(&[(2, 2), (1, -1)]);
        assert_eq!(cusp_order(&row, 2, 1), rat(0));
        assert_eq!(cusp_order(&row, 2, 2), ratio(1, 8));
        assert_eq!(denominator_d(&row, 8), 8);

        assert_eq!(denominator_d(&EtaQuotient::new(&[(1, 3)]), 1), 8);
        assert_eq!(denominator_d(&EtaQuotient::new(&[(1, 24)]), 1), 1);
    }

    #[test]
    fn eta_multiplier_exponents() {
        assert_eq!(eta_multiplier_nu([1, 1, 0, 1]).exponent(), 1);
        assert_eq!(eta_multiplier_nu([0, -1, 1, 0]).exponent(), 21);
        assert_eq!(eta_multiplier_nu([1, 0, 1, 1]).exponent(), 23);
        // Negating the matrix multiplies the value by i (adds 6).
        assert_eq!(eta_multiplier_nu([-1, 0, -1, -1]).exponent(), (23 + 6) % 24);
        assert_eq!(eta_multiplier_nu([-1, 0, 0, -1]).exponent(), 6);
    }

    #[test]
    #[should_panic(expected = "determinant one")]
    fn eta_multiplier_rejects_non_unimodular() {
        eta_multiplier_nu([2, 0, 0, 1]);
    }

    #[test]
    fn eta_multiplier_numeric_invariant() {
        // |η(γz) − ν(γ)(cz+d)^(1/2)η(z)| below 1e−8 at z = i, using the
        // principal square root.
        let prec = 2000;
        let e = eta_series(prec);
        let z = Complex64::new(0.0, 1.0);
        let matrices: [[i64; 4]; 6] = [
            [1, 0, 1, 1],
            [0, -1, 1, 0],
            [1, 1, 0, 1],
            [1, 0, 2, 1],   // even c
            [1, -1, 2, -1], // even c, negative d
            [2, 1, 3, 2],   // odd c > 1
        ];
        for gamma in matrices {
            let [a, b, c, d] = gamma;
            let cz_d = Complex64::new(d as f64, c as f64); // c·i + d at z = i
            let gz = (Complex64::new(b as f64, a as f64)) / cz_d; // (a·i + b)/(c·i + d)
            let lhs = e.eval_numeric(gz, 1e-12);
            let nu = eta_multiplier_nu(gamma).value();
            let rhs = nu * cz_d.sqrt() * e.eval_numeric(z, 1e-12);
            assert!(
                (lhs - rhs).norm() < 1e-8,
                "multiplier mismatch for {gamma:?}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn theta_rows_match_eta_realizations() {
        let prec = 2000;
        for entry in theta_table() {
            let built = theta_series_build(&entry, prec);
            let realized = theta_realization_series(&entry, prec).unwrap();
            assert!(
                built.eq_through(&realized, prec),
                "row {} disagrees with its eta realization (first mismatch {:?})",
                entry.name,
                built.first_mismatch(&realized, prec)
            );
        }
    }

    #[test]
    fn theta_row_shapes() {
        let table = theta_table();
        let eta_row = &table[2];
        assert!(theta_series_build(eta_row, 500).eq_through(&eta_series(500), 500));

        let cube = &table[6];
        let s = theta_series_build(cube, 200);
        assert_eq!(s.coeff(3), FieldElem::from_int(1));
        assert_eq!(s.coeff(27), FieldElem::from_int(-3));
        assert_eq!(s.coeff(75), FieldElem::from_int(5));
        assert_eq!(s.coeff(147), FieldElem::from_int(-7));

        // The two combination rows: supports avoid multiples of 3.
        for entry in [&table[10], &table[11]] {
            let s = theta_series_build(entry, 1000);
            for (idx, _) in s.support() {
                let n2 = idx / 3;
                let n = (n2 as f64).sqrt().round() as u64;
                assert_eq!(n * n, n2);
                assert_eq!(n % 3 != 0, true, "row {} has a multiple of 3", entry.name);
            }
        }
    }

    #[test]
    fn bernoulli_and_l_values() {
        assert_eq!(bernoulli_number(0), rat(1));
        assert_eq!(bernoulli_number(1), ratio(-1, 2));
        assert_eq!(bernoulli_number(4), ratio(-1, 30));
        assert_eq!(bernoulli_number(6), ratio(1, 42));
        assert_eq!(bernoulli_number(12), ratio(-691, 2730));
        assert_eq!(bernoulli_poly_at(1, &ratio(1, 2)), rat(0));
        assert_eq!(l_neg(4, &RealChar::trivial()), ratio(1, 120));
        // ζ(0) = −1/2.
        assert_eq!(l_neg(1, &RealChar::trivial()), ratio(-1, 2));
    }

    #[test]
    fn eisenstein_classical_normalization() {
        let e = eisenstein_pair(4, &RealChar::trivial(), &RealChar::trivial(), 24 * 3 + 1);
        assert!(e.parity_ok);
        assert_eq!(e.series.coeff(0), FieldElem::from_rational(ratio(1, 240)));
        assert_eq!(e.series.coeff_int(1), FieldElem::from_int(1));
        assert_eq!(e.series.coeff_int(2), FieldElem::from_int(9));

        // E₄³ − E₆² = 1728Δ pins all three classical constructors at once.
        let prec = 24 * 30 + 1;
        let lhs = &e4(prec).pow(3) - &e6(prec).pow(2);
        let rhs = delta(prec).scale_rat(&rat(1728));
        assert!(lhs.eq_through(&rhs, prec));
    }

    #[test]
    fn eisenstein_divisor_sum_examples() {
        // Weight 6, characters attached to 5: q² coefficients ±31.
        let g1 = eisenstein_pair(6, &RealChar::trivial(), &RealChar::jacobi_bottom(5), 100);
        assert_eq!(g1.series.coeff_int(1), FieldElem::from_int(1));
        assert_eq!(g1.series.coeff_int(2), FieldElem::from_int(-31));
        let g2 = eisenstein_pair(6, &RealChar::jacobi_bottom(5), &RealChar::trivial(), 100);
        assert_eq!(g2.series.coeff_int(2), FieldElem::from_int(31));
        // Nontrivial ψ ⇒ no constant term.
        assert_eq!(g2.series.coeff(0), FieldElem::zero());
    }

    #[test]
    fn eisenstein_parity_mismatch_flags_zero() {
        let e = eisenstein_pair(5, &RealChar::trivial(), &RealChar::trivial(), 100);
        assert!(!e.parity_ok);
        assert!(e.series.is_zero());
    }

    #[test]
    fn fixture_bases_match_eisenstein_identities() {
        let prec = 24 * 40 + 1;
        let cat = fixtures_examples(prec);

        // First fixture: g₁ and g₄ are the two-character Eisenstein series
        // of weight 6 attached to 5 (in the two orders).
        let g1 = eisenstein_pair(6, &RealChar::trivial(), &RealChar::kron(5), prec).series;
        assert!(
            cat.ex1.g_basis[0].eq_through(&g1, prec),
            "first mismatch {:?}",
            cat.ex1.g_basis[0].first_mismatch(&g1, prec)
        );
        let g4 = eisenstein_pair(6, &RealChar::kron(5), &RealChar::trivial(), prec).series;
        assert!(cat.ex1.g_basis[3].eq_through(&g4, prec));

        // Second fixture: same pair in weight 9 attached to −3.
        let g1 = eisenstein_pair(9, &RealChar::kron(-3), &RealChar::trivial(), prec).series;
        assert!(cat.ex2.g_basis[0].eq_through(&g1, prec));
        let g2 = eisenstein_pair(9, &RealChar::trivial(), &RealChar::kron(-3), prec).series;
        assert!(
            cat.ex2.g_basis[1].eq_through(&g2, prec),
            "first mismatch {:?}",
            cat.ex2.g_basis[1].first_mismatch(&g2, prec)
        );
    }

    #[test]
    fn fixture_shapes() {
        let prec = 24 * 10 + 1;
        let cat = fixtures_examples(prec);
        let vals: Vec<u64> = cat.ex1.f_basis.iter().map(|f| f.val().unwrap()).collect();
        assert_eq!(vals, vec![0, 24, 48, 72]);
        let vals: Vec<u64> = cat.ex2.f_basis.iter().map(|f| f.val().unwrap()).collect();
        assert_eq!(vals, vec![0, 48, 24, 72]);
        // Eigenform combinations are normalized: coefficient of q is 1.
        for g in cat.ex1.g_basis.iter().chain(cat.ex2.g_basis.iter()) {
            assert_eq!(g.coeff_int(1), FieldElem::one());
        }
        // Conjugate pairs.
        assert!(cat.ex1.g_basis[2].eq_through(&cat.ex1.g_basis[1].conj(), prec));
        assert_eq!(cat.ex1.alphas[1], cat.ex1.alphas[2].conj());
        assert_eq!(cat.ex2.alphas[3], cat.ex2.alphas[2].conj());
        // Input forms: valuation and grid class.
        let input = cat.ex1.input_series(200);
        assert_eq!(input.val().unwrap(), 5);
        assert_eq!(input.stride(), 24);
        let input = cat.ex2.input_series(200);
        assert_eq!(input.val().unwrap(), 9);
    }

    #[test]
    fn uv_meta_transitions() {
        let meta = |level, character: RealChar, eta_power| FormMeta {
            weight2: 1,
            level,
            character,
            eta_power,
            ghn_ok: false,
        };
        // V_p for p ≥ 5 multiplies the level by p and twists by (·/p).
        let m = uv_meta_transition(&meta(1, RealChar::trivial(), 1), &GridOp::V(5)).unwrap();
        assert_eq!(m.level, 5);
        assert_eq!(m.character, RealChar::jacobi_bottom(5));
        assert_eq!(m.eta_power, 5);
        // U_3 with 3 | r, 3 ∤ N.
        let m = uv_meta_transition(&meta(1, RealChar::trivial(), 9), &GridOp::U(3)).unwrap();
        assert_eq!(m.level, 3);
        assert_eq!(m.character, RealChar::jacobi_bottom(3));
        assert_eq!(m.eta_power, 3); // 27 mod 24
        // V_1 is the identity.
        let base = meta(7, RealChar::kron(8), 2);
        assert_eq!(uv_meta_transition(&base, &GridOp::V(1)).unwrap(), base);
        // U_2 requires an even power.
        assert!(uv_meta_transition(&meta(1, RealChar::trivial(), 5), &GridOp::U(2)).is_err());
        // U_2 on r = 2: level 8N, character gains (−4/·).
        let m = uv_meta_transition(&meta(1, RealChar::trivial(), 2), &GridOp::U(2)).unwrap();
        assert_eq!(m.level, 8);
        assert_eq!(m.character, RealChar::kron(-4));
        assert_eq!(m.eta_power, 4);
        // V_2 on r = 4: level 8N/gcd(4,N), no character change (r/2 even).
        let m = uv_meta_transition(&meta(4, RealChar::trivial(), 4), &GridOp::V(2)).unwrap();
        assert_eq!(m.level, 8);
        assert!(m.character.is_trivial());
        assert_eq!(m.eta_power, 8);
        // Integer-weight forms follow the classical rules for any m.
        let m = uv_meta_transition(&meta(6, RealChar::trivial(), 0), &GridOp::V(4)).unwrap();
        assert_eq!(m.level, 24);
        let m = uv_meta_transition(&meta(6, RealChar::trivial(), 0), &GridOp::U(6)).unwrap();
        assert_eq!(m.level, 6);
        // Twist by a modulus-m character: level N·m², character ψ².
        let m = uv_meta_transition(
            &meta(2, RealChar::trivial(), 1),
            &GridOp::Twist(RealChar::kron(12)),
        )
        .unwrap();
        assert_eq!(m.level, 2 * 144);
        assert_eq!(m.eta_power, 1);
    }

    #[test]
    fn named_series_resolution() {
        assert!(named_series("delta", 100).is_ok());
        assert!(named_series("E4", 100).is_ok());
        assert!(named_series("theta:odd:1", 100).is_ok());
        assert!(named_series("ex1.f0", 100).is_ok());
        assert!(named_series("ex2.g4", 100).is_ok());
        assert!(matches!(
            named_series("nope", 100),
            Err(Error::UnknownLabel(_))
        ));
    }
}
