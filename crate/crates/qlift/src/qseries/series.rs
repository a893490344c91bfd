//! Truncated formal q-series on the universal q^(1/24) grid.
//!
//! A [`Series24`] stores grid index `n` ↦ coefficient, the index meaning the
//! exponent n/24. Integer-weight forms occupy indices divisible by 24;
//! eta-multiplier forms occupy one residue class mod 24; forms on the
//! q^(1/8) grid embed with index ×3. `prec` is the exclusive grid-index
//! bound below which coefficients are trusted: reading at or past it is a
//! contract violation, and every operation computes the tightest provable
//! bound for its output (documented per operation).

use super::field::{join_disc, rat, FieldElem, Rational};
use crate::chars::RealChar;
use num_complex::Complex64;
use num_integer::Integer;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse exact q-expansion Σ a(n)·q^(n/24) truncated below a grid index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series24 {
    coeffs: BTreeMap<u64, FieldElem>,
    prec: u64,
    /// Declared grid stride; only authoritative for series with fewer than
    /// two terms (see [`Series24::stride`]).
    default_stride: u64,
    disc: i64,
}

impl Series24 {
    /// Empty (zero) series trusted below `prec`.
    pub fn zero(prec: u64) -> Self {
        Series24 { coeffs: BTreeMap::new(), prec, default_stride: 24, disc: 0 }
    }

    /// The constant series 1.
    pub fn one(prec: u64) -> Self {
        Self::monomial(0, FieldElem::one(), prec)
    }

    /// c·q^(n/24).
    pub fn monomial(n: u64, c: FieldElem, prec: u64) -> Self {
        let mut s = Self::zero(prec);
        s.set(n, c);
        s
    }

    /// Integer-grid builder: coefficients f(0), f(1), …, f(n_max) of qⁿ at
    /// grid indices 24n, trusted through integer exponent n_max inclusive
    /// (prec = 24·n_max + 1).
    pub fn from_integer_fn(n_max: u64, mut f: impl FnMut(u64) -> FieldElem) -> Self {
        let mut s = Self::zero(24 * n_max + 1);
        for n in 0..=n_max {
            s.set(24 * n, f(n));
        }
        s
    }

    /// Insert/overwrite one coefficient. Zero coefficients are dropped; the
    /// index must be below `prec`; a nonzero quadratic disc must match the
    /// series' (a disc-0 series widens on first quadratic coefficient).
    pub fn set(&mut self, n: u64, c: FieldElem) {
        assert!(n < self.prec, "index {n} not below prec {}", self.prec);
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.disc = join_disc(self.disc, c.disc());
            self.coeffs.insert(n, c);
        }
    }

    /// Exclusive trusted grid-index bound.
    pub fn prec(&self) -> u64 {
        self.prec
    }

    /// Coefficient field disc (0 = plain rationals).
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Largest s ≥ 1 with all nonzero indices in a single residue class
    /// mod s: the gcd of index differences, or the declared default when
    /// fewer than two terms exist.
    pub fn stride(&self) -> u64 {
        if self.coeffs.len() < 2 {
            return self.default_stride;
        }
        let v = *self.coeffs.keys().next().unwrap();
        let mut g = 0u64;
        for n in self.coeffs.keys() {
            g = g.gcd(&(n - v));
        }
        g
    }

    /// Least nonzero grid index (None for the zero series).
    pub fn val(&self) -> Option<u64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient at grid index n. Reading at or beyond `prec` panics.
    pub fn coeff(&self, n: u64) -> FieldElem {
        assert!(n < self.prec, "read at grid index {n} beyond prec {}", self.prec);
        self.coeffs.get(&n).cloned().unwrap_or_else(FieldElem::zero)
    }

    /// Coefficient of the integer power qⁿ (grid index 24n).
    pub fn coeff_int(&self, n: u64) -> FieldElem {
        self.coeff(24 * n)
    }

    /// Iterate (grid index, coefficient) in increasing index order.
    pub fn support(&self) -> impl Iterator<Item = (u64, &FieldElem)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// Copy truncated to a smaller precision bound.
    pub fn truncated(&self, prec: u64) -> Self {
        assert!(prec <= self.prec, "cannot extend precision {} to {prec}", self.prec);
        let mut out = self.clone();
        out.prec = prec;
        out.coeffs.retain(|n, _| *n < prec);
        out
    }

    fn with_parts(
        coeffs: BTreeMap<u64, FieldElem>,
        prec: u64,
        default_stride: u64,
        disc: i64,
    ) -> Self {
        let mut s = Series24 { coeffs, prec, default_stride: default_stride.max(1), disc };
        s.coeffs.retain(|n, c| *n < prec && !c.is_zero());
        for c in s.coeffs.values() {
            s.disc = join_disc(s.disc, c.disc());
        }
        s
    }

    /// Scalar multiple c·f.
    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(self.prec);
            z.default_stride = self.default_stride;
            z.disc = join_disc(self.disc, c.disc());
            return z;
        }
        let coeffs = self.coeffs.iter().map(|(n, a)| (*n, a * c)).collect();
        Self::with_parts(coeffs, self.prec, self.default_stride, join_disc(self.disc, c.disc()))
    }

    /// Scalar multiple by a rational.
    pub fn scale_rat(&self, c: &Rational) -> Self {
        self.scale(&FieldElem::from_rational(c.clone()))
    }

    /// Galois conjugation applied to every coefficient.
    pub fn conj(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(n, a)| (*n, a.conj())).collect();
        Self::with_parts(coeffs, self.prec, self.default_stride, self.disc)
    }

    /// V_m: q^(n/24) ↦ q^(mn/24). Precision scales to m·prec.
    pub fn op_v(&self, m: u64) -> Self {
        assert!(m >= 1, "V_m needs m >= 1");
        let coeffs = self.coeffs.iter().map(|(n, c)| (n * m, c.clone())).collect();
        Self::with_parts(coeffs, self.prec.saturating_mul(m), self.default_stride.saturating_mul(m), self.disc)
    }

    /// U_m: keeps m-divisible indices, mapping n ↦ n/m. prec = ⌊prec/m⌋.
    pub fn op_u(&self, m: u64) -> Self {
        assert!(m >= 1, "U_m needs m >= 1");
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(n, _)| *n % m == 0)
            .map(|(n, c)| (n / m, c.clone()))
            .collect();
        let s = self.default_stride;
        Self::with_parts(coeffs, self.prec / m, s / s.gcd(&m), self.disc)
    }

    /// U_m as a modular operator on a series whose support lies in a single
    /// residue class c mod 24 (integer-weight forms have c = 0; fractional
    /// grids embed with c = r or 3r). The output is `op_u` restricted to the
    /// class m·c mod 24, which on each embedded grid is exactly b(n) = a(mn)
    /// in that grid's own indexing. When gcd(m, 24) = 1 this is `op_u`
    /// unchanged, since m² ≡ 1 (mod 24) makes the restriction vacuous.
    ///
    /// Panics if the support spans more than one class mod 24.
    pub fn op_u_class(&self, m: u64) -> Self {
        let mut classes = self.coeffs.keys().map(|n| n % 24);
        let Some(c) = classes.next() else {
            return self.op_u(m);
        };
        assert!(
            classes.all(|c2| c2 == c),
            "op_u_class needs single-class support; found classes {c} and another mod 24"
        );
        let raw = self.op_u(m);
        let keep = (m % 24) * c % 24;
        let coeffs = raw.coeffs.into_iter().filter(|(n, _)| n % 24 == keep).collect();
        Self::with_parts(coeffs, raw.prec, raw.default_stride, raw.disc)
    }

    /// Twist f ⊗ ψ on the declared grid: the coefficient at index n is
    /// multiplied by ψ(n/stride). Every nonzero index must be divisible by
    /// `stride` (24 for integer-weight twists, 1 on the eta-multiplier grid).
    pub fn twist(&self, psi: &RealChar, stride: u64) -> Self {
        assert!(stride >= 1);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| {
                assert!(n % stride == 0, "index {n} not divisible by twist stride {stride}");
                (*n, c * &FieldElem::from_int(psi.eval((n / stride) as i64)))
            })
            .collect();
        Self::with_parts(coeffs, self.prec, self.default_stride, self.disc)
    }

    /// Θ = q·d/dq: the coefficient at grid index n is multiplied by n/24.
    pub fn op_theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| (*n, c * &FieldElem::from_rational(ratio_u64(*n, 24))))
            .collect();
        Self::with_parts(coeffs, self.prec, self.default_stride, self.disc)
    }

    /// Sieve g_{a,b}: keep indices with (n/stride) ≡ a (mod b).
    pub fn sieve(&self, a: u64, b: u64, stride: u64) -> Self {
        assert!(b >= 1 && stride >= 1);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(n, _)| {
                assert!(*n % stride == 0, "index {n} not divisible by sieve stride {stride}");
                (*n / stride) % b == a % b
            })
            .map(|(n, c)| (*n, c.clone()))
            .collect();
        Self::with_parts(coeffs, self.prec, self.default_stride, self.disc)
    }

    /// Inverse of a series with valuation 0 and invertible leading
    /// coefficient, trusted below `target_prec` (≤ the input's own bound).
    /// Computed by the convolution recurrence c₀ = a₀⁻¹,
    /// cₙ = −a₀⁻¹ Σ_{k≥1} a_k c_{n−k}, run on the sub-grid the support
    /// actually occupies.
    pub fn inv(&self, target_prec: u64) -> Self {
        assert!(target_prec <= self.prec, "inverse target {target_prec} beyond prec {}", self.prec);
        let v = self.val().expect("inverse of the zero series");
        assert!(v == 0, "inverse needs valuation 0 (found grid index {v}); divide instead");
        let a0 = self.coeff(0);
        let a0_inv = a0.inv();
        // The support minus the constant sits on g·Z; the inverse does too.
        let mut g = 0u64;
        for n in self.coeffs.keys() {
            g = g.gcd(n);
        }
        let g = if g == 0 { 1 } else { g };
        let steps = (target_prec + g - 1) / g; // indices 0, g, 2g, … < target_prec
        let mut c: Vec<FieldElem> = Vec::with_capacity(steps as usize);
        c.push(a0_inv.clone());
        for i in 1..steps {
            let n = i * g;
            let mut acc = FieldElem::zero();
            for (k, ak) in self.coeffs.range(1..=n) {
                acc = &acc + &(ak * &c[((n - k) / g) as usize]);
            }
            c.push(&(-&a0_inv) * &acc);
        }
        let coeffs = c
            .into_iter()
            .enumerate()
            .map(|(i, x)| (i as u64 * g, x))
            .collect();
        Self::with_parts(coeffs, target_prec, self.default_stride, self.disc)
    }

    /// Exact quotient self/den: factors den's leading monomial, inverts the
    /// unit part, and reattaches the (negated) monomial. The final valuation
    /// must stay non-negative, i.e. val(self) ≥ val(den).
    pub fn div(&self, den: &Series24) -> Self {
        let vd = den.val().expect("division by the zero series");
        if self.is_zero() {
            let mut z = Self::zero(self.prec.min(den.prec));
            z.disc = join_disc(self.disc, den.disc);
            return z;
        }
        let vn = self.val().unwrap();
        assert!(vn >= vd, "negative valuation in quotient: {vn}/24 minus {vd}/24");
        let unit = den.shift_down(vd);
        let num = self.shift_down(vd);
        &num * &unit.inv(unit.prec)
    }

    /// Integer power by repeated squaring (e ≥ 0).
    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            // Neutral element at the same trust bound.
            return Self::one(self.prec);
        }
        let mut base = self.clone();
        let mut e = e;
        let mut acc: Option<Series24> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        acc.unwrap()
    }

    fn shift_down(&self, v: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|(n, c)| (n - v, c.clone())).collect();
        Self::with_parts(coeffs, self.prec - v, self.default_stride, self.disc)
    }

    /// Multiply by q^(v/24) (index shift up; precision shifts with it).
    pub fn shift_up(&self, v: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|(n, c)| (n + v, c.clone())).collect();
        Self::with_parts(coeffs, self.prec.saturating_add(v), self.default_stride, self.disc)
    }

    /// First index below `bound` where the two series differ, if any.
    /// `bound` must not exceed either precision.
    pub fn first_mismatch(&self, other: &Series24, bound: u64) -> Option<u64> {
        assert!(
            bound <= self.prec && bound <= other.prec,
            "comparison bound {bound} beyond precs {} / {}",
            self.prec,
            other.prec
        );
        let mut keys: Vec<u64> = self
            .coeffs
            .range(..bound)
            .map(|(n, _)| *n)
            .chain(other.coeffs.range(..bound).map(|(n, _)| *n))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter().find(|&n| self.coeff(n) != other.coeff(n))
    }

    /// Exact equality of all coefficients below `bound`.
    pub fn eq_through(&self, other: &Series24, bound: u64) -> bool {
        self.first_mismatch(other, bound).is_none()
    }

    /// Numeric evaluation Σ a(n)·e^(2πi·z·n/24) at a point in the upper
    /// half-plane, with double-precision accumulation. The truncation tail
    /// must be provably below `tol`: |q|^(prec/24)/(1−|q|) < tol.
    pub fn eval_numeric(&self, z: Complex64, tol: f64) -> Complex64 {
        assert!(z.im > 0.0, "evaluation point must lie in the upper half-plane");
        let q_abs = (-2.0 * std::f64::consts::PI * z.im).exp();
        let tail = q_abs.powf(self.prec as f64 / 24.0) / (1.0 - q_abs);
        assert!(tail < tol, "precision {} insufficient: tail bound {tail:e} ≥ {tol:e}", self.prec);
        let i2pi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in &self.coeffs {
            acc += c.to_complex() * (i2pi * z * (*n as f64 / 24.0)).exp();
        }
        acc
    }

    /// Textual dump: header `prec=<n> stride=<s> disc=<d>`, then one line
    /// `n/24<TAB>coefficient` per nonzero coefficient in index order.
    pub fn dump(&self) -> String {
        let mut out = format!("prec={} stride={} disc={}\n", self.prec, self.stride(), self.disc);
        for (n, c) in &self.coeffs {
            out.push_str(&format!("{n}/24\t{c}\n"));
        }
        out
    }
}

fn ratio_u64(p: u64, q: u64) -> Rational {
    Rational::new(p.into(), q.into())
}

fn joined_default_stride(f: &Series24, g: &Series24) -> u64 {
    match (f.val(), g.val()) {
        (None, _) => g.default_stride,
        (_, None) => f.default_stride,
        (Some(vf), Some(vg)) => {
            let s = f.default_stride.gcd(&g.default_stride);
            let s = s.gcd(&vf.abs_diff(vg));
            s.max(1)
        }
    }
}

/// Pointwise sum; prec = min of the operands' bounds.
impl Add for &Series24 {
    type Output = Series24;
    fn add(self, rhs: &Series24) -> Series24 {
        let prec = self.prec.min(rhs.prec);
        let mut coeffs = BTreeMap::new();
        for (n, c) in self.coeffs.range(..prec) {
            coeffs.insert(*n, c.clone());
        }
        for (n, c) in rhs.coeffs.range(..prec) {
            let v = match coeffs.remove(n) {
                Some(prev) => &prev + c,
                None => c.clone(),
            };
            if !v.is_zero() {
                coeffs.insert(*n, v);
            }
        }
        Series24::with_parts(
            coeffs,
            prec,
            joined_default_stride(self, rhs),
            join_disc(self.disc, rhs.disc),
        )
    }
}

impl Sub for &Series24 {
    type Output = Series24;
    fn sub(self, rhs: &Series24) -> Series24 {
        self + &-rhs
    }
}

impl Neg for &Series24 {
    type Output = Series24;
    fn neg(self) -> Series24 {
        let coeffs = self.coeffs.iter().map(|(n, c)| (*n, -c)).collect();
        Series24::with_parts(coeffs, self.prec, self.default_stride, self.disc)
    }
}

/// Cauchy product on grid indices; prec = min(prec_f + val_g, prec_g + val_f)
/// (valuation of the zero series counts as ∞, saturating).
impl Mul for &Series24 {
    type Output = Series24;
    fn mul(self, rhs: &Series24) -> Series24 {
        let vf = self.val().unwrap_or(u64::MAX);
        let vg = rhs.val().unwrap_or(u64::MAX);
        let prec = self.prec.saturating_add(vg).min(rhs.prec.saturating_add(vf));
        let mut coeffs: BTreeMap<u64, FieldElem> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            if i.saturating_add(vg) >= prec {
                break;
            }
            for (j, b) in &rhs.coeffs {
                let n = i + j;
                if n >= prec {
                    break;
                }
                let t = a * b;
                match coeffs.remove(&n) {
                    Some(prev) => {
                        let s = &prev + &t;
                        if !s.is_zero() {
                            coeffs.insert(n, s);
                        }
                    }
                    None => {
                        if !t.is_zero() {
                            coeffs.insert(n, t);
                        }
                    }
                }
            }
        }
        Series24::with_parts(
            coeffs,
            prec,
            self.default_stride.gcd(&rhs.default_stride).max(1),
            join_disc(self.disc, rhs.disc),
        )
    }
}

impl fmt::Display for Series24 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Generalized binomial coefficient x(x−1)…(x−j+1)/j! for rational x.
pub fn gen_binomial(x: &Rational, j: u64) -> Rational {
    let mut out = Rational::from_integer(1.into());
    for i in 0..j {
        out = out * (x - rat(i as i64)) / rat(i as i64 + 1);
    }
    out
}

/// w-th Rankin-Cohen bracket of f (weight k1) and g (weight k2):
/// Σ_{r=0}^{w} (−1)^r · C(w+k1−1, w−r) · C(w+k2−1, r) · Θʳf · Θ^{w−r}g.
/// Weights may be half-integral; they enter only through the binomials.
pub fn rankin_cohen(f: &Series24, k1: &Rational, g: &Series24, k2: &Rational, w: u64) -> Series24 {
    let mut theta_f = vec![f.clone()];
    let mut theta_g = vec![g.clone()];
    for r in 1..=w {
        theta_f.push(theta_f[r as usize - 1].op_theta());
        theta_g.push(theta_g[r as usize - 1].op_theta());
    }
    let mut acc: Option<Series24> = None;
    for r in 0..=w {
        let c1 = gen_binomial(&(k1 + rat(w as i64 - 1)), w - r);
        let c2 = gen_binomial(&(k2 + rat(w as i64 - 1)), r);
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let coeff = c1 * c2 * rat(sign);
        let term = (&theta_f[r as usize] * &theta_g[(w - r) as usize]).scale_rat(&coeff);
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    acc.unwrap()
}
