//! Hecke operators and exact eigenbasis decomposition.
//!
//! * [`hecke_tp_int`] / [`hecke_tn_int`] — the integer-weight operators
//!   `T_p = U_p + χ(p)p^(k−1)V_p` and their multiplicative extension
//!   `T_n` (coefficient of `q^m` is `Σ_{d | (m,n)} χ(d) d^(k−1) a(mn/d²)`).
//! * [`hecke_tp2_half`] — the half-integral-weight `T_(p²)` acting on the
//!   two residue-grid variants (classes mod 24, and the embedded n/8 grid).
//!   Its middle-term sign placement is pinned by the lift-commutation
//!   regression checks in the `shimura`/`verify` tests.
//! * [`is_eigen_upto`] — eigenform detection against a list of operator
//!   images, with the first violating index on refusal.
//! * [`decompose_in_basis`] — exact coordinates of a series in a finite
//!   basis by Gaussian elimination over the coefficient field, with a full
//!   recombination residual check.

use crate::chars::RealChar;
use crate::qseries::{divisors, FieldElem, Rational, Series24};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;

/// Which residue grid a half-integral form lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridVariant {
    /// Support in a fixed class mod 24 (class 0 = the integer grid).
    Mod24,
    /// The n/8 grid embedded at universal indices `3n`.
    Mod8,
}

/// Weight, character and grid variant for a Hecke action.
#[derive(Debug, Clone)]
pub struct HeckeContext {
    /// Twice the weight.
    pub weight2: i64,
    pub character: RealChar,
    pub variant: GridVariant,
}

impl HeckeContext {
    /// Integer-weight context (weight `k`, support on the integer grid).
    pub fn integer(k: i64, character: RealChar) -> Self {
        HeckeContext {
            weight2: 2 * k,
            character,
            variant: GridVariant::Mod24,
        }
    }

    /// Half-integral context: `weight2` must be odd.
    pub fn half(weight2: i64, character: RealChar, variant: GridVariant) -> Self {
        assert!(weight2 % 2 != 0, "half-integral context needs odd weight2");
        HeckeContext {
            weight2,
            character,
            variant,
        }
    }
}

fn pow_rat(base: u64, exp: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(exp))
}

/// `T_p` in integer weight `k`: `f|U_p + χ(p)p^(k−1)·f|V_p`.
///
/// The context must have even `weight2` with `k ≥ 1`; `f` must live on the
/// integer grid.  Output precision is `⌊prec/p⌋` (the `U_p` part governs).
pub fn hecke_tp_int(f: &Series24, ctx: &HeckeContext, p: u64) -> Series24 {
    assert!(ctx.weight2 % 2 == 0, "integer-weight operator on half-integral context");
    let k = ctx.weight2 / 2;
    assert!(k >= 1);
    assert!(f.stride() % 24 == 0 || f.is_zero(), "T_p input must be on the integer grid");
    let u_part = f.op_u_class(p);
    let chi_p = ctx.character.eval(p as i64);
    if chi_p == 0 {
        return u_part;
    }
    let scale = pow_rat(p, (k - 1) as u32) * crate::qseries::rat(chi_p);
    let v_part = f.op_v(p).scale_rat(&scale);
    &u_part + &v_part
}

/// `T_n` in integer weight by the closed coefficient formula:
/// `b(m) = Σ_{d | gcd(m,n)} χ(d) d^(k−1) a(mn/d²)` (with `gcd(0, n) = n`).
pub fn hecke_tn_int(f: &Series24, ctx: &HeckeContext, n: u64) -> Series24 {
    assert!(ctx.weight2 % 2 == 0);
    let k = ctx.weight2 / 2;
    assert!(k >= 1 && n >= 1);
    assert!(f.stride() % 24 == 0 || f.is_zero(), "T_n input must be on the integer grid");
    if n == 1 {
        return f.clone();
    }
    let m_max = (f.prec() - 1) / (24 * n);
    Series24::from_integer_fn(m_max, |m| {
        let g = if m == 0 { n } else { m.gcd(&n) };
        let mut acc = FieldElem::zero();
        for d in divisors(g) {
            let chi_d = ctx.character.eval(d as i64);
            if chi_d == 0 {
                continue;
            }
            let a = f.coeff_int(m * n / (d * d));
            if a.is_zero() {
                continue;
            }
            let scale = pow_rat(d, (k - 1) as u32) * crate::qseries::rat(chi_d);
            acc = &acc + &(&a * &FieldElem::from_rational(scale));
        }
        acc
    })
}

/// The half-integral `T_(p²)` on a residue grid, in terms of universal
/// indices `u`:
///
/// `b(u) = a(p²u) + χ(p)·ε(p)·((−1)^k·u_red / p)·p^(k−1)·a(u)
///        + χ(p)²·p^(2k−1)·a(u/p²)`
///
/// with `k = (weight2 − 1)/2`, `ε = (12/·)`, `u_red = u` on the mod-24 grid
/// (primes `p ≥ 5`), and `ε = (−4/·)`, `u_red = u/3` on the embedded n/8
/// grid (primes `p ≥ 3`); `a(x) = 0` when `x` is not an admissible index.
/// Frozen unit factor of the half-integral `T_(p²)` middle term:
/// `ε_variant(p) · (n_red/p)` where `ε_variant = (12/·)` on the 1/24 grid and
/// `(−4/·)` on the embedded 1/8 grid, and `n_red` is the grid-relative index
/// (the universal index for `Mod24`, a third of it for `Mod8`).
///
/// There is deliberately **no** weight-parity factor `(−1)^k` here: rewriting
/// the operator on the integer grid multiplies the nebentypus by
/// `ε_variant·(−1/·)^k`, whose `(−1/p)^k` cancels the classical `((−1)^k n/p)`
/// Kronecker argument. This is the placement under which the lift/Hecke
/// commutation identities hold at **odd** k for p ≡ 3 (mod 4); the three
/// candidate placements (bare, `(−1)^k`-twisted, always-negated) coincide at
/// even k and were separated by those identities. Pinned by
/// `tp2_middle_convention` below.
pub(crate) fn tp2_middle_unit(variant: GridVariant, p: u64, n_red: u64) -> i64 {
    let eps_top = match variant {
        GridVariant::Mod24 => 12,
        GridVariant::Mod8 => -4,
    };
    crate::chars::kronecker(eps_top, p as i64) * crate::chars::kronecker(n_red as i64, p as i64)
}

pub fn hecke_tp2_half(f: &Series24, ctx: &HeckeContext, p: u64) -> Result<Series24> {
    assert!(ctx.weight2 % 2 != 0, "half-integral operator on integer-weight context");
    let k = (ctx.weight2 - 1) / 2;
    assert!(k >= 1);
    let p_min = match ctx.variant {
        GridVariant::Mod24 => 5u64,
        GridVariant::Mod8 => 3u64,
    };
    if p < p_min || !is_prime_u64(p) || (ctx.variant == GridVariant::Mod8 && p == 2) {
        return Err(Error::Uncovered(format!(
            "T_(p²) with p = {p} is outside the {:?} variant's prime range",
            ctx.variant
        )));
    }
    let p2 = p * p;
    let out_prec = (f.prec() - 1) / p2 + 1;
    let chi_p = ctx.character.eval(p as i64);
    let chi_p2 = chi_p * chi_p;
    let p_k1 = pow_rat(p, (k - 1) as u32);
    let p_2k1 = pow_rat(p, (2 * k - 1) as u32);

    // The operator acts within one residue class on the common grid: an
    // input supported on indices ≡ c (mod 24) produces output on the same
    // class. Candidate indices from the divide-by-p² branch can land off
    // that class when p² ≢ 1 (mod 24) (i.e. p = 3), so filter them.
    let mut classes = f.support().map(|(x, _)| x % 24);
    let class = classes.next();
    if let Some(c) = class {
        if let Some(c2) = classes.find(|&c2| c2 != c) {
            return Err(Error::ResidueClass(format!(
                "support spans classes {c} and {c2} mod 24"
            )));
        }
    }
    let on_class = |u: u64| class.is_none_or(|c| u % 24 == c);

    // Candidate output indices from the sparse support.
    let mut candidates: Vec<u64> = Vec::new();
    for (x, _) in f.support() {
        if x % p2 == 0 && x / p2 < out_prec && on_class(x / p2) {
            candidates.push(x / p2);
        }
        if x < out_prec {
            candidates.push(x);
        }
        if let Some(y) = x.checked_mul(p2) {
            if y < out_prec && on_class(y) {
                candidates.push(y);
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let mut out = Series24::zero(out_prec);
    for u in candidates {
        let mut b = f.coeff(u * p2);
        if chi_p != 0 {
            let u_red = match ctx.variant {
                GridVariant::Mod24 => Some(u),
                GridVariant::Mod8 => (u % 3 == 0).then_some(u / 3),
            };
            if let Some(u_red) = u_red {
                let middle = tp2_middle_unit(ctx.variant, p, u_red) * chi_p;
                if middle != 0 {
                    let a = f.coeff(u);
                    if !a.is_zero() {
                        let scale = &p_k1 * &crate::qseries::rat(middle);
                        b = &b + &(&a * &FieldElem::from_rational(scale));
                    }
                }
            }
        }
        if chi_p2 != 0 && u % p2 == 0 {
            let a = f.coeff(u / p2);
            if !a.is_zero() {
                let scale = &p_2k1 * &crate::qseries::rat(chi_p2);
                b = &b + &(&a * &FieldElem::from_rational(scale));
            }
        }
        if !b.is_zero() {
            out.set(u, b);
        }
    }
    Ok(out)
}

fn is_prime_u64(n: u64) -> bool {
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

/// Outcome of an eigenform test against a list of operator images.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenCheck {
    /// Every image is `λ_i·f` through the common precision.
    Eigen(Vec<FieldElem>),
    /// The image at `op_index` first deviates from proportionality at
    /// `grid_index`.
    NotEigen { op_index: usize, grid_index: u64 },
}

/// Test whether `f` is a simultaneous eigenvector of the operators whose
/// images are given, comparing through each image's shared precision with
/// `f`.  `f` must be nonzero; an empty image list yields an empty
/// eigenvalue list.
pub fn is_eigen_upto(f: &Series24, images: &[Series24]) -> EigenCheck {
    let v = f.val().expect("eigenform test needs a nonzero series");
    let lead_inv = f.coeff(v).inv();
    let mut lambdas = Vec::with_capacity(images.len());
    for (op_index, image) in images.iter().enumerate() {
        let bound = f.prec().min(image.prec());
        assert!(v < bound, "precision too small to see the leading coefficient");
        let lambda = &image.coeff(v) * &lead_inv;
        let scaled = f.scale(&lambda);
        if let Some(grid_index) = scaled.first_mismatch(image, bound) {
            return EigenCheck::NotEigen {
                op_index,
                grid_index,
            };
        }
        lambdas.push(lambda);
    }
    EigenCheck::Eigen(lambdas)
}

/// Exact coordinates of `target` in `basis`.
///
/// Scans candidate rows (indices in the union of the basis supports) in
/// increasing order, accumulating independent rows by Gaussian elimination
/// over the coefficient field until the system has full rank; solves; then
/// verifies the recombination against `target` through the common precision.
/// Fails with [`Error::SingularSystem`] if full rank is never reached, or
/// [`Error::NonzeroResidual`] if `target` lies outside the span.
pub fn decompose_in_basis(target: &Series24, basis: &[Series24]) -> Result<Vec<FieldElem>> {
    let m = basis.len();
    assert!(m >= 1, "empty basis");
    let mut prec = target.prec();
    for b in basis {
        prec = prec.min(b.prec());
    }
    let mut idxs: Vec<u64> = basis
        .iter()
        .flat_map(|b| b.support().map(|(i, _)| i))
        .filter(|&i| i < prec)
        .collect();
    idxs.sort_unstable();
    idxs.dedup();

    // Rows reduced at insertion: row_j is zero at the pivot columns of all
    // earlier rows, with a unit pivot of its own.
    let mut pivots: Vec<(usize, Vec<FieldElem>, FieldElem)> = Vec::new();
    for &i in &idxs {
        if pivots.len() == m {
            break;
        }
        let mut row: Vec<FieldElem> = basis.iter().map(|b| b.coeff(i)).collect();
        let mut rhs = target.coeff(i);
        for (pc, prow, prhs) in &pivots {
            let factor = row[*pc].clone();
            if !factor.is_zero() {
                for c in 0..m {
                    row[c] = &row[c] - &(&factor * &prow[c]);
                }
                rhs = &rhs - &(&factor * prhs);
            }
        }
        if let Some(pc) = row.iter().position(|x| !x.is_zero()) {
            let inv = row[pc].inv();
            for item in row.iter_mut() {
                *item = &*item * &inv;
            }
            rhs = &rhs * &inv;
            pivots.push((pc, row, rhs));
        }
    }
    if pivots.len() < m {
        return Err(Error::SingularSystem(format!(
            "rank {} < {} within precision {}",
            pivots.len(),
            m,
            prec
        )));
    }
    // Reverse solve: row_j's unknown entries sit at pivot columns of later
    // rows, already solved when iterating backwards.
    let mut alpha = vec![FieldElem::zero(); m];
    for (pc, row, rhs) in pivots.iter().rev() {
        let mut v = rhs.clone();
        for (c, entry) in row.iter().enumerate() {
            if c != *pc && !entry.is_zero() {
                v = &v - &(entry * &alpha[c]);
            }
        }
        alpha[*pc] = v;
    }
    // Full-precision residual check.
    let mut recomb = Series24::zero(prec);
    for (a, b) in alpha.iter().zip(basis) {
        recomb = &recomb + &b.scale(a).truncated(prec);
    }
    if let Some(i) = recomb.first_mismatch(&target.truncated(prec), prec) {
        return Err(Error::NonzeroResidual(i));
    }
    Ok(alpha)
}
