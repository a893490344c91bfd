//! Shimura-type lifts between half-integral and integer weight.
//!
//! Two families are implemented:
//!
//! * [`sh_theta`] — the classical lift `Sh_t` for forms with the theta
//!   multiplier (integer q-expansions): `A_t(n) = Σ_{d|n} χ_t(d) d^(κ−1)
//!   a(tn²/d²)` with `χ_t(m) = χ(m)(−1/m)^κ(t/m)`.
//! * [`s_eta`] — the lift `S_t` for forms with an eta-multiplier power, in
//!   both residue variants: support in one odd class `r` mod 24 coprime to 3
//!   (coefficients read on the n/24 grid, unit factor `(12/·)`), or support
//!   in `3·(odd)` mod 24 read on the embedded n/8 grid (unit factor
//!   `(−4/·)`). `B_t(n) = Σ_{d|n} χ(d)(d/t)(unit(n/d)) d^(κ−1) a(tn²/d²)`,
//!   and the lift vanishes unless `t` matches the support class.
//!
//! [`s_r_pipeline`] assembles the two product-family pipelines (`η^r·f` and
//! `η^{3r}·f`): the direct path evaluates `S_1((η^e f)|U_r)`, and the
//! eigenbasis path decomposes `(η^e/η(rz)^{e/r}·f)|U_r` in a supplied
//! eigenbasis and recombines the bracket products `G_i`.
//! [`lift_relation_check`] verifies the bridge `Sh_t(reindexed f) =
//! S_t(f) ⊗ unit` between the two families.

use crate::chars::{kronecker, RealChar};
use crate::forms::{eta_quotient_series, EtaQuotient};
use crate::hecke::decompose_in_basis;
use crate::qseries::{divisors, is_square_free, rat, FieldElem, Rational, Series24};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Roots;

/// Which lift family a [`LiftSpec`] drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftVariant {
    /// Theta-multiplier family on integer q-expansions.
    Theta,
    /// Eta-multiplier family, support in one class r mod 24 with (r, 6) = 1.
    Eta24,
    /// Eta-multiplier family, support on the embedded n/8 grid (3 | class).
    Eta8,
}

/// Parameters of a single lift: the index `t`, the coefficient-formula
/// weight `kappa` (the form weight is `kappa + 1/2`), the Dirichlet
/// character of the input space, and the family variant.
#[derive(Debug, Clone)]
pub struct LiftSpec {
    pub t: u64,
    pub kappa: i64,
    pub chi: RealChar,
    pub variant: LiftVariant,
}

impl LiftSpec {
    /// Validated constructor: `t` must be a positive square-free integer.
    pub fn new(t: u64, kappa: i64, chi: RealChar, variant: LiftVariant) -> Result<Self> {
        if t == 0 || !is_square_free(t) {
            return Err(Error::NotSquareFree(t));
        }
        Ok(LiftSpec { t, kappa, chi, variant })
    }

    /// The source theorems assume `kappa ≥ 2`; smaller values are computed
    /// anyway but flagged so callers can warn.
    pub fn low_weight(&self) -> bool {
        self.kappa < 2
    }
}

/// d^e as an exact rational (negative e allowed).
fn int_pow(d: u64, e: i64) -> Rational {
    let p = Rational::from_integer(BigInt::from(d).pow(e.unsigned_abs() as u32));
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// The common support class mod 24 (`None` for the zero series), or an
/// error naming the two classes found.
fn support_class(f: &Series24) -> Result<Option<u64>> {
    let mut it = f.support().map(|(n, _)| n % 24);
    let Some(c) = it.next() else { return Ok(None) };
    for c2 in it {
        if c2 != c {
            return Err(Error::ResidueClass(format!(
                "support spans classes {c} and {c2} mod 24"
            )));
        }
    }
    Ok(Some(c))
}

/// Shared coefficient loop: output coefficient at qⁿ is
/// `Σ_{d|n} unit(d, n/d) · d^(kappa−1) · a(t·(n/d)²)`.
fn assemble_lift(
    t: u64,
    n_max: u64,
    kappa: i64,
    a: impl Fn(u64) -> FieldElem,
    unit: impl Fn(u64, u64) -> i64,
) -> Series24 {
    let mut out = Series24::zero(24 * n_max + 1);
    for n in 1..=n_max {
        let mut b = FieldElem::zero();
        for d in divisors(n) {
            let m = n / d;
            let u = unit(d, m);
            if u == 0 {
                continue;
            }
            let av = a(t * m * m);
            if av.is_zero() {
                continue;
            }
            let scale = int_pow(d, kappa - 1) * rat(u);
            b = &b + &(&av * &FieldElem::from_rational(scale));
        }
        out.set(24 * n, b);
    }
    out
}

/// Theta-multiplier lift `Sh_t`: input on the integer grid, output
/// `Σ A_t(n) qⁿ` with `A_t(n) = Σ_{d|n} χ_t(d) d^(κ−1) a(tn²/d²)` and
/// `χ_t(m) = χ(m)(−1/m)^κ(t/m)`.
///
/// Output precision is computed: the largest `N` whose formula reads only
/// indices below the input precision.
pub fn sh_theta(f: &Series24, spec: &LiftSpec) -> Result<Series24> {
    assert!(
        spec.variant == LiftVariant::Theta,
        "sh_theta requires the theta variant"
    );
    if let Some(c) = support_class(f)? {
        if c != 0 {
            return Err(Error::ResidueClass(format!(
                "theta-family input must have integer exponents; found class {c} mod 24"
            )));
        }
    }
    let int_bound = (f.prec().saturating_sub(1)) / 24; // largest readable integer exponent
    let n_max = (int_bound / spec.t).sqrt();
    let kappa = spec.kappa;
    let odd_kappa = kappa.rem_euclid(2) == 1;
    let t = spec.t as i64;
    Ok(assemble_lift(
        spec.t,
        n_max,
        kappa,
        |x| f.coeff_int(x),
        |d, _| {
            // The divisor-sum character lives modulo 4tN (the theta
            // multiplier forces 4 into the level), so it vanishes at even d.
            // Odd-part level factors are the caller's to encode in spec.chi.
            if d % 2 == 0 {
                return 0;
            }
            let d = d as i64;
            let mut u = spec.chi.eval(d) * kronecker(t, d);
            if odd_kappa {
                u *= kronecker(-1, d);
            }
            u
        },
    ))
}

/// Eta-multiplier lift `S_t` in either residue variant.
///
/// `Eta24`: input indices are the n of `q^(n/24)`, support in a single class
/// `r` mod 24 with `(r, 6) = 1`; the output is zero unless `t ≡ r (mod 24)`.
/// `Eta8`: input support at universal indices `3m` with `m` odd (the n/8
/// grid); zero unless `t ≡ m-class (mod 8)`.
///
/// Output precision is computed from the largest index the coefficient
/// formula needs (`t·n²` on the input's own grid).
pub fn s_eta(f: &Series24, spec: &LiftSpec) -> Result<Series24> {
    let class = support_class(f)?;
    let t = spec.t;
    let kappa = spec.kappa;
    match spec.variant {
        LiftVariant::Theta => panic!("s_eta requires an eta variant"),
        LiftVariant::Eta24 => {
            let n_max = ((f.prec().saturating_sub(1)) / t).sqrt();
            let Some(c) = class else {
                return Ok(Series24::zero(24 * n_max + 1));
            };
            if c % 2 == 0 || c % 3 == 0 {
                return Err(Error::ResidueClass(format!(
                    "class {c} mod 24 is not coprime to 6"
                )));
            }
            if t % 24 != c {
                return Ok(Series24::zero(24 * n_max + 1));
            }
            Ok(assemble_lift(
                t,
                n_max,
                kappa,
                |x| f.coeff(x),
                |d, m| {
                    spec.chi.eval(d as i64)
                        * kronecker(d as i64, t as i64)
                        * kronecker(12, m as i64)
                },
            ))
        }
        LiftVariant::Eta8 => {
            let n_max = ((f.prec().saturating_sub(1)) / (3 * t)).sqrt();
            let Some(c) = class else {
                return Ok(Series24::zero(24 * n_max + 1));
            };
            if c % 3 != 0 || (c / 3) % 2 == 0 {
                return Err(Error::ResidueClass(format!(
                    "class {c} mod 24 is not 3·(odd)"
                )));
            }
            if t % 8 != (c / 3) % 8 {
                return Ok(Series24::zero(24 * n_max + 1));
            }
            Ok(assemble_lift(
                t,
                n_max,
                kappa,
                |x| f.coeff(3 * x),
                |d, m| {
                    spec.chi.eval(d as i64)
                        * kronecker(d as i64, t as i64)
                        * kronecker(-4, m as i64)
                },
            ))
        }
    }
}

/// Which product family a pipeline run lifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineMode {
    /// `S_r(η^r·f)` with `(r, 6) = 1`; brackets `g(z)g(6z) − g(2z)g(3z)`.
    EtaR,
    /// `S_r(η^{3r}·f)` with odd `r < 8`; brackets `g(2z)Θg(z) − g(z)Θg(2z)`.
    Eta3R,
}

/// Which path's series a pipeline run reports as primary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelinePath {
    Direct,
    Eigenbasis,
}

/// Comparison summary between the two pipeline paths.
#[derive(Debug, Clone)]
pub struct Agreement {
    /// Exclusive universal-index bound the comparison covered.
    pub checked_through: u64,
    /// First differing universal index below the bound, if any.
    pub first_mismatch: Option<u64>,
}

/// Output of [`s_r_pipeline`]: the primary series plus everything needed to
/// audit the run.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub primary: Series24,
    pub direct: Series24,
    /// Eigenbasis-path result and coordinates (when a basis was supplied).
    pub assembled: Option<Series24>,
    pub alphas: Option<Vec<FieldElem>>,
    pub agreement: Option<Agreement>,
    /// True when the lift weight is below the theorems' `kappa ≥ 2` bound.
    pub low_weight: bool,
}

fn dilate(g: &Series24, m: u64) -> Series24 {
    g.op_v(m)
}

/// Bracket combination for one eigenform, per mode.
fn bracket_g(g: &Series24, mode: PipelineMode) -> Series24 {
    match mode {
        PipelineMode::EtaR => &(g * &dilate(g, 6)) - &(&dilate(g, 2) * &dilate(g, 3)),
        PipelineMode::Eta3R => {
            let g2 = dilate(g, 2);
            &(&g2 * &g.op_theta()) - &(g * &g2.op_theta())
        }
    }
}

/// The `S_r(η^e·f)` pipelines (`e = r` or `3r`), by the direct evaluation
/// `S_1((η^e f)|U_r)` and, when `basis` is supplied, the eigenbasis path
/// that decomposes `(η^e/η(rz)^{e/r}·f)|U_r = Σ α_i g_i` and assembles
/// `Σ α_i G_i`. `f` is an integer-grid form of weight `f_weight`; its own
/// precision is the working precision.
pub fn s_r_pipeline(
    r: u64,
    f: &Series24,
    f_weight: i64,
    mode: PipelineMode,
    path: PipelinePath,
    basis: Option<&[Series24]>,
) -> Result<PipelineReport> {
    let mode_ok = match mode {
        PipelineMode::EtaR => r % 2 == 1 && r % 3 != 0 && r <= 23,
        PipelineMode::Eta3R => r % 2 == 1 && r < 8,
    };
    if !mode_ok {
        return Err(Error::Usage(format!("index {r} is outside the mode's range")));
    }
    let (e, kappa, variant) = match mode {
        PipelineMode::EtaR => (r, (r as i64 - 1) / 2 + f_weight, LiftVariant::Eta24),
        PipelineMode::Eta3R => (3 * r, (3 * r as i64 - 1) / 2 + f_weight, LiftVariant::Eta8),
    };
    let prec = f.prec();
    let chi1 = RealChar::jacobi_bottom(r);

    // Direct path: S_1 of the U_r image of the full eta-power product.
    let eta_pow = eta_quotient_series(&EtaQuotient::new(&[(1, e as i64)]), prec)
        .expect("positive eta power has positive order");
    let product = &eta_pow * f;
    let spec1 = LiftSpec::new(1, kappa, chi1, variant)?;
    let direct = s_eta(&product.op_u_class(r), &spec1)?;

    // Eigenbasis path: decompose the integer-weight quotient's U_r image.
    let mut assembled = None;
    let mut alphas = None;
    if let Some(basis) = basis {
        let quo = EtaQuotient::new(&[(1, e as i64), (r, -((e / r) as i64))]);
        let w = &eta_quotient_series(&quo, prec)? * f;
        let target = w.op_u_class(r);
        let coords = decompose_in_basis(&target, basis)?;
        let mut sum = Series24::zero(u64::MAX);
        for (alpha, g) in coords.iter().zip(basis) {
            sum = &sum + &bracket_g(g, mode).scale(alpha);
        }
        assembled = Some(sum);
        alphas = Some(coords);
    }

    let agreement = assembled.as_ref().map(|a| {
        let bound = direct.prec().min(a.prec());
        Agreement {
            checked_through: bound,
            first_mismatch: direct.first_mismatch(a, bound),
        }
    });
    let primary = match path {
        PipelinePath::Direct => direct.clone(),
        PipelinePath::Eigenbasis => assembled
            .clone()
            .ok_or_else(|| Error::Usage("eigenbasis path needs a basis".into()))?,
    };
    Ok(PipelineReport {
        primary,
        direct,
        assembled,
        alphas,
        agreement,
        low_weight: kappa < 2,
    })
}

/// Outcome of [`lift_relation_check`].
#[derive(Debug, Clone)]
pub struct RelationReport {
    /// Exclusive universal-index bound compared.
    pub checked_through: u64,
    pub first_mismatch: Option<u64>,
    pub lhs: Series24,
    pub rhs: Series24,
}

/// Bridge between the families: reindexing an eta-family form onto the
/// integer grid (`q^(n/24) ↦ qⁿ`, resp. `q^(n/8) ↦ qⁿ`) and applying the
/// theta-family lift with character `χ·unit·(−1/·)^κ` reproduces
/// `S_t(f) ⊗ unit`, where the unit is `(12/·)` (Eta24) or `(−4/·)` (Eta8).
pub fn lift_relation_check(f: &Series24, spec: &LiftSpec) -> Result<RelationReport> {
    let (unit, step) = match spec.variant {
        LiftVariant::Eta24 => (RealChar::kron(12), 1),
        LiftVariant::Eta8 => (RealChar::kron(-4), 3),
        LiftVariant::Theta => panic!("relation check starts from an eta variant"),
    };
    // Reinterpret the eta-grid index as an integer exponent.
    let grid_bound = (f.prec().saturating_sub(1)) / step; // own-grid exclusive... inclusive bound
    let mut reindexed = Series24::zero(24 * grid_bound + 1);
    for (n, c) in f.support() {
        assert!(n % step == 0, "support off the declared grid");
        reindexed.set(24 * (n / step), c.clone());
    }
    let mut chi_theta = &spec.chi * &unit;
    if spec.kappa.rem_euclid(2) == 1 {
        chi_theta = &chi_theta * &RealChar::kron(-4);
    }
    let theta_spec = LiftSpec {
        t: spec.t,
        kappa: spec.kappa,
        chi: chi_theta,
        variant: LiftVariant::Theta,
    };
    let lhs = sh_theta(&reindexed, &theta_spec)?;
    let rhs = s_eta(f, spec)?.twist(&unit, 24);
    let bound = lhs.prec().min(rhs.prec());
    Ok(RelationReport {
        checked_through: bound,
        first_mismatch: lhs.first_mismatch(&rhs, bound),
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta, e4, eta_series, fixtures_examples, theta_z};
    use crate::hecke::{hecke_tp2_half, hecke_tp_int, GridVariant, HeckeContext};
    use crate::qseries::ratio;

    fn spec(t: u64, kappa: i64, variant: LiftVariant) -> LiftSpec {
        LiftSpec::new(t, kappa, RealChar::trivial(), variant).unwrap()
    }

    #[test]
    fn selberg_product_identity() {
        // Sh_1 of Δ(4z)·θ(z) = Δ(z)² − 2^11·Δ(2z)², through 100 integer
        // coefficients. The lift reads a(n²) for n ≤ 100, so the input
        // product must extend to integer index 10⁴.
        let prec = 240_001;
        let f = &delta((prec + 3) / 4).op_v(4).truncated(prec) * &theta_z(prec);
        let lift = sh_theta(&f, &spec(1, 12, LiftVariant::Theta)).unwrap();
        let d = delta(2401);
        let rhs = &(&d * &d) - &(&d.op_v(2) * &d.op_v(2)).scale_rat(&rat(1 << 11));
        let bound = lift.prec().min(rhs.prec());
        assert!(bound >= 2400, "bound {bound}");
        assert_eq!(lift.first_mismatch(&rhs, bound), None);
        // Leading coefficients sanity: the lift is Δ²-like, starting 1, −48.
        assert_eq!(lift.coeff_int(2), FieldElem::from_int(1));
        assert_eq!(lift.coeff_int(3), FieldElem::from_int(-48));
    }

    #[test]
    fn sh_theta_basics() {
        // A_1(1) = a(1); zero in, zero out; square-free validation.
        let d = delta(2401);
        let lift = sh_theta(&d, &spec(1, 12, LiftVariant::Theta)).unwrap();
        assert_eq!(lift.coeff_int(1), d.coeff_int(1));
        let z = Series24::zero(1000);
        assert!(sh_theta(&z, &spec(1, 5, LiftVariant::Theta)).unwrap().is_zero());
        assert!(matches!(
            LiftSpec::new(12, 5, RealChar::trivial(), LiftVariant::Theta),
            Err(Error::NotSquareFree(12))
        ));
        // Non-integer support is refused.
        let eta = eta_series(1000);
        assert!(matches!(
            sh_theta(&eta, &spec(1, 5, LiftVariant::Theta)),
            Err(Error::ResidueClass(_))
        ));
    }

    #[test]
    fn example_lifts_printed_prefixes() {
        // Direct S_t evaluation on both worked inputs.
        let cat = fixtures_examples(200);
        let ex1 = cat.ex1.input_series(24 * 5 * 26 + 1);
        let s5 = s_eta(&ex1, &spec(5, 6, LiftVariant::Eta24)).unwrap();
        let want1 = [1i64, -32, -243, 1024, 5766];
        for (i, w) in want1.iter().enumerate() {
            assert_eq!(s5.coeff_int(i as u64 + 1), FieldElem::from_int(*w), "S_5 at {}", i + 1);
        }
        let ex2 = cat.ex2.input_series(24 * 9 * 26 + 1);
        let s3 = s_eta(&ex2, &spec(3, 10, LiftVariant::Eta8)).unwrap();
        let want2 = [1i64, -512, -13092, 262144, 6546750];
        for (i, w) in want2.iter().enumerate() {
            assert_eq!(s3.coeff_int(i as u64 + 1), FieldElem::from_int(*w), "S_3 at {}", i + 1);
        }
    }

    #[test]
    fn vanishing_and_class_errors() {
        let f = &eta_series(4000) * &delta(4000); // class 1 mod 24
        // t in the wrong class vanishes (but is a valid computation).
        let off = s_eta(&f, &spec(5, 12, LiftVariant::Eta24)).unwrap();
        assert!(off.is_zero());
        assert!(off.prec() > 24); // computed precision, not a unit stub
        // Integer-grid input is not an eta-family form.
        assert!(matches!(
            s_eta(&delta(1000), &spec(1, 6, LiftVariant::Eta24)),
            Err(Error::ResidueClass(_))
        ));
        // Eta8 vanishing: η³Δ sits over class 1 mod 8; t = 3 misses it.
        let f3 = &eta_series(4000).pow(3) * &delta(4000);
        let off8 = s_eta(&f3, &spec(3, 13, LiftVariant::Eta8)).unwrap();
        assert!(off8.is_zero());
        // Eta8 on a class whose third is even: class 6 (η²·integer).
        let bad = eta_series(1000).pow(2);
        assert!(matches!(
            s_eta(&bad, &spec(1, 1, LiftVariant::Eta8)),
            Err(Error::ResidueClass(_))
        ));
        // S_1 normalization: B_1(n) = Σ_{d|n} … a((n/d)²), so B_1(1) = a(1).
        // For η·Δ (valuation 25) that is 0; the first nonzero output sits at
        // n = 5, picking up (12/5)·a(25) = −1.
        let s1 = s_eta(&f, &spec(1, 12, LiftVariant::Eta24)).unwrap();
        assert_eq!(s1.coeff_int(1), f.coeff(1));
        assert!(s1.coeff_int(1).is_zero());
        assert_eq!(s1.coeff_int(5), -&f.coeff(25));
        assert_eq!(s1.coeff_int(5), FieldElem::from_int(-1));
        // On an input with unit leading coefficient at index 1 — η itself,
        // weight ½ so κ = 0 (a formal low-weight evaluation) — B_1(1) = 1:
        // the d = 1 term contributes d^(κ−1)·a(1) = 1 regardless of κ.
        let sp0 = LiftSpec::new(1, 0, RealChar::trivial(), LiftVariant::Eta24).unwrap();
        assert!(sp0.low_weight());
        let s_eta_only = s_eta(&eta_series(4000), &sp0).unwrap();
        assert_eq!(s_eta_only.coeff_int(1), FieldElem::one());
    }

    #[test]
    fn lift_linearity() {
        let prec = 3000;
        let f1 = &eta_series(prec) * &delta(prec);
        let f2 = &f1 * &delta(prec).scale_rat(&ratio(3, 7)); // class 1 again (1 + 24)
        let sp = spec(1, 18, LiftVariant::Eta24);
        let both = s_eta(&(&f1 + &f2), &sp).unwrap();
        let apart = &s_eta(&f1, &sp).unwrap() + &s_eta(&f2, &sp).unwrap();
        let bound = both.prec().min(apart.prec());
        assert_eq!(both.first_mismatch(&apart, bound), None);
        let scaled = s_eta(&f1.scale_rat(&ratio(-2, 5)), &sp).unwrap();
        let other = s_eta(&f1, &sp).unwrap().scale_rat(&ratio(-2, 5));
        assert_eq!(scaled.first_mismatch(&other, scaled.prec().min(other.prec())), None);
    }

    #[test]
    fn commutation_with_hecke_square() {
        // S_1(f|T_{p²}) = (12/p)·S_1(f)|T_p on η·Δ for p ∈ {5, 7, 11, 13},
        // pinning the half-integral T_{p²} sign placement at even k.
        let prec = 24 * 169 * 12 + 1;
        let f = &eta_series(prec) * &delta(prec);
        let ctx = HeckeContext::half(25, RealChar::trivial(), GridVariant::Mod24);
        // The lift image has integer weight 2κ = 24.
        let int_ctx = HeckeContext::integer(24, RealChar::trivial());
        let sp = spec(1, 12, LiftVariant::Eta24);
        for p in [5u64, 7, 11, 13] {
            let lhs = s_eta(&hecke_tp2_half(&f, &ctx, p).unwrap(), &sp).unwrap();
            let rhs = hecke_tp_int(&s_eta(&f, &sp).unwrap(), &int_ctx, p)
                .scale_rat(&rat(kronecker(12, p as i64)));
            let bound = lhs.prec().min(rhs.prec());
            assert!(bound >= 24 * 6, "p = {p}: bound {bound}");
            assert!(!rhs.is_zero(), "p = {p}: trivial comparison");
            assert_eq!(lhs.first_mismatch(&rhs, bound), None, "p = {p}");
        }
        // Odd k separates the candidate middle-term placements at
        // p ≡ 3 (mod 4): η⁷·Δ has weight 31/2 (k = 15), class 7, lift t = 7.
        let prec = 24 * 49 * 20 + 1;
        let f7 = &eta_series(prec).pow(7) * &delta(prec);
        let ctx7 = HeckeContext::half(31, RealChar::trivial(), GridVariant::Mod24);
        let int_ctx7 = HeckeContext::integer(30, RealChar::trivial());
        let sp7 = spec(7, 15, LiftVariant::Eta24);
        for p in [5u64, 7] {
            let lhs = s_eta(&hecke_tp2_half(&f7, &ctx7, p).unwrap(), &sp7).unwrap();
            let rhs = hecke_tp_int(&s_eta(&f7, &sp7).unwrap(), &int_ctx7, p)
                .scale_rat(&rat(kronecker(12, p as i64)));
            let bound = lhs.prec().min(rhs.prec());
            assert!(!rhs.is_zero(), "k = 15, p = {p}: trivial comparison");
            assert_eq!(lhs.first_mismatch(&rhs, bound), None, "k = 15, p = {p}");
        }
    }

    #[test]
    fn commutation_with_hecke_square_mod8() {
        // Mirror family: S_1(f|T_{p²}) = (−4/p)·S_1(f)|T_p on η³·Δ for
        // p ∈ {3, 5, 7}. With k = 13 odd, p = 3 and p = 7 (both ≡ 3 mod 4)
        // separate the candidate T_{p²} middle-term placements.
        let prec = 24 * 49 * 27 + 1;
        let f = &eta_series(prec).pow(3) * &delta(prec);
        let ctx = HeckeContext::half(27, RealChar::trivial(), GridVariant::Mod8);
        // Image weight 2κ = 26.
        let int_ctx = HeckeContext::integer(26, RealChar::trivial());
        let sp = spec(1, 13, LiftVariant::Eta8);
        for p in [3u64, 5, 7] {
            let lhs = s_eta(&hecke_tp2_half(&f, &ctx, p).unwrap(), &sp).unwrap();
            let rhs = hecke_tp_int(&s_eta(&f, &sp).unwrap(), &int_ctx, p)
                .scale_rat(&rat(kronecker(-4, p as i64)));
            let bound = lhs.prec().min(rhs.prec());
            assert!(bound >= 24 * 4, "p = {p}: bound {bound}");
            assert!(!rhs.is_zero(), "p = {p}: trivial comparison");
            assert_eq!(lhs.first_mismatch(&rhs, bound), None, "p = {p}");
        }
    }

    #[test]
    fn commutation_with_v_operators() {
        // S_1(f|V_t) = (12/t)·S_t(f)|V_t for square-free t ≡ 1 (mod 24), and
        // S_1(f|V_{p²}) = (12/p)·S_1(f)|V_p for p ∈ {5, 7}.
        //
        // The first identity needs t square-free: the support argument uses
        // t | (n/d)² ⟺ t | (n/d), and the (d/t) symbol must kill every d
        // sharing a factor with t. (At t = 25 the identity genuinely fails:
        // the left side has a nonzero coefficient at n = 35 from d = 1,
        // (12/35)·a(49), while the right side is supported on 25 | n.)
        // V_t sends the character χ to χ·(·/t), so the left lift carries the
        // inherited (·/t).
        let prec = 24 * 97 * 9 + 1;
        let f = &eta_series(prec) * &delta(prec);
        let s1 = spec(1, 12, LiftVariant::Eta24);
        for t in [73u64, 97] {
            let st = spec(t, 12, LiftVariant::Eta24);
            let s1_twisted = LiftSpec::new(
                1,
                12,
                RealChar::jacobi_bottom(t),
                LiftVariant::Eta24,
            )
            .unwrap();
            let lhs = s_eta(&f.op_v(t), &s1_twisted).unwrap();
            let rhs = s_eta(&f, &st)
                .unwrap()
                .op_v(t)
                .scale_rat(&rat(kronecker(12, t as i64)));
            let bound = lhs.prec().min(rhs.prec());
            assert!(bound >= 24 * t * 9, "t = {t}: bound {bound}");
            assert!(!rhs.is_zero(), "t = {t}: trivial comparison");
            assert_eq!(lhs.first_mismatch(&rhs, bound), None, "V_t at t = {t}");
        }
        for p in [5u64, 7] {
            // V_{p²} leaves the character unchanged: (·/p²) is principal, and
            // the divisor sums match including d ≡ 0 (mod p) terms.
            let lhs = s_eta(&f.op_v(p * p), &s1).unwrap();
            let rhs = s_eta(&f, &s1)
                .unwrap()
                .op_v(p)
                .scale_rat(&rat(kronecker(12, p as i64)));
            let bound = lhs.prec().min(rhs.prec());
            assert!(bound >= 24 * p * p * 9, "p = {p}: bound {bound}");
            assert!(!rhs.is_zero(), "p = {p}: trivial comparison");
            assert_eq!(lhs.first_mismatch(&rhs, bound), None, "V_(p²) at p = {p}");
        }
    }

    #[test]
    fn pipeline_example_one_both_paths() {
        let basis_prec = 24 * 12 + 1;
        let cat = fixtures_examples(basis_prec);
        let f = e4(5 * basis_prec);
        let report = s_r_pipeline(
            5,
            &f,
            4,
            PipelineMode::EtaR,
            PipelinePath::Eigenbasis,
            Some(&cat.ex1.g_basis),
        )
        .unwrap();
        assert_eq!(report.alphas.as_ref().unwrap(), &cat.ex1.alphas);
        let agree = report.agreement.unwrap();
        assert!(agree.first_mismatch.is_none());
        assert!(agree.checked_through >= 24 * 12);
        for (i, w) in cat.ex1.printed_lift.iter().enumerate() {
            assert_eq!(
                report.primary.coeff_int(i as u64 + 1),
                FieldElem::from_int(*w),
                "lift coefficient {}",
                i + 1
            );
        }
        assert!(!report.low_weight);
    }

    #[test]
    fn pipeline_example_two_both_paths() {
        let basis_prec = 24 * 12 + 1;
        let cat = fixtures_examples(basis_prec);
        let f = crate::forms::e6(3 * basis_prec);
        let report = s_r_pipeline(
            3,
            &f,
            6,
            PipelineMode::Eta3R,
            PipelinePath::Eigenbasis,
            Some(&cat.ex2.g_basis),
        )
        .unwrap();
        assert_eq!(report.alphas.as_ref().unwrap(), &cat.ex2.alphas);
        let agree = report.agreement.unwrap();
        assert!(agree.first_mismatch.is_none());
        for (i, w) in cat.ex2.printed_lift.iter().enumerate() {
            assert_eq!(
                report.primary.coeff_int(i as u64 + 1),
                FieldElem::from_int(*w),
                "lift coefficient {}",
                i + 1
            );
        }
    }

    #[test]
    fn pipeline_r1_is_bracket_of_eigenform() {
        // r = 1 collapses U_1 away: S_1(η·Δ) = Δ(z)Δ(6z) − Δ(2z)Δ(3z).
        let prec = 24 * 40 + 1;
        let report = s_r_pipeline(
            1,
            &delta(prec),
            12,
            PipelineMode::EtaR,
            PipelinePath::Direct,
            None,
        )
        .unwrap();
        let d = delta(prec);
        let rhs = &(&d * &d.op_v(6).truncated(prec)) - &(&d.op_v(2).truncated(prec) * &d.op_v(3).truncated(prec));
        let bound = report.primary.prec().min(rhs.prec());
        assert!(bound >= 24 * 6);
        assert_eq!(report.primary.first_mismatch(&rhs, bound), None);
        // And the mode gate rejects out-of-range indices.
        assert!(s_r_pipeline(3, &d, 12, PipelineMode::EtaR, PipelinePath::Direct, None).is_err());
        assert!(s_r_pipeline(9, &d, 12, PipelineMode::Eta3R, PipelinePath::Direct, None).is_err());
    }

    #[test]
    fn family_bridge_relation() {
        // Sh_1 of the reindexed series equals S_1 ⊗ unit for both variants.
        let prec = 2001;
        let f = &eta_series(prec) * &delta(prec);
        let sp = spec(1, 12, LiftVariant::Eta24);
        let rep = lift_relation_check(&f, &sp).unwrap();
        assert_eq!(rep.first_mismatch, None);
        assert!(rep.checked_through >= 24 * 40, "bound {}", rep.checked_through);

        let f3 = &eta_series(prec).pow(3) * &delta(prec);
        let sp8 = spec(1, 13, LiftVariant::Eta8);
        let rep8 = lift_relation_check(&f3, &sp8).unwrap();
        assert_eq!(rep8.first_mismatch, None);
        assert!(rep8.checked_through >= 24 * 20);

        let z = Series24::zero(500);
        let repz = lift_relation_check(&z, &sp).unwrap();
        assert_eq!(repz.first_mismatch, None);
        assert!(repz.lhs.is_zero() && repz.rhs.is_zero());
    }
}
