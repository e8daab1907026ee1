//! Prime-power lacunarity criteria with exact arithmetic, companion-form
//! construction, and congruence verification on truncated expansions.
//!
//! The criteria decide, for a prime power `p^a` dividing the invariant `D` of
//! a quotient, whether an exact squared-bound inequality `p^{2a} ≥ bound²`
//! holds (plus a positivity condition in the generalized case). When it does,
//! the quotient is lacunary modulo every power of `p`.
//!
//! The constructive side builds the companion quotient `f` (a product of
//! `η^{p^a}(24γτ)/η(24p^aγτ)` ratios over the denominator factors, or their
//! `η_{·,0}` analogues at argument `Ñτ`) and the holomorphic candidate
//! `F = G(24τ)·f^{p^j}`, and verifies on truncated expansions that
//! `f^{p^j} ≡ 1 (mod p^{j+1})` and `F ≡ G(24τ) (mod p^{j+1})`.

use num::bigint::BigInt;
use num::rational::Rational64;
use num::traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::etaexpr::{expand, normalize, profile, EtaExpr, FactorBase, NormalForm};
use crate::modform::RatRepr;
use crate::qseries::CoefficientRing;
use crate::{Error, Rat, Result};

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let trailing = (n - 1).trailing_zeros();
    let odd = (n - 1) >> trailing;
    'witness: for w in SMALL {
        let mut x = powmod(w, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..trailing {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Largest `a` with `p^a | d` (0 when `p ∤ d` or `d = 0`).
pub fn max_dividing_power(d: u64, p: u64) -> u32 {
    if d == 0 {
        return 0;
    }
    let mut a = 0;
    let mut d = d;
    while d % p == 0 {
        d /= p;
        a += 1;
    }
    a
}

fn checked_prime_power(p: u64, a: u32) -> Result<u64> {
    p.checked_pow(a)
        .filter(|&v| v < crate::qseries::MAX_MODULUS)
        .ok_or_else(|| Error::InvalidParameter(format!("p^a = {p}^{a} is out of range")))
}

fn validate_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    Ok(())
}

fn validate_a(a: u32) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidParameter("exponent a must be ≥ 1".into()));
    }
    Ok(())
}

/// Outcome of a lacunarity criterion check. All comparisons are exact; the
/// squared bound is kept as a rational so no radicals are ever evaluated.
#[derive(Clone, Debug)]
pub struct LacunarityVerdict {
    pub expr: String,
    pub p: u64,
    pub a: u32,
    /// Wire token: `"thm1"` (ordinary) or `"thm3"` (generalized).
    pub criterion: &'static str,
    pub bound_sq: Rat,
    /// The positivity value of the generalized criterion; `None` for the
    /// ordinary one.
    pub positivity: Option<Rat>,
    pub satisfied: bool,
    pub reason: String,
}

#[derive(Serialize)]
struct VerdictJson {
    expr: String,
    p: u64,
    a: u32,
    criterion: &'static str,
    bound_sq: RatRepr,
    positivity: Option<RatRepr>,
    satisfied: bool,
    reason: String,
}

impl LacunarityVerdict {
    /// `{expr, p, a, criterion, bound_sq:{num,den}, positivity:{num,den}|null,
    ///   satisfied, reason}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(VerdictJson {
            expr: self.expr.clone(),
            p: self.p,
            a: self.a,
            criterion: self.criterion,
            bound_sq: RatRepr::from(&self.bound_sq),
            positivity: self.positivity.as_ref().map(RatRepr::from),
            satisfied: self.satisfied,
            reason: self.reason.clone(),
        })
        .unwrap()
    }

    fn inapplicable(nf: &NormalForm, p: u64, a: u32, criterion: &'static str, why: &str) -> Self {
        LacunarityVerdict {
            expr: nf.to_string(),
            p,
            a,
            criterion,
            bound_sq: Rat::zero(),
            positivity: None,
            satisfied: false,
            reason: format!("criterion-inapplicable: {why}"),
        }
    }
}

fn decide(
    nf: &NormalForm,
    p: u64,
    a: u32,
    criterion: &'static str,
    d: u64,
    bound_sq: Rat,
    positivity: Option<Rat>,
) -> Result<LacunarityVerdict> {
    let pa = checked_prime_power(p, a)?;
    let (satisfied, reason) = if d == 0 || d % pa != 0 {
        (false, format!("p^a = {pa} does not divide D = {d}"))
    } else {
        let pa_sq = Rat::from_integer(BigInt::from(pa) * BigInt::from(pa));
        if pa_sq >= bound_sq {
            (
                true,
                format!("p^a = {pa} divides D = {d} and p^(2a) = {pa_sq} ≥ bound²"),
            )
        } else {
            (false, format!("p^(2a) = {pa_sq} < bound² = {bound_sq}"))
        }
    };
    Ok(LacunarityVerdict {
        expr: nf.to_string(),
        p,
        a,
        criterion,
        bound_sq,
        positivity,
        satisfied,
        reason,
    })
}

/// Lacunarity criterion for ordinary eta-quotients: satisfied when
/// `p^a | D` and `p^{2a} ≥ (Σγ_i s_i)/(Σ r_i/δ_i)`, requiring integer weight
/// and a nonempty numerator. Inapplicable inputs yield an unsatisfied verdict
/// with a machine-readable reason rather than an error.
pub fn ordinary_criterion(nf: &NormalForm, p: u64, a: u32) -> Result<LacunarityVerdict> {
    validate_prime(p)?;
    validate_a(a)?;
    if !nf.is_ordinary() {
        return Ok(LacunarityVerdict::inapplicable(
            nf,
            p,
            a,
            "thm1",
            "generalized factors present; use the generalized criterion",
        ));
    }
    if nf.ordinary_num().is_empty() {
        return Ok(LacunarityVerdict::inapplicable(
            nf,
            p,
            a,
            "thm1",
            "empty numerator (Σ r_i/δ_i = 0)",
        ));
    }
    let prof = profile(nf);
    if !prof.weight.is_integer() {
        return Ok(LacunarityVerdict::inapplicable(
            nf,
            p,
            a,
            "thm1",
            &format!("weight {} is not an integer", prof.weight),
        ));
    }
    let mut den_sum = Rat::zero();
    for &(gamma, s) in nf.ordinary_den() {
        den_sum += Rat::from_integer(BigInt::from(gamma) * BigInt::from(s));
    }
    let mut num_sum = Rat::zero();
    for &(delta, r) in nf.ordinary_num() {
        num_sum += Rat::new(BigInt::from(r), BigInt::from(delta));
    }
    let bound_sq = den_sum / num_sum;
    decide(nf, p, a, "thm1", prof.d, bound_sq, None)
}

fn rat64(r: &Rational64) -> Rat {
    Rat::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Lacunarity criterion for generalized eta-quotients: satisfied when
/// `p^a | D_H`, the positivity value
/// `-½Σδ_i r_i + Σ r_i''/δ_i'' + ½Σ r_i'/δ_i' - ½Σγ_i' s_i'` is positive,
/// and `p^{2a}` is at least the squared bound
/// `(Σγ_i s_i + ½Σγ_i' s_i' + Σγ_i'' s_i'' + Σδ_i' r_i')/positivity`.
///
/// Ordinary factors participate through the zero class
/// (`η(δτ) = η_{δ,0}^{1/2}`).
pub fn generalized_criterion(nf: &NormalForm, p: u64, a: u32) -> Result<LacunarityVerdict> {
    validate_prime(p)?;
    validate_a(a)?;
    let mut positivity = Rat::zero();
    let mut bound_num = Rat::zero();
    // Generic class.
    for &(delta, _, r) in nf.generic_num() {
        positivity -= Rat::new(BigInt::from(delta) * BigInt::from(r), BigInt::from(2));
    }
    for &(gamma, _, s) in nf.generic_den() {
        bound_num += Rat::from_integer(BigInt::from(gamma) * BigInt::from(s));
    }
    // Half class.
    for &(delta, r) in nf.half_num() {
        positivity += rat64(&r) / Rat::from_integer(BigInt::from(2 * delta));
        bound_num += rat64(&r) * Rat::from_integer(BigInt::from(delta));
    }
    for &(gamma, s) in nf.half_den() {
        positivity -= rat64(&s) * Rat::new(BigInt::from(gamma), BigInt::from(2));
        bound_num += rat64(&s) * Rat::new(BigInt::from(gamma), BigInt::from(2));
    }
    // Zero class, with ordinary factors folded in at half weight.
    for (delta, r) in nf
        .zero_num()
        .iter()
        .map(|&(d, r)| (d, rat64(&r)))
        .chain(
            nf.ordinary_num()
                .iter()
                .map(|&(d, r)| (d, Rat::new(BigInt::from(r), BigInt::from(2)))),
        )
    {
        positivity += r / Rat::from_integer(BigInt::from(delta));
    }
    for (gamma, s) in nf
        .zero_den()
        .iter()
        .map(|&(d, s)| (d, rat64(&s)))
        .chain(
            nf.ordinary_den()
                .iter()
                .map(|&(d, s)| (d, Rat::new(BigInt::from(s), BigInt::from(2)))),
        )
    {
        bound_num += s * Rat::from_integer(BigInt::from(gamma));
    }

    let prof = profile(nf);
    if !positivity.is_positive() {
        let mut v = LacunarityVerdict::inapplicable(
            nf,
            p,
            a,
            "thm3",
            &format!("positivity value {positivity} is not > 0"),
        );
        v.positivity = Some(positivity);
        return Ok(v);
    }
    let bound_sq = bound_num / &positivity;
    decide(nf, p, a, "thm3", prof.d, bound_sq, Some(positivity))
}

/// Dispatch to the ordinary or generalized criterion by form kind.
pub fn criterion_check(nf: &NormalForm, p: u64, a: u32) -> Result<LacunarityVerdict> {
    if nf.is_ordinary() {
        ordinary_criterion(nf, p, a)
    } else {
        generalized_criterion(nf, p, a)
    }
}

/// Squared bounds of the two hook-length family criteria for odd `z < t`:
/// `t/z` for the `y = +1` family and `4(t + 6t³ - 6t²z)/(9t - 5z)` for the
/// `y = -1` family.
pub fn han_family_bounds(t: u64, z: u64) -> Result<(Rat, Rat)> {
    if z % 2 == 0 || z == 0 || z >= t {
        return Err(Error::InvalidParameter(format!(
            "hook-length family bounds require odd z with 0 < z < t, got t={t} z={z}"
        )));
    }
    let (t, z) = (BigInt::from(t), BigInt::from(z));
    let bound1 = Rat::new(t.clone(), z.clone());
    let numerator =
        BigInt::from(4) * (&t + BigInt::from(6) * &t * &t * &t - BigInt::from(6) * &t * &t * &z);
    let denominator = BigInt::from(9) * &t - BigInt::from(5) * &z;
    Ok((bound1, Rat::new(numerator, denominator)))
}

/// The companion quotient `f` built from the denominator data:
/// `∏ (η^{p^a}(24γ_iτ)/η(24p^aγ_iτ))^{s_i}` for ordinary quotients, and the
/// `η_{·,0}` analogue at argument `Ñτ` over the generic-denominator,
/// half-numerator, half-denominator (at `γ'/2`), and zero-denominator lists
/// for generalized ones. `f ≡ 1 (mod p)` by construction.
pub fn build_companion_f(nf: &NormalForm, p: u64, a: u32) -> Result<EtaExpr> {
    validate_prime(p)?;
    validate_a(a)?;
    let pa = checked_prime_power(p, a)?;
    let pa_i = pa
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter("p^a exceeds exponent range".into()))?;
    let mut factors = Vec::new();
    if nf.is_ordinary() {
        for &(gamma, s) in nf.ordinary_den() {
            factors.push((
                FactorBase::Ordinary { delta: 24 * gamma },
                Rational64::from_integer(pa_i * s),
            ));
            factors.push((
                FactorBase::Ordinary {
                    delta: 24 * pa * gamma,
                },
                Rational64::from_integer(-s),
            ));
        }
    } else {
        let n_tilde = profile(nf).n_tilde;
        let mut ratio = |c: u64, e: Rational64| {
            factors.push((
                FactorBase::Generalized {
                    delta: n_tilde * c,
                    g: 0,
                },
                e * pa_i,
            ));
            factors.push((
                FactorBase::Generalized {
                    delta: n_tilde * c * pa,
                    g: 0,
                },
                -e,
            ));
        };
        for &(gamma, _, s) in nf.generic_den() {
            ratio(gamma, Rational64::from_integer(s));
        }
        for &(delta, r) in nf.half_num() {
            ratio(delta, r);
        }
        for &(gamma, s) in nf.half_den() {
            ratio(gamma / 2, s);
        }
        for &(gamma, s) in nf.zero_den() {
            ratio(gamma, s);
        }
        // Ordinary denominator factors fold in as η_{γ,0}^{s/2}.
        for &(gamma, s) in nf.ordinary_den() {
            ratio(gamma, Rational64::new(s, 2));
        }
    }
    Ok(EtaExpr::new(factors))
}

/// The holomorphic candidate `F = G(24τ)·f^{p^j}` (ordinary) or
/// `H(Ñτ)·f^{p^j}` (generalized).
pub fn build_companion_form(nf: &NormalForm, p: u64, a: u32, j: u32) -> Result<EtaExpr> {
    let f = build_companion_f(nf, p, a)?;
    let pj = checked_prime_power(p, j)?
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter("p^j exceeds exponent range".into()))?;
    let dilation = if nf.is_ordinary() {
        24
    } else {
        profile(nf).n_tilde
    };
    Ok(nf.to_expr().dilate_argument(dilation).mul(f.pow(pj)))
}

/// Weight of the companion form, with its integrality status. Non-integral
/// weights can arise for `p = 2, j = 0` or when the input weight is itself
/// half-odd; callers treat `integral = false` as a warning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionWeight {
    pub weight: Rat,
    pub integral: bool,
}

/// `k_F = ½(Σr_i - Σs_i + Σs_i·p^j(p^a - 1))` for ordinary quotients;
/// `k_F = k_H + (Σs_i + Σr_i' + Σs_i' + Σs_i'')·p^j(p^a - 1)` for
/// generalized ones.
pub fn companion_weight(nf: &NormalForm, p: u64, a: u32, j: u32) -> Result<CompanionWeight> {
    validate_prime(p)?;
    validate_a(a)?;
    let growth =
        Rat::from_integer(BigInt::from(p).pow(j) * (BigInt::from(p).pow(a) - BigInt::from(1)));
    let prof = profile(nf);
    let weight = if nf.is_ordinary() {
        let den_sum: i64 = nf.ordinary_den().iter().map(|&(_, s)| s).sum();
        &prof.weight + Rat::new(BigInt::from(den_sum), BigInt::from(2)) * growth
    } else {
        let mut exponent_sum = Rat::zero();
        for &(_, _, s) in nf.generic_den() {
            exponent_sum += Rat::from_integer(BigInt::from(s));
        }
        for &(_, r) in nf.half_num() {
            exponent_sum += rat64(&r);
        }
        for &(_, s) in nf.half_den() {
            exponent_sum += rat64(&s);
        }
        for &(_, s) in nf.zero_den() {
            exponent_sum += rat64(&s);
        }
        for &(_, s) in nf.ordinary_den() {
            exponent_sum += Rat::new(BigInt::from(s), BigInt::from(2));
        }
        &prof.weight + exponent_sum * growth
    };
    let integral = weight.is_integer();
    Ok(CompanionWeight { weight, integral })
}

/// Verify `f^{p^j} ≡ 1 (mod p^{j+1})` coefficientwise through `q^T` on the
/// truncated expansion of the companion quotient.
pub fn verify_unit_lemma(nf: &NormalForm, p: u64, a: u32, j: u32, t: usize) -> Result<bool> {
    let modulus = checked_prime_power(p, j + 1)?;
    let pj = checked_prime_power(p, j)? as i64;
    let f = build_companion_f(nf, p, a)?;
    let series = expand(&normalize(&f)?, t, CoefficientRing::Mod(modulus))?;
    Ok(series.pow_int(pj)?.is_one())
}

/// Verify `F ≡ G(24τ) (mod p^{j+1})` (resp. `H(Ñτ)` with dilation `Ñ`)
/// coefficientwise through `q^T`, including the exact prefix.
pub fn verify_congruence(nf: &NormalForm, p: u64, a: u32, j: u32, t: usize) -> Result<bool> {
    let modulus = checked_prime_power(p, j + 1)?;
    let dilation = if nf.is_ordinary() {
        24
    } else {
        profile(nf).n_tilde
    } as usize;
    let companion = build_companion_form(nf, p, a, j)?;
    let lhs = expand(&normalize(&companion)?, t, CoefficientRing::Mod(modulus))?;
    let rhs = expand(nf, t / dilation, CoefficientRing::Mod(modulus))?.dilate(dilation, Some(t));
    if lhs.prefix() != rhs.prefix() {
        return Ok(false);
    }
    let rhs_t = rhs.truncation();
    for n in 0..=t {
        let expected = if n <= rhs_t {
            rhs.coeff(n)
        } else {
            BigInt::zero()
        };
        if lhs.coeff(n) != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// User-facing "lacunary modulo p^j" congruence check for `j ≥ 1`: the
/// ambient congruences are verified modulo `p^j` itself, which corresponds
/// to companion exponent index `j - 1` (the constructions give divisibility
/// by `p^{index+1}`).
pub fn verify_lacunary_modulus(
    nf: &NormalForm,
    p: u64,
    a: u32,
    j: u32,
    t: usize,
) -> Result<bool> {
    if j == 0 {
        return Err(Error::InvalidParameter(
            "lacunarity modulus exponent j must be ≥ 1".into(),
        ));
    }
    Ok(verify_unit_lemma(nf, p, a, j - 1, t)? && verify_congruence(nf, p, a, j - 1, t)?)
}
