//! Expression grammar, normal forms, and derived invariants for
//! eta-quotients and generalized eta-quotients.
//!
//! An [`EtaExpr`] is the parsed product of `eta(δ)` and `geta(δ,g)` factors
//! with rational exponents (denominator 1 or 2). [`normalize`] merges factors
//! per base, canonicalizes `g` into `[0, δ/2]`, splits factors into numerator
//! and denominator, and partitions generalized factors into the generic,
//! half (`g = δ/2`), and zero (`g = 0`) classes. [`profile`] derives the
//! exact invariants (prefix exponent, weight, gcd `D`, lcm `L`, level) and
//! [`expand`] produces the truncated integral q-series.

mod parser;

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::Rational64;
use num::traits::{Signed, Zero};
use num::Integer;

pub use parser::parse;

use crate::modform::bernoulli_p2;
use crate::qseries::{eta_cube_support, pentagonal_support, CoefficientRing, QSeries};
use crate::{Error, Rat, Result};

/// Base symbol of a single factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactorBase {
    /// `eta(δ)`: the Dedekind eta-function at argument `δτ`.
    Ordinary { delta: u64 },
    /// `geta(δ, g)`: the generalized eta-function `η_{δ,g}(τ)`,
    /// with `g` stored reduced mod `δ`.
    Generalized { delta: u64, g: u64 },
}

/// A parsed eta-quotient: an ordered product of factors with exact rational
/// exponents (denominator 1 or 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaExpr {
    factors: Vec<(FactorBase, Rational64)>,
}

impl EtaExpr {
    pub fn new(factors: Vec<(FactorBase, Rational64)>) -> EtaExpr {
        let factors = factors
            .into_iter()
            .map(|(base, e)| match base {
                FactorBase::Generalized { delta, g } => (
                    FactorBase::Generalized {
                        delta,
                        g: g % delta,
                    },
                    e,
                ),
                ordinary => (ordinary, e),
            })
            .collect();
        EtaExpr { factors }
    }

    pub fn one() -> EtaExpr {
        EtaExpr {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[(FactorBase, Rational64)] {
        &self.factors
    }

    /// Concatenate two products.
    pub fn mul(mut self, other: EtaExpr) -> EtaExpr {
        self.factors.extend(other.factors);
        self
    }

    /// Raise every exponent by the integer factor `e`.
    pub fn pow(mut self, e: i64) -> EtaExpr {
        for (_, exp) in &mut self.factors {
            *exp *= e;
        }
        self
    }

    /// Substitute `τ -> mτ`: `η(δτ) -> η(mδτ)` and `η_{δ,g}(mτ) = η_{mδ,mg}(τ)`.
    pub fn dilate_argument(self, m: u64) -> EtaExpr {
        EtaExpr::new(
            self.factors
                .into_iter()
                .map(|(base, e)| match base {
                    FactorBase::Ordinary { delta } => {
                        (FactorBase::Ordinary { delta: delta * m }, e)
                    }
                    FactorBase::Generalized { delta, g } => (
                        FactorBase::Generalized {
                            delta: delta * m,
                            g: g * m,
                        },
                        e,
                    ),
                })
                .collect(),
        )
    }
}

fn write_factor(
    f: &mut fmt::Formatter<'_>,
    base: &FactorBase,
    exponent: Rational64,
) -> fmt::Result {
    match base {
        FactorBase::Ordinary { delta } => write!(f, "eta({delta})")?,
        FactorBase::Generalized { delta, g } => write!(f, "geta({delta},{g})")?,
    }
    if exponent != Rational64::from_integer(1) {
        if exponent.is_integer() {
            write!(f, "^{}", exponent.numer())?;
        } else {
            write!(f, "^({}/2)", exponent.numer())?;
        }
    }
    Ok(())
}

fn write_quotient(f: &mut fmt::Formatter<'_>, factors: &[(FactorBase, Rational64)]) -> fmt::Result {
    let mut wrote_numerator = false;
    for &(ref base, e) in factors.iter().filter(|&&(_, e)| e.is_positive()) {
        if wrote_numerator {
            write!(f, "*")?;
        }
        write_factor(f, base, e)?;
        wrote_numerator = true;
    }
    if !wrote_numerator {
        write!(f, "1")?;
    }
    for &(ref base, e) in factors.iter().filter(|&&(_, e)| e.is_negative()) {
        write!(f, "/")?;
        write_factor(f, base, -e)?;
    }
    Ok(())
}

impl fmt::Display for EtaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.iter().all(|&(_, e)| e.is_zero()) {
            return write!(f, "1");
        }
        write_quotient(f, &self.factors)
    }
}

/// A validated eta-quotient with factors merged per base, `g` canonicalized
/// into `[0, δ/2]`, and exponents split by sign. Ordinary factors and the
/// three generalized classes are kept separate; lists are sorted by `δ` and
/// all stored exponents are positive.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NormalForm {
    /// Ordinary numerator `(δ_i, r_i)`, `r_i ∈ ℤ_{>0}`.
    ordinary_num: Vec<(u64, i64)>,
    /// Ordinary denominator `(γ_i, s_i)`, `s_i ∈ ℤ_{>0}`.
    ordinary_den: Vec<(u64, i64)>,
    /// Generic class `(δ, g, r)` with `0 < g < δ/2`, `r ∈ ℤ_{>0}`.
    generic_num: Vec<(u64, u64, i64)>,
    generic_den: Vec<(u64, u64, i64)>,
    /// Half class `(δ', r')` for `η_{δ',δ'/2}`, `r' ∈ ½ℤ_{>0}`, `δ'` even.
    half_num: Vec<(u64, Rational64)>,
    half_den: Vec<(u64, Rational64)>,
    /// Zero class `(δ'', r'')` for `η_{δ'',0}`, `r'' ∈ ½ℤ_{>0}`.
    zero_num: Vec<(u64, Rational64)>,
    zero_den: Vec<(u64, Rational64)>,
}

/// Merge exponents per base, canonicalize, validate the half-integer class
/// rules, and split by sign.
pub fn normalize(expr: &EtaExpr) -> Result<NormalForm> {
    let mut ordinary: BTreeMap<u64, Rational64> = BTreeMap::new();
    let mut generic: BTreeMap<(u64, u64), Rational64> = BTreeMap::new();
    let mut half: BTreeMap<u64, Rational64> = BTreeMap::new();
    let mut zero: BTreeMap<u64, Rational64> = BTreeMap::new();

    for &(base, e) in expr.factors() {
        match base {
            FactorBase::Ordinary { delta } => *ordinary.entry(delta).or_default() += e,
            FactorBase::Generalized { delta, g } => {
                let g = g % delta;
                let g = g.min(delta - g);
                if g == 0 {
                    *zero.entry(delta).or_default() += e;
                } else if 2 * g == delta {
                    *half.entry(delta).or_default() += e;
                } else {
                    *generic.entry((delta, g)).or_default() += e;
                }
            }
        }
    }

    let mut nf = NormalForm::default();
    for (delta, e) in ordinary {
        if e.is_zero() {
            continue;
        }
        if !e.is_integer() {
            return Err(Error::InvalidExponent(format!(
                "eta({delta}) carries the half-integer exponent {e}; half-integer \
                 exponents are permitted only on geta(δ,0) and geta(δ,δ/2)"
            )));
        }
        let r = e.to_integer();
        if r > 0 {
            nf.ordinary_num.push((delta, r));
        } else {
            nf.ordinary_den.push((delta, -r));
        }
    }
    for ((delta, g), e) in generic {
        if e.is_zero() {
            continue;
        }
        if !e.is_integer() {
            return Err(Error::InvalidExponent(format!(
                "geta({delta},{g}) carries the half-integer exponent {e}, but \
                 g ∉ {{0, δ/2}}"
            )));
        }
        let r = e.to_integer();
        if r > 0 {
            nf.generic_num.push((delta, g, r));
        } else {
            nf.generic_den.push((delta, g, -r));
        }
    }
    for (delta, e) in half {
        if e.is_zero() {
            continue;
        }
        if e.is_positive() {
            nf.half_num.push((delta, e));
        } else {
            nf.half_den.push((delta, -e));
        }
    }
    for (delta, e) in zero {
        if e.is_zero() {
            continue;
        }
        if e.is_positive() {
            nf.zero_num.push((delta, e));
        } else {
            nf.zero_den.push((delta, -e));
        }
    }
    Ok(nf)
}

impl NormalForm {
    pub fn ordinary_num(&self) -> &[(u64, i64)] {
        &self.ordinary_num
    }

    pub fn ordinary_den(&self) -> &[(u64, i64)] {
        &self.ordinary_den
    }

    pub fn generic_num(&self) -> &[(u64, u64, i64)] {
        &self.generic_num
    }

    pub fn generic_den(&self) -> &[(u64, u64, i64)] {
        &self.generic_den
    }

    pub fn half_num(&self) -> &[(u64, Rational64)] {
        &self.half_num
    }

    pub fn half_den(&self) -> &[(u64, Rational64)] {
        &self.half_den
    }

    pub fn zero_num(&self) -> &[(u64, Rational64)] {
        &self.zero_num
    }

    pub fn zero_den(&self) -> &[(u64, Rational64)] {
        &self.zero_den
    }

    /// True when only ordinary eta factors appear.
    pub fn is_ordinary(&self) -> bool {
        self.generic_num.is_empty()
            && self.generic_den.is_empty()
            && self.half_num.is_empty()
            && self.half_den.is_empty()
            && self.zero_num.is_empty()
            && self.zero_den.is_empty()
    }

    /// True for the constant 1.
    pub fn is_empty(&self) -> bool {
        self.is_ordinary() && self.ordinary_num.is_empty() && self.ordinary_den.is_empty()
    }

    /// All factors in generalized `η_{δ,g}` form as `(δ, g, signed exponent)`.
    /// Ordinary factors fold into the zero class: `η(δτ) = η_{δ,0}^{1/2}`.
    pub fn generalized_factors(&self) -> Vec<(u64, u64, Rational64)> {
        let mut out = Vec::new();
        let half = Rational64::new(1, 2);
        for &(d, r) in &self.ordinary_num {
            out.push((d, 0, half * r));
        }
        for &(d, s) in &self.ordinary_den {
            out.push((d, 0, -(half * s)));
        }
        for &(d, g, r) in &self.generic_num {
            out.push((d, g, Rational64::from_integer(r)));
        }
        for &(d, g, s) in &self.generic_den {
            out.push((d, g, -Rational64::from_integer(s)));
        }
        for &(d, r) in &self.half_num {
            out.push((d, d / 2, r));
        }
        for &(d, s) in &self.half_den {
            out.push((d, d / 2, -s));
        }
        for &(d, r) in &self.zero_num {
            out.push((d, 0, r));
        }
        for &(d, s) in &self.zero_den {
            out.push((d, 0, -s));
        }
        out
    }

    /// Signed ordinary factors `(δ, r)` when the form is purely ordinary.
    pub fn ordinary_factors(&self) -> Option<Vec<(u64, i64)>> {
        if !self.is_ordinary() {
            return None;
        }
        let mut out: Vec<(u64, i64)> = self.ordinary_num.clone();
        out.extend(self.ordinary_den.iter().map(|&(d, s)| (d, -s)));
        out.sort_unstable();
        Some(out)
    }

    /// Every `δ` or `γ` parameter appearing in the form.
    pub fn all_deltas(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .ordinary_num
            .iter()
            .chain(&self.ordinary_den)
            .map(|&(d, _)| d)
            .collect();
        out.extend(
            self.half_num
                .iter()
                .chain(&self.half_den)
                .chain(&self.zero_num)
                .chain(&self.zero_den)
                .map(|&(d, _)| d),
        );
        out.extend(
            self.generic_num
                .iter()
                .chain(&self.generic_den)
                .map(|&(d, _, _)| d),
        );
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Exact q-exponent prefix of the full expansion: the sum of per-factor
    /// prefixes `δr/24` (ordinary) and `P₂(g/δ)·δ·r/2` (generalized).
    pub fn prefix(&self) -> Rat {
        let mut p = Rat::zero();
        for &(d, r) in &self.ordinary_num {
            p += Rat::new(BigInt::from(d) * BigInt::from(r), BigInt::from(24));
        }
        for &(d, s) in &self.ordinary_den {
            p -= Rat::new(BigInt::from(d) * BigInt::from(s), BigInt::from(24));
        }
        for (d, g, r) in self
            .generic_num
            .iter()
            .map(|&(d, g, r)| (d, g, Rational64::from_integer(r)))
            .chain(
                self.generic_den
                    .iter()
                    .map(|&(d, g, s)| (d, g, -Rational64::from_integer(s))),
            )
            .chain(self.half_num.iter().map(|&(d, r)| (d, d / 2, r)))
            .chain(self.half_den.iter().map(|&(d, s)| (d, d / 2, -s)))
            .chain(self.zero_num.iter().map(|&(d, r)| (d, 0, r)))
            .chain(self.zero_den.iter().map(|&(d, s)| (d, 0, -s)))
        {
            let x = Rat::new(BigInt::from(g), BigInt::from(d));
            p += bernoulli_p2(&x)
                * Rat::new(
                    BigInt::from(d) * BigInt::from(*r.numer()),
                    BigInt::from(2) * BigInt::from(*r.denom()),
                );
        }
        p
    }

    /// Rebuild an expression (numerator factors then denominator factors).
    pub fn to_expr(&self) -> EtaExpr {
        let mut factors = Vec::new();
        for &(d, r) in &self.ordinary_num {
            factors.push((FactorBase::Ordinary { delta: d }, Rational64::from_integer(r)));
        }
        for &(d, g, r) in &self.generic_num {
            factors.push((
                FactorBase::Generalized { delta: d, g },
                Rational64::from_integer(r),
            ));
        }
        for &(d, r) in &self.half_num {
            factors.push((FactorBase::Generalized { delta: d, g: d / 2 }, r));
        }
        for &(d, r) in &self.zero_num {
            factors.push((FactorBase::Generalized { delta: d, g: 0 }, r));
        }
        for &(d, s) in &self.ordinary_den {
            factors.push((
                FactorBase::Ordinary { delta: d },
                Rational64::from_integer(-s),
            ));
        }
        for &(d, g, s) in &self.generic_den {
            factors.push((
                FactorBase::Generalized { delta: d, g },
                Rational64::from_integer(-s),
            ));
        }
        for &(d, s) in &self.half_den {
            factors.push((FactorBase::Generalized { delta: d, g: d / 2 }, -s));
        }
        for &(d, s) in &self.zero_den {
            factors.push((FactorBase::Generalized { delta: d, g: 0 }, -s));
        }
        EtaExpr::new(factors)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_quotient(f, &self.to_expr().factors)
    }
}

/// Which profile family a normal form belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// Only ordinary eta factors.
    Ordinary,
    /// At least one generalized factor.
    Generalized,
}

/// Derived invariants of a normal form, all exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientProfile {
    pub kind: FormKind,
    /// `E_G = Σδ_i r_i - Σγ_i s_i` for ordinary forms (24 times the prefix);
    /// for generalized forms the order of vanishing at infinity of the
    /// `Ñτ`-dilated form (`Ñ` times the prefix).
    pub e: Rat,
    /// Weight `k ∈ ½ℤ`: half the signed exponent sum for ordinary forms;
    /// the signed zero-class exponent sum for generalized forms.
    pub weight: Rat,
    /// `D`: gcd of the numerator `δ`s (ordinary), or of the generic/half/zero
    /// numerator `δ`s together with the half-class denominator `γ'/2`s
    /// (generalized). 0 when no contributing factor exists.
    pub d: u64,
    /// lcm of every `δ` and `γ` in the form (1 for the empty form).
    pub l: u64,
    /// Level `576·L²`.
    pub level: u64,
    /// `Ñ = 24·L`.
    pub n_tilde: u64,
    /// Exact q-exponent prefix of the expansion.
    pub prefix: Rat,
}

/// Compute all profile invariants of a normal form.
pub fn profile(nf: &NormalForm) -> QuotientProfile {
    let l = nf.all_deltas().iter().fold(1u64, |acc, &d| acc.lcm(&d));
    let n_tilde = 24 * l;
    let level = 576u64
        .checked_mul(l * l)
        .expect("level 576·L² exceeds u64");
    let prefix = nf.prefix();

    if nf.is_ordinary() {
        let e = Rat::from_integer(
            nf.ordinary_num
                .iter()
                .map(|&(d, r)| d as i128 * r as i128)
                .sum::<i128>()
                .checked_sub(
                    nf.ordinary_den
                        .iter()
                        .map(|&(d, s)| d as i128 * s as i128)
                        .sum::<i128>(),
                )
                .map(BigInt::from)
                .expect("E_G overflow"),
        );
        let sum_r: i64 = nf.ordinary_num.iter().map(|&(_, r)| r).sum();
        let sum_s: i64 = nf.ordinary_den.iter().map(|&(_, s)| s).sum();
        let weight = Rat::new(BigInt::from(sum_r - sum_s), BigInt::from(2));
        let d = nf
            .ordinary_num
            .iter()
            .fold(0u64, |acc, &(delta, _)| acc.gcd(&delta));
        QuotientProfile {
            kind: FormKind::Ordinary,
            e,
            weight,
            d,
            l,
            level,
            n_tilde,
            prefix,
        }
    } else {
        let e = &prefix * Rat::from_integer(BigInt::from(n_tilde));
        let mut weight = Rat::zero();
        for &(_, r) in &nf.zero_num {
            weight += Rat::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        }
        for &(_, s) in &nf.zero_den {
            weight -= Rat::new(BigInt::from(*s.numer()), BigInt::from(*s.denom()));
        }
        // Ordinary factors fold into the zero class with halved exponents.
        for &(_, r) in &nf.ordinary_num {
            weight += Rat::new(BigInt::from(r), BigInt::from(2));
        }
        for &(_, s) in &nf.ordinary_den {
            weight -= Rat::new(BigInt::from(s), BigInt::from(2));
        }
        let mut d = 0u64;
        for &(delta, _) in nf.zero_num.iter().chain(&nf.half_num) {
            d = d.gcd(&delta);
        }
        for &(delta, _, _) in &nf.generic_num {
            d = d.gcd(&delta);
        }
        for &(delta, _) in &nf.ordinary_num {
            d = d.gcd(&delta);
        }
        for &(gamma, _) in &nf.half_den {
            d = d.gcd(&(gamma / 2));
        }
        QuotientProfile {
            kind: FormKind::Generalized,
            e,
            weight,
            d,
            l,
            level,
            n_tilde,
            prefix,
        }
    }
}

/// Expand the integral series `Σ b(n) qⁿ` of a normal form, truncated at `T`
/// (the exact prefix is carried on the result). Half- and zero-class factors
/// are rewritten to ordinary eta factors (`η_{δ,0} = η(δτ)²`,
/// `η_{δ,δ/2} = η(δτ/2)²·η(δτ)^{-2}`) before expansion, so only integer
/// eta powers arise.
pub fn expand(nf: &NormalForm, t: usize, ring: CoefficientRing) -> Result<QSeries> {
    ring.validate()?;
    let mut ordinary: BTreeMap<u64, i64> = BTreeMap::new();
    for &(d, r) in &nf.ordinary_num {
        *ordinary.entry(d).or_default() += r;
    }
    for &(d, s) in &nf.ordinary_den {
        *ordinary.entry(d).or_default() -= s;
    }
    for (d, e2) in nf
        .zero_num
        .iter()
        .map(|&(d, r)| (d, r * 2))
        .chain(nf.zero_den.iter().map(|&(d, s)| (d, -s * 2)))
    {
        // 2r ∈ ℤ by the class invariant.
        *ordinary.entry(d).or_default() += e2.to_integer();
    }
    for (d, e2) in nf
        .half_num
        .iter()
        .map(|&(d, r)| (d, r * 2))
        .chain(nf.half_den.iter().map(|&(d, s)| (d, -s * 2)))
    {
        let e2 = e2.to_integer();
        *ordinary.entry(d / 2).or_default() += e2;
        *ordinary.entry(d).or_default() -= e2;
    }

    let mut s = QSeries::one(ring, t);
    for (&delta, &e) in &ordinary {
        if e == 0 {
            continue;
        }
        let cubes = e.unsigned_abs() / 3;
        let singles = e.unsigned_abs() % 3;
        let cube = if cubes > 0 {
            Some(eta_cube_support(delta as usize, t))
        } else {
            None
        };
        let single = if singles > 0 {
            Some(pentagonal_support(delta as usize, t))
        } else {
            None
        };
        for _ in 0..cubes {
            match (e > 0, cube.as_ref()) {
                (true, Some(f)) => s.mul_sparse(f),
                (false, Some(f)) => s.div_sparse(f),
                _ => unreachable!(),
            }
        }
        for _ in 0..singles {
            match (e > 0, single.as_ref()) {
                (true, Some(f)) => s.mul_sparse(f),
                (false, Some(f)) => s.div_sparse(f),
                _ => unreachable!(),
            }
        }
    }

    for (d, g, e) in nf
        .generic_num
        .iter()
        .map(|&(d, g, r)| (d, g, r))
        .chain(nf.generic_den.iter().map(|&(d, g, r)| (d, g, -r)))
    {
        let (d, g) = (d as usize, g as usize);
        for _ in 0..e.unsigned_abs() {
            for start in [g, d - g] {
                let mut exp = start;
                while exp <= t {
                    if e > 0 {
                        s.mul_binomial(exp, -1);
                    } else {
                        s.div_binomial(exp, -1);
                    }
                    exp += d;
                }
            }
        }
    }

    Ok(s.with_prefix(nf.prefix()))
}

/// Built-in expression families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedFamily {
    /// `1/eta(1)`: the partition generating function.
    PartitionGen,
    /// `eta(t)/eta(1)`: t-regular partitions.
    TRegular { t: u64 },
    /// `eta(t)^z/eta(1)`: the hook-length family at `y = +1`.
    HanY1 { t: u64, z: i64 },
    /// `eta(t)^{2t-z}·eta(4t)^{t-z}/(eta(1)·eta(2t)^{3(t-z)})`: the
    /// hook-length family at `y = -1`.
    HanYm1 { t: u64, z: i64 },
}

/// Construct the expression for a named family.
pub fn build_named(family: NamedFamily) -> Result<EtaExpr> {
    let int = Rational64::from_integer;
    match family {
        NamedFamily::PartitionGen => Ok(EtaExpr::new(vec![(
            FactorBase::Ordinary { delta: 1 },
            int(-1),
        )])),
        NamedFamily::TRegular { t } => {
            require_t(t)?;
            Ok(EtaExpr::new(vec![
                (FactorBase::Ordinary { delta: t }, int(1)),
                (FactorBase::Ordinary { delta: 1 }, int(-1)),
            ]))
        }
        NamedFamily::HanY1 { t, z } => {
            require_t(t)?;
            Ok(EtaExpr::new(vec![
                (FactorBase::Ordinary { delta: t }, int(z)),
                (FactorBase::Ordinary { delta: 1 }, int(-1)),
            ]))
        }
        NamedFamily::HanYm1 { t, z } => {
            require_t(t)?;
            let t_i = t as i64;
            Ok(EtaExpr::new(vec![
                (FactorBase::Ordinary { delta: t }, int(2 * t_i - z)),
                (FactorBase::Ordinary { delta: 4 * t }, int(t_i - z)),
                (FactorBase::Ordinary { delta: 1 }, int(-1)),
                (FactorBase::Ordinary { delta: 2 * t }, int(-3 * (t_i - z))),
            ]))
        }
    }
}

fn require_t(t: u64) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidParameter("family parameter t must be ≥ 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::eta_series;
    use crate::rat;

    fn nf(text: &str) -> NormalForm {
        normalize(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn parse_ordinary_quotient() {
        let e = parse("eta(18)^3/eta(1)").unwrap();
        assert_eq!(
            e.factors(),
            &[
                (
                    FactorBase::Ordinary { delta: 18 },
                    Rational64::from_integer(3)
                ),
                (
                    FactorBase::Ordinary { delta: 1 },
                    Rational64::from_integer(-1)
                ),
            ]
        );
    }

    #[test]
    fn parse_generalized_quotient() {
        let e = parse("geta(9,0)/geta(6,1)").unwrap();
        assert_eq!(
            e.factors(),
            &[
                (
                    FactorBase::Generalized { delta: 9, g: 0 },
                    Rational64::from_integer(1)
                ),
                (
                    FactorBase::Generalized { delta: 6, g: 1 },
                    Rational64::from_integer(-1)
                ),
            ]
        );
    }

    #[test]
    fn half_exponent_on_generic_class_is_rejected() {
        // Parses (the grammar allows denominator 2), fails at normalization.
        let e = parse("geta(6,1)^(1/2)").unwrap();
        let err = normalize(&e).unwrap_err();
        assert!(matches!(err, Error::InvalidExponent(_)), "{err}");
        assert!(normalize(&parse("eta(2)^(1/2)").unwrap()).is_err());
        // ...but is fine on the zero and half classes.
        assert!(normalize(&parse("geta(2,0)^(1/2)").unwrap()).is_ok());
        assert!(normalize(&parse("geta(2,1)^-(1/2)").unwrap()).is_ok());
    }

    #[test]
    fn parse_rejects_bad_syntax() {
        for bad in [
            "eta(0)",
            "eta(2",
            "geta(6)",
            "eta(2)^(1/3)",
            "2*eta(1)",
            "eta(2)eta(3)",
            "foo(3)",
            "",
        ] {
            let err = parse(bad).unwrap_err();
            assert!(matches!(err, Error::Syntax { .. }), "{bad:?} gave {err}");
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        match parse("eta(5)^(1/3)").unwrap_err() {
            Error::Syntax { position, .. } => assert_eq!(position, 10),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn normalize_splits_by_sign() {
        let n = nf("eta(18)^3/eta(1)");
        assert_eq!(n.ordinary_num(), &[(18, 3)]);
        assert_eq!(n.ordinary_den(), &[(1, 1)]);
        assert!(n.is_ordinary());
    }

    #[test]
    fn normalize_reduces_g_by_symmetry() {
        // -4 ≡ 1 mod 5 up to sign.
        let a = nf("geta(5,4)");
        let b = nf("geta(5,1)");
        assert_eq!(a, b);
        assert_eq!(a.generic_num(), &[(5, 1, 1)]);
    }

    #[test]
    fn normalize_cancels_to_constant_one() {
        let n = nf("eta(2)^2/eta(2)^2");
        assert!(n.is_empty());
        assert_eq!(n.to_string(), "1");
    }

    #[test]
    fn normalize_merges_collisions() {
        let n = nf("eta(2)^2*eta(2)*geta(6,5)*geta(6,1)^2");
        assert_eq!(n.ordinary_num(), &[(2, 3)]);
        assert_eq!(n.generic_num(), &[(6, 1, 3)]);
    }

    #[test]
    fn display_round_trips_through_parser() {
        for text in [
            "eta(18)^3/eta(1)",
            "geta(9,0)/geta(6,1)",
            "1/eta(1)",
            "geta(6,3)^(3/2)*eta(2)/geta(4,0)^(1/2)",
            "1",
        ] {
            let n = nf(text);
            let reparsed = normalize(&parse(&n.to_string()).unwrap()).unwrap();
            assert_eq!(n, reparsed, "{text} printed as {n}");
        }
    }

    #[test]
    fn profile_of_han_18_3() {
        let p = profile(&nf("eta(18)^3/eta(1)"));
        assert_eq!(p.kind, FormKind::Ordinary);
        assert_eq!(p.weight, rat(1, 1));
        assert_eq!(p.d, 18);
        assert_eq!(p.l, 18);
        assert_eq!(p.e, rat(53, 1));
        assert_eq!(p.prefix, rat(53, 24));
        assert_eq!(p.level, 576 * 18 * 18);
        assert_eq!(p.n_tilde, 24 * 18);
    }

    #[test]
    fn profile_of_generalized_example() {
        let p = profile(&nf("geta(9,0)/geta(6,1)"));
        assert_eq!(p.kind, FormKind::Generalized);
        assert_eq!(p.d, 9);
        assert_eq!(p.weight, rat(1, 1));
        assert_eq!(p.l, 18);
        assert_eq!(p.n_tilde, 432);
        // E = Ñ·prefix with prefix = 3/4 - 1/12 = 2/3.
        assert_eq!(p.prefix, rat(2, 3));
        assert_eq!(p.e, rat(288, 1));
    }

    #[test]
    fn profile_of_empty_form() {
        let p = profile(&nf("1"));
        assert_eq!(p.weight, rat(0, 1));
        assert_eq!(p.e, rat(0, 1));
        assert_eq!(p.d, 0);
        assert_eq!(p.l, 1);
    }

    #[test]
    fn d_ignores_denominator_parameters() {
        // Mutating γ entries must not change D.
        let base = profile(&nf("eta(18)^3/eta(1)"));
        for den in ["eta(2)", "eta(5)^4", "eta(7)/eta(3)^2"] {
            let p = profile(&nf(&format!("eta(18)^3/{den}")));
            assert_eq!(p.d, base.d, "denominator {den} changed D");
        }
        let gbase = profile(&nf("geta(9,0)/geta(6,1)"));
        for den in ["geta(12,5)", "geta(10,0)", "eta(7)"] {
            let p = profile(&nf(&format!("geta(9,0)/geta(6,1)/{den}")));
            assert_eq!(p.d, gbase.d, "denominator {den} changed D_H");
        }
        // ...while the half-class denominator γ'/2 does enter D_H.
        let p = profile(&nf("geta(9,0)/geta(6,3)"));
        assert_eq!(p.d, 3);
    }

    #[test]
    fn expand_partition_generating_function() {
        let s = expand(&nf("1/eta(1)"), 8, CoefficientRing::Exact).unwrap();
        assert_eq!(s.coeff(4), BigInt::from(5));
        assert_eq!(
            s.coeffs_bigint(),
            [1, 1, 2, 3, 5, 7, 11, 15, 22].map(BigInt::from)
        );
        assert_eq!(*s.prefix(), rat(-1, 24));
    }

    #[test]
    fn expand_2_regular_series() {
        // Partitions with no even part (= partitions into odd parts).
        let s = expand(&nf("eta(2)/eta(1)"), 7, CoefficientRing::Exact).unwrap();
        assert_eq!(
            s.coeffs_bigint(),
            [1, 1, 1, 2, 2, 3, 4, 5].map(BigInt::from)
        );
    }

    #[test]
    fn expand_rogers_ramanujan_quotient() {
        // The Rogers-Ramanujan residue-class product, multiplied out factor
        // by factor: geta(5,2)/geta(5,1) carries the ±2 classes over the ±1
        // classes, and its reciprocal is the continued-fraction product
        // q^{1/5}∏(1-q^{5n+1})(1-q^{5n+4})/((1-q^{5n+2})(1-q^{5n+3})).
        let t = 50;
        let mut direct = QSeries::one(CoefficientRing::Exact, t);
        for n in 0..=t {
            for e in [5 * n + 2, 5 * n + 3] {
                if e <= t {
                    direct.mul_binomial(e, -1);
                }
            }
        }
        for n in 0..=t {
            for e in [5 * n + 1, 5 * n + 4] {
                if e <= t {
                    direct.div_binomial(e, -1);
                }
            }
        }
        let s = expand(&nf("geta(5,2)/geta(5,1)"), t, CoefficientRing::Exact).unwrap();
        assert_eq!(s.coeffs_bigint(), direct.coeffs_bigint());
        // Prefix: P₂(2/5)·5/2 - P₂(1/5)·5/2 = -11/60 - 1/60 = -1/5, so the
        // reciprocal quotient carries q^{1/5}.
        assert_eq!(*s.prefix(), rat(-1, 5));
        let inv = expand(&nf("geta(5,1)/geta(5,2)"), t, CoefficientRing::Exact).unwrap();
        assert_eq!(*inv.prefix(), rat(1, 5));
        assert!(inv.mul(&s).unwrap().is_one());
    }

    #[test]
    fn expand_zero_class_is_eta_squared() {
        for delta in [1usize, 2, 3, 5, 9] {
            let t = 500;
            let e = eta_series(delta, t, CoefficientRing::Exact);
            let sq = e.mul(&e).unwrap();
            let g = expand(
                &nf(&format!("geta({delta},0)")),
                t,
                CoefficientRing::Exact,
            )
            .unwrap();
            assert_eq!(g, sq, "η_{{{delta},0}} ≠ η({delta}τ)²");
        }
    }

    #[test]
    fn expand_half_class_rewrite() {
        // η_{6,3} = η(3τ)²/η(6τ)²: check against the direct binomial product.
        let t = 60;
        let g = expand(&nf("geta(6,3)"), t, CoefficientRing::Exact).unwrap();
        let e3 = eta_series(3, t, CoefficientRing::Exact);
        let e6 = eta_series(6, t, CoefficientRing::Exact);
        let quot = e3
            .mul(&e3)
            .unwrap()
            .div_unit(&e6.mul(&e6).unwrap())
            .unwrap();
        assert_eq!(g, quot);
    }

    #[test]
    fn expand_is_multiplicative() {
        let t = 40;
        let a = nf("eta(2)^3/eta(1)");
        let b = nf("geta(5,1)/eta(3)");
        let product = nf("eta(2)^3/eta(1)*geta(5,1)/eta(3)");
        let ea = expand(&a, t, CoefficientRing::Exact).unwrap();
        let eb = expand(&b, t, CoefficientRing::Exact).unwrap();
        assert_eq!(
            expand(&product, t, CoefficientRing::Exact).unwrap(),
            ea.mul(&eb).unwrap()
        );
    }

    #[test]
    fn expand_prefix_matches_profile() {
        for text in [
            "eta(18)^3/eta(1)",
            "geta(9,0)/geta(6,1)",
            "geta(5,2)/geta(5,1)",
            "eta(4)^6",
            "geta(6,3)^(1/2)*geta(8,0)^(3/2)",
        ] {
            let n = nf(text);
            let p = profile(&n);
            let s = expand(&n, 10, CoefficientRing::Exact).unwrap();
            assert_eq!(*s.prefix(), p.prefix, "{text}");
            match p.kind {
                FormKind::Ordinary => {
                    assert_eq!(p.e, p.prefix * rat(24, 1), "{text}");
                }
                FormKind::Generalized => {
                    assert_eq!(
                        p.e,
                        p.prefix * rat(p.n_tilde as i64, 1),
                        "{text}"
                    );
                }
            }
        }
    }

    #[test]
    fn build_named_families() {
        assert_eq!(
            build_named(NamedFamily::HanY1 { t: 5, z: 1 }).unwrap(),
            build_named(NamedFamily::TRegular { t: 5 }).unwrap()
        );
        assert_eq!(
            build_named(NamedFamily::HanY1 { t: 18, z: 3 }).unwrap(),
            parse("eta(18)^3/eta(1)").unwrap()
        );
        assert_eq!(
            build_named(NamedFamily::HanYm1 { t: 2, z: 1 }).unwrap(),
            parse("eta(2)^3*eta(8)/eta(1)/eta(4)^3").unwrap()
        );
        assert_eq!(
            build_named(NamedFamily::PartitionGen).unwrap(),
            parse("1/eta(1)").unwrap()
        );
        // Zero exponents are simplified away, not rejected.
        let n = normalize(&build_named(NamedFamily::HanYm1 { t: 3, z: 3 }).unwrap()).unwrap();
        assert_eq!(n.ordinary_num(), &[(3, 3)]);
        assert_eq!(n.ordinary_den(), &[(1, 1)]);
    }
}
