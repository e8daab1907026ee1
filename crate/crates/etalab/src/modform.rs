//! Cusp enumeration for Γ₀(N) and Γ₁(N), modularity condition checks, exact
//! orders of vanishing at cusps, character evaluation, and holomorphy reports.
//!
//! Everything here is exact rational arithmetic: holomorphy is a sign
//! decision and near-zero orders do occur, so no floating point is used
//! anywhere.

use std::fmt;

use num::bigint::BigInt;
use num::rational::Rational64;
use num::traits::{Signed, ToPrimitive, Zero};
use num::Integer;
use serde::Serialize;

use crate::etaexpr::{profile, NormalForm};
use crate::{Error, Rat, Result};

/// Second Bernoulli polynomial `P₂(x) = {x}² - {x} + 1/6`, exact and
/// periodic with period 1.
pub fn bernoulli_p2(x: &Rat) -> Rat {
    let frac = x - x.floor();
    &frac * &frac - frac + Rat::new(BigInt::from(1), BigInt::from(6))
}

/// Congruence subgroup family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Group {
    Gamma0,
    Gamma1,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Gamma0 => write!(f, "Gamma0"),
            Group::Gamma1 => write!(f, "Gamma1"),
        }
    }
}

/// Cusp `c/d` of Γ₀(N) with `d | N`, `(c, N) = 1`, and `c` running through a
/// complete residue system modulo `(d, N/d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cusp0 {
    pub c: u64,
    pub d: u64,
}

impl fmt::Display for Cusp0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.c, self.d)
    }
}

/// Cusp `λ/(μ·ε)` of Γ₁(N) with `ε | N`, `1 ≤ λ, μ ≤ N`, and
/// `(μ,λ) = (λ,N) = (μ,N) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cusp1 {
    pub lambda: u64,
    pub mu: u64,
    pub epsilon: u64,
}

impl fmt::Display for Cusp1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/({}*{})", self.lambda, self.mu, self.epsilon)
    }
}

/// A cusp of either group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cusp {
    G0(Cusp0),
    G1(Cusp1),
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cusp::G0(c) => c.fmt(f),
            Cusp::G1(c) => c.fmt(f),
        }
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
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

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Number of cusps of Γ₀(N): `Σ_{d|N} φ((d, N/d))`.
pub fn gamma0_cusp_count(n: u64) -> u64 {
    divisors(n)
        .iter()
        .map(|&d| euler_phi(d.gcd(&(n / d))))
        .sum()
}

/// Lift a residue `x` coprime to `m` to a representative coprime to `n`
/// (`m | n`), by scanning the arithmetic progression.
fn lift_coprime(x: u64, m: u64, n: u64) -> u64 {
    let mut c = if x == 0 { m } else { x };
    while c.gcd(&n) != 1 {
        c += m;
    }
    c
}

/// The complete set of inequivalent cusps `C₀(N)`.
pub fn cusp_set_gamma0(n: u64) -> Vec<Cusp0> {
    assert!(n >= 1);
    let mut cusps = Vec::new();
    for d in divisors(n) {
        let m = d.gcd(&(n / d));
        for x in 1..=m {
            if x.gcd(&m) == 1 {
                cusps.push(Cusp0 {
                    c: lift_coprime(x % m, m, n),
                    d,
                });
            }
        }
    }
    cusps
}

/// Enumeration cap for the full `C₁(N)` listing, which grows like `d(N)·φ(N)²`.
pub const GAMMA1_ENUMERATION_CAP: u64 = 10_000;

/// The full listed set `C₁(N)` of (possibly equivalent) cusps. No equivalence
/// detection is attempted; the set is a sound superset for min-order checks.
///
/// The listing grows quadratically in `N`, so levels above
/// [`GAMMA1_ENUMERATION_CAP`] are rejected; order scans at large levels use
/// [`gamma1_order_classes`] instead.
pub fn cusp_set_gamma1(n: u64) -> Result<Vec<Cusp1>> {
    assert!(n >= 1);
    if n > GAMMA1_ENUMERATION_CAP {
        return Err(Error::BudgetExceeded(format!(
            "full C1({n}) enumeration above cap {GAMMA1_ENUMERATION_CAP}; \
             use the divisor-grouped representatives instead"
        )));
    }
    let mut cusps = Vec::new();
    for epsilon in divisors(n) {
        for lambda in 1..=n {
            if lambda.gcd(&n) != 1 {
                continue;
            }
            for mu in 1..=n {
                if mu.gcd(&n) == 1 && mu.gcd(&lambda) == 1 {
                    cusps.push(Cusp1 {
                        lambda,
                        mu,
                        epsilon,
                    });
                }
            }
        }
    }
    Ok(cusps)
}

/// Representatives covering every order value a form with factor parameters
/// `deltas` can attain on the cusps of Γ₁(N).
///
/// The order at `λ/(μ·ε)` depends only on `ε` and on `λ·g mod (δ,ε)` per
/// factor, so one `λ` per residue class modulo `W = lcm_δ (δ,ε)` suffices,
/// with `μ = 1` throughout.
pub fn gamma1_order_classes(n: u64, deltas: &[u64]) -> Vec<Cusp1> {
    let mut cusps = Vec::new();
    for epsilon in divisors(n) {
        let w = deltas
            .iter()
            .fold(1u64, |acc, &d| acc.lcm(&d.gcd(&epsilon)));
        for x in 1..=w {
            if x.gcd(&w) == 1 {
                cusps.push(Cusp1 {
                    lambda: lift_coprime(x % w, w, n),
                    mu: 1,
                    epsilon,
                });
            }
        }
    }
    cusps
}

/// Exact status of one modularity congruence condition.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionStatus {
    /// The exact value of the condition sum.
    pub value: RatRepr,
    /// The modulus the sum must vanish by (24 for Γ₀, 2 for Γ₁).
    pub modulus: u32,
    pub pass: bool,
}

/// Result of the modularity condition check at a level.
#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    pub group: Group,
    pub level: u64,
    pub weight: RatRepr,
    /// Whether the weight is an integer (required by the Γ₀ theorem).
    pub weight_integral: bool,
    /// `Σ δ r_δ mod 24` (Γ₀) or `Σ δ P₂(g/δ) r_{δ,g} mod 2` (Γ₁).
    pub condition_delta: ConditionStatus,
    /// `Σ (N/δ) r_δ mod 24` (Γ₀) or `Σ N/(6δ) r_{δ,g} mod 2` (Γ₁).
    pub condition_level: ConditionStatus,
    pub pass: bool,
}

fn check_deltas_divide(nf: &NormalForm, n: u64) -> Result<()> {
    for d in nf.all_deltas() {
        if n % d != 0 {
            return Err(Error::InvalidLevel(format!(
                "factor parameter {d} does not divide the level {n}"
            )));
        }
    }
    Ok(())
}

/// True when `x` is an integer divisible by `m`.
fn divisible(x: &Rat, m: u64) -> bool {
    x.is_integer() && (x.numer() % BigInt::from(m)).is_zero()
}

fn rat64(r: &Rational64) -> Rat {
    Rat::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Check the eta-quotient modularity conditions for `Γ₀(N)`
/// (`Σδr_δ ≡ Σ(N/δ)r_δ ≡ 0 mod 24`, integer weight) or the generalized
/// conditions for `Γ₁(N)` (`ΣδP₂(g/δ)r ≡ Σ N/(6δ)·r ≡ 0 mod 2`).
pub fn modularity_check(nf: &NormalForm, n: u64, group: Group) -> Result<ModularityReport> {
    check_deltas_divide(nf, n)?;
    let prof = profile(nf);
    let weight_integral = prof.weight.is_integer();
    match group {
        Group::Gamma0 => {
            let factors = nf.ordinary_factors().ok_or_else(|| {
                Error::InvalidParameter(
                    "Γ₀ modularity conditions apply to ordinary eta-quotients only".into(),
                )
            })?;
            let mut sum_delta = Rat::zero();
            let mut sum_level = Rat::zero();
            for &(d, r) in &factors {
                sum_delta += Rat::from_integer(BigInt::from(d) * BigInt::from(r));
                sum_level += Rat::from_integer(BigInt::from(n / d) * BigInt::from(r));
            }
            let c1 = divisible(&sum_delta, 24);
            let c2 = divisible(&sum_level, 24);
            Ok(ModularityReport {
                group,
                level: n,
                weight: RatRepr::from(&prof.weight),
                weight_integral,
                condition_delta: ConditionStatus {
                    value: RatRepr::from(&sum_delta),
                    modulus: 24,
                    pass: c1,
                },
                condition_level: ConditionStatus {
                    value: RatRepr::from(&sum_level),
                    modulus: 24,
                    pass: c2,
                },
                pass: weight_integral && c1 && c2,
            })
        }
        Group::Gamma1 => {
            let mut sum_delta = Rat::zero();
            let mut sum_level = Rat::zero();
            for (d, g, r) in nf.generalized_factors() {
                let r = rat64(&r);
                let p2 = bernoulli_p2(&Rat::new(BigInt::from(g), BigInt::from(d)));
                sum_delta += p2 * Rat::from_integer(BigInt::from(d)) * &r;
                sum_level += Rat::new(BigInt::from(n), BigInt::from(6 * d)) * &r;
            }
            let c1 = divisible(&sum_delta, 2);
            let c2 = divisible(&sum_level, 2);
            Ok(ModularityReport {
                group,
                level: n,
                weight: RatRepr::from(&prof.weight),
                weight_integral,
                condition_delta: ConditionStatus {
                    value: RatRepr::from(&sum_delta),
                    modulus: 2,
                    pass: c1,
                },
                condition_level: ConditionStatus {
                    value: RatRepr::from(&sum_level),
                    modulus: 2,
                    pass: c2,
                },
                pass: c1 && c2,
            })
        }
    }
}

/// Kronecker symbol `(a/n)`, total on all integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.magnitude() == &1u32.into() { 1 } else { 0 };
    }
    let mut sign = 1i32;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            sign = -sign;
        }
    }
    let two = BigInt::from(2);
    let mut twos = 0u32;
    while n.is_even() {
        n /= &two;
        twos += 1;
    }
    if twos > 0 {
        if a.is_even() {
            return 0;
        }
        if twos % 2 == 1 {
            let a8 = a.mod_floor(&BigInt::from(8)).to_u32().unwrap();
            if a8 == 3 || a8 == 5 {
                sign = -sign;
            }
        }
    }
    sign * jacobi_odd(a.clone(), n)
}

/// Jacobi symbol for odd positive `m`.
fn jacobi_odd(mut a: BigInt, mut m: BigInt) -> i32 {
    debug_assert!(m.is_odd() && m.is_positive());
    let two = BigInt::from(2);
    a = a.mod_floor(&m);
    let mut sign = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let m8 = m.mod_floor(&BigInt::from(8)).to_u32().unwrap();
            if m8 == 3 || m8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a.mod_floor(&BigInt::from(4)).to_u32().unwrap() == 3
            && m.mod_floor(&BigInt::from(4)).to_u32().unwrap() == 3
        {
            sign = -sign;
        }
        a = a.mod_floor(&m);
    }
    if m == BigInt::from(1) {
        sign
    } else {
        0
    }
}

/// The character value `χ(d) = ((-1)^k s / d)` with `s = ∏ δ^{r_δ}` for an
/// integer-weight ordinary eta-quotient. A rational `s = u/v` is evaluated
/// as `(u·v / d)`, which agrees with the symbol whenever `(v/d) ≠ 0`.
pub fn kronecker_chi(nf: &NormalForm, d: i64) -> Result<i32> {
    let factors = nf.ordinary_factors().ok_or_else(|| {
        Error::InvalidParameter("the eta-quotient character is defined for ordinary forms".into())
    })?;
    let prof = profile(nf);
    if !prof.weight.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "character requires integer weight, found {}",
            prof.weight
        )));
    }
    let mut u = BigInt::from(1);
    let mut v = BigInt::from(1);
    for &(delta, r) in &factors {
        let p = BigInt::from(delta).pow(r.unsigned_abs() as u32);
        if r >= 0 {
            u *= p;
        } else {
            v *= p;
        }
    }
    let g = u.gcd(&v);
    u /= &g;
    v /= &g;
    let k_odd = (prof.weight.numer() % BigInt::from(2)).magnitude() == &1u32.into();
    let mut arg = u * v;
    if k_odd {
        arg = -arg;
    }
    Ok(kronecker(&arg, &BigInt::from(d)))
}

/// Exact order of vanishing of an ordinary eta-quotient at the Γ₀(N) cusp
/// `c/d`: `N/(24·d·(d, N/d)) · Σ (d,δ)² r_δ / δ`.
///
/// The modular interpretation of this value presumes the Γ₀ modularity
/// conditions; the formula itself is total and is also reported for forms
/// that fail them.
pub fn order_at_cusp0(nf: &NormalForm, n: u64, cusp: &Cusp0) -> Result<Rat> {
    check_deltas_divide(nf, n)?;
    let factors = nf.ordinary_factors().ok_or_else(|| {
        Error::InvalidParameter("Γ₀ cusp orders apply to ordinary eta-quotients only".into())
    })?;
    if cusp.d == 0 || n % cusp.d != 0 || cusp.c.gcd(&n) != 1 {
        return Err(Error::InvalidCusp(format!("{cusp} is not a cusp of Γ₀({n})")));
    }
    let d = cusp.d;
    let mut sum = Rat::zero();
    for &(delta, r) in &factors {
        let g = d.gcd(&delta);
        sum += Rat::new(
            BigInt::from(g) * BigInt::from(g) * BigInt::from(r),
            BigInt::from(delta),
        );
    }
    Ok(Rat::new(
        BigInt::from(n),
        BigInt::from(24) * BigInt::from(d) * BigInt::from(d.gcd(&(n / d))),
    ) * sum)
}

/// Exact order of vanishing of a (generalized) eta-quotient at the Γ₁(N)
/// cusp `λ/(μ·ε)`, in the uniformizing variable `q^{ε/N}`:
/// `(N/2) · Σ (δ,ε)²/(δε) · P₂(λg/(δ,ε)) · r_{δ,g}`.
pub fn order_at_cusp1(nf: &NormalForm, n: u64, cusp: &Cusp1) -> Result<Rat> {
    check_deltas_divide(nf, n)?;
    let Cusp1 {
        lambda,
        mu,
        epsilon,
    } = *cusp;
    if epsilon == 0
        || n % epsilon != 0
        || lambda == 0
        || mu == 0
        || lambda.gcd(&n) != 1
        || mu.gcd(&n) != 1
        || lambda.gcd(&mu) != 1
    {
        return Err(Error::InvalidCusp(format!("{cusp} is not a cusp of Γ₁({n})")));
    }
    let mut sum = Rat::zero();
    for (delta, g, r) in nf.generalized_factors() {
        let e = delta.gcd(&epsilon);
        let p2 = bernoulli_p2(&Rat::new(
            BigInt::from(lambda) * BigInt::from(g),
            BigInt::from(e),
        ));
        sum += Rat::new(
            BigInt::from(e) * BigInt::from(e),
            BigInt::from(delta) * BigInt::from(epsilon),
        ) * p2
            * rat64(&r);
    }
    Ok(Rat::new(BigInt::from(n), BigInt::from(2)) * sum)
}

/// Per-cusp orders of vanishing with the minimum and its witness.
///
/// For Γ₀ the report covers all of `C₀(N)`; for Γ₁ it covers the
/// divisor-grouped representatives of [`gamma1_order_classes`], which attain
/// every order value of the full (possibly redundant) listing.
#[derive(Clone, Debug)]
pub struct HolomorphyReport {
    pub group: Group,
    pub level: u64,
    pub weight: Rat,
    pub orders: Vec<(Cusp, Rat)>,
    pub min_order: Rat,
    pub witness: Cusp,
    pub modularity: ModularityReport,
    pub holomorphic: bool,
}

pub fn holomorphy_report(nf: &NormalForm, n: u64, group: Group) -> Result<HolomorphyReport> {
    let modularity = modularity_check(nf, n, group)?;
    let prof = profile(nf);
    let orders: Vec<(Cusp, Rat)> = match group {
        Group::Gamma0 => cusp_set_gamma0(n)
            .into_iter()
            .map(|c| Ok((Cusp::G0(c), order_at_cusp0(nf, n, &c)?)))
            .collect::<Result<_>>()?,
        Group::Gamma1 => gamma1_order_classes(n, &nf.all_deltas())
            .into_iter()
            .map(|c| Ok((Cusp::G1(c), order_at_cusp1(nf, n, &c)?)))
            .collect::<Result<_>>()?,
    };
    let (witness, min_order) = orders
        .iter()
        .min_by(|a, b| a.1.cmp(&b.1))
        .map(|(c, o)| (*c, o.clone()))
        .expect("cusp set is never empty");
    Ok(HolomorphyReport {
        group,
        level: n,
        weight: prof.weight,
        min_order: min_order.clone(),
        witness,
        modularity,
        orders,
        holomorphic: !min_order.is_negative(),
    })
}

/// Exact rational in reports: numerator and denominator as JSON integers.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct RatRepr {
    pub num: i64,
    pub den: u64,
}

impl From<&Rat> for RatRepr {
    fn from(r: &Rat) -> RatRepr {
        RatRepr {
            num: r.numer().to_i64().expect("report numerator exceeds i64"),
            den: r.denom().to_u64().expect("report denominator exceeds u64"),
        }
    }
}

/// JSON value for a weight: a bare integer when integral, else `{num, den}`.
pub fn weight_json(weight: &Rat) -> serde_json::Value {
    if weight.is_integer() {
        serde_json::json!(weight.numer().to_i64().expect("weight exceeds i64"))
    } else {
        serde_json::to_value(RatRepr::from(weight)).unwrap()
    }
}

#[derive(Serialize)]
struct CuspOrderJson {
    repr: String,
    order_num: i64,
    order_den: u64,
}

#[derive(Serialize)]
struct HolomorphyJson {
    level: u64,
    group: Group,
    weight: serde_json::Value,
    cusps: Vec<CuspOrderJson>,
    min_order: RatRepr,
    holomorphic: bool,
    witness: String,
    modularity: serde_json::Value,
}

impl HolomorphyReport {
    /// Serialize to the report schema
    /// `{level, group, weight, cusps:[{repr, order_num, order_den}],
    ///   min_order, holomorphic, witness, modularity}`.
    pub fn to_json(&self) -> serde_json::Value {
        let shadow = HolomorphyJson {
            level: self.level,
            group: self.group,
            weight: weight_json(&self.weight),
            cusps: self
                .orders
                .iter()
                .map(|(c, o)| {
                    let r = RatRepr::from(o);
                    CuspOrderJson {
                        repr: c.to_string(),
                        order_num: r.num,
                        order_den: r.den,
                    }
                })
                .collect(),
            min_order: RatRepr::from(&self.min_order),
            holomorphic: self.holomorphic,
            witness: self.witness.to_string(),
            modularity: serde_json::to_value(&self.modularity).unwrap(),
        };
        serde_json::to_value(shadow).unwrap()
    }
}
