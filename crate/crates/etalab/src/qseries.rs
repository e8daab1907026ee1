//! Truncated q-series arithmetic over exact integers or residues modulo `M`.
//!
//! A [`QSeries`] is a coefficient vector `c[0..=T]` together with an exact
//! rational exponent prefix, so a value represents `q^prefix * Σ c[n] q^n`.
//! All binary operations truncate to the minimum `T` of their inputs and add
//! or subtract prefixes as appropriate.
//!
//! Eta factors are never expanded by dense convolution: multiplication and
//! division by `∏(1 - q^{δn})` walk the sparse pentagonal support, which has
//! `O(√(T/δ))` terms, and cubes use the triangular-number support with
//! coefficients `±(2k+1)`. Generalized factors `∏_{n≡±g(δ)}(1 - q^n)` are
//! applied one binomial at a time.

use num::bigint::BigInt;
use num::traits::{One, ToPrimitive, Zero};
use num::Integer;

use crate::{Error, Rat, Result};

/// Largest permitted modulus; keeps `a + b` for reduced residues inside u64.
pub const MAX_MODULUS: u64 = 1 << 63;

/// Coefficient ring of a [`QSeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientRing {
    /// Arbitrary-precision integers; used for identity verification.
    Exact,
    /// Residues modulo `M` stored in `[0, M)`; used for density scans.
    /// Requires `2 <= M < 2^63`.
    Mod(u64),
}

impl CoefficientRing {
    pub fn validate(self) -> Result<Self> {
        match self {
            CoefficientRing::Exact => Ok(self),
            CoefficientRing::Mod(m) if (2..MAX_MODULUS).contains(&m) => Ok(self),
            CoefficientRing::Mod(m) => Err(Error::InvalidParameter(format!(
                "modulus {m} outside [2, 2^63)"
            ))),
        }
    }
}

#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn reduce_i64(c: i64, m: u64) -> u64 {
    let r = (c as i128).rem_euclid(m as i128);
    r as u64
}

fn reduce_bigint(c: &BigInt, m: u64) -> u64 {
    c.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// One multiplication (descending scan) or forward-substitution division
/// (ascending scan) pass of a sparse factor over a residue vector. Signed
/// term products are accumulated in 128 bits and reduced once per
/// coefficient; only moduli ≥ 2^32 with non-unit term coefficients fall
/// back to per-term modular products.
fn mod_sparse_pass(v: &mut [u64], f: &SparseFactor, m: u64, divide: bool) {
    let sign: i64 = if divide { -1 } else { 1 };
    let tail: Vec<(usize, i64)> = f.terms()[1..]
        .iter()
        .map(|&(e, c)| (e, c * sign))
        .collect();
    if tail.is_empty() {
        return;
    }

    #[inline]
    fn accumulate(
        v: &mut [u64],
        idx: impl Iterator<Item = usize>,
        terms: &[(usize, i64)],
        m: u64,
    ) {
        for n in idx {
            let mut acc = v[n] as i128;
            for &(e, c) in terms {
                if e > n {
                    break;
                }
                acc += c as i128 * v[n - e] as i128;
            }
            v[n] = acc.rem_euclid(m as i128) as u64;
        }
    }

    if m < (1 << 32) || f.all_unit() {
        // Reduce coefficients into the symmetric range so every term
        // product stays below 2^63 and the 128-bit accumulator cannot
        // overflow for any support that fits in memory.
        let symmetric: Vec<(usize, i64)> = tail
            .iter()
            .map(|&(e, c)| {
                let mut cr = c.rem_euclid(m as i64);
                if cr as u64 > m / 2 {
                    cr -= m as i64;
                }
                (e, cr)
            })
            .collect();
        if divide {
            accumulate(v, 0..v.len(), &symmetric, m);
        } else {
            accumulate(v, (0..v.len()).rev(), &symmetric, m);
        }
    } else {
        let reduced: Vec<(usize, u64)> = tail
            .iter()
            .map(|&(e, c)| (e, c.rem_euclid(m as i64) as u64))
            .collect();
        if divide {
            for n in 0..v.len() {
                let mut acc = v[n];
                for &(e, c) in &reduced {
                    if e > n {
                        break;
                    }
                    acc = addmod(acc, mulmod(c, v[n - e], m), m);
                }
                v[n] = acc;
            }
        } else {
            for n in (0..v.len()).rev() {
                let mut acc = v[n];
                for &(e, c) in &reduced {
                    if e > n {
                        break;
                    }
                    acc = addmod(acc, mulmod(c, v[n - e], m), m);
                }
                v[n] = acc;
            }
        }
    }
}

/// Modular inverse for any modulus, via the extended Euclidean algorithm.
fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Mod(Vec<u64>),
}

/// A sparse factor `Σ terms` with strictly increasing exponents and a unit
/// constant term, used for fast multiplication and forward substitution.
#[derive(Clone, Debug)]
pub struct SparseFactor {
    terms: Vec<(usize, i64)>,
}

impl SparseFactor {
    fn new(terms: Vec<(usize, i64)>) -> Self {
        debug_assert!(!terms.is_empty() && terms[0].0 == 0 && terms[0].1.abs() == 1);
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        SparseFactor { terms }
    }

    pub fn terms(&self) -> &[(usize, i64)] {
        &self.terms
    }

    fn all_unit(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c.abs() == 1)
    }
}

/// Support of `∏_{n>=1}(1 - q^{δn})` truncated at `t`: coefficient `(-1)^k`
/// at exponent `δ·k(3k-1)/2` for `k ∈ ℤ` (pentagonal number theorem).
pub fn pentagonal_support(delta: usize, t: usize) -> SparseFactor {
    let mut terms = vec![(0usize, 1i64)];
    let mut k = 1usize;
    loop {
        let g1 = delta * (k * (3 * k - 1) / 2);
        let g2 = delta * (k * (3 * k + 1) / 2);
        let sign = if k % 2 == 1 { -1 } else { 1 };
        if g1 > t {
            break;
        }
        terms.push((g1, sign));
        if g2 <= t {
            terms.push((g2, sign));
        }
        k += 1;
    }
    SparseFactor::new(terms)
}

/// Support of `∏_{n>=1}(1 - q^{δn})^3` truncated at `t`: coefficient
/// `(-1)^k (2k+1)` at exponent `δ·k(k+1)/2` (Jacobi's identity).
pub fn eta_cube_support(delta: usize, t: usize) -> SparseFactor {
    let mut terms = Vec::new();
    let mut k = 0usize;
    loop {
        let e = delta * (k * (k + 1) / 2);
        if e > t {
            break;
        }
        let c = (2 * k + 1) as i64;
        terms.push((e, if k % 2 == 1 { -c } else { c }));
        k += 1;
    }
    SparseFactor::new(terms)
}

/// Truncated formal q-series `q^prefix · Σ_{n=0}^{T} c[n] q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    ring: CoefficientRing,
    prefix: Rat,
    coeffs: Coeffs,
}

impl QSeries {
    /// The constant series 1 with truncation order `t`.
    pub fn one(ring: CoefficientRing, t: usize) -> QSeries {
        ring.validate().expect("invalid coefficient ring");
        let coeffs = match ring {
            CoefficientRing::Exact => {
                let mut v = vec![BigInt::zero(); t + 1];
                v[0] = BigInt::one();
                Coeffs::Exact(v)
            }
            CoefficientRing::Mod(_) => {
                let mut v = vec![0u64; t + 1];
                v[0] = 1;
                Coeffs::Mod(v)
            }
        };
        QSeries {
            ring,
            prefix: Rat::zero(),
            coeffs,
        }
    }

    /// An exact-integer series from its coefficient vector.
    pub fn from_bigint_coeffs(coeffs: Vec<BigInt>) -> QSeries {
        assert!(!coeffs.is_empty());
        QSeries {
            ring: CoefficientRing::Exact,
            prefix: Rat::zero(),
            coeffs: Coeffs::Exact(coeffs),
        }
    }

    /// Build an exact-integer series from small coefficients (test helper and
    /// construction entry point for hand-written series).
    pub fn from_coeffs(ring: CoefficientRing, coeffs: &[i64]) -> QSeries {
        ring.validate().expect("invalid coefficient ring");
        assert!(!coeffs.is_empty());
        let c = match ring {
            CoefficientRing::Exact => {
                Coeffs::Exact(coeffs.iter().map(|&c| BigInt::from(c)).collect())
            }
            CoefficientRing::Mod(m) => {
                Coeffs::Mod(coeffs.iter().map(|&c| reduce_i64(c, m)).collect())
            }
        };
        QSeries {
            ring,
            prefix: Rat::zero(),
            coeffs: c,
        }
    }

    pub fn with_prefix(mut self, prefix: Rat) -> QSeries {
        self.prefix = prefix;
        self
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    /// Inclusive truncation order `T`.
    pub fn truncation(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.len() - 1,
            Coeffs::Mod(v) => v.len() - 1,
        }
    }

    pub fn prefix(&self) -> &Rat {
        &self.prefix
    }

    /// Coefficient of `q^n` of the integral part, as a `BigInt` in canonical
    /// form (residues are reported in `[0, M)`).
    pub fn coeff(&self, n: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Exact(v) => v[n].clone(),
            Coeffs::Mod(v) => BigInt::from(v[n]),
        }
    }

    /// All coefficients as `BigInt`s, `n = 0..=T`.
    pub fn coeffs_bigint(&self) -> Vec<BigInt> {
        (0..=self.truncation()).map(|n| self.coeff(n)).collect()
    }

    /// Residue coefficients, available only on `Mod` series.
    pub fn coeffs_mod(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Mod(v) => Some(v),
            Coeffs::Exact(_) => None,
        }
    }

    /// True when the integral part is the constant 1 and the prefix is 0.
    pub fn is_one(&self) -> bool {
        if !self.prefix.is_zero() {
            return false;
        }
        match &self.coeffs {
            Coeffs::Exact(v) => v[0].is_one() && v[1..].iter().all(|c| c.is_zero()),
            Coeffs::Mod(v) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
        }
    }

    fn check_same_ring(&self, other: &QSeries, op: &str) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{op} over {:?} and {:?}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    /// Cauchy product, truncated to `min(T_a, T_b)`; prefixes add.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same_ring(other, "mul")?;
        let t = self.truncation().min(other.truncation());
        let prefix = &self.prefix + &other.prefix;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                let mut out = vec![BigInt::zero(); t + 1];
                for (i, ai) in a.iter().enumerate().take(t + 1) {
                    if ai.is_zero() {
                        continue;
                    }
                    for (j, bj) in b.iter().enumerate().take(t + 1 - i) {
                        if !bj.is_zero() {
                            out[i + j] += ai * bj;
                        }
                    }
                }
                Coeffs::Exact(out)
            }
            (Coeffs::Mod(a), Coeffs::Mod(b)) => {
                let m = match self.ring {
                    CoefficientRing::Mod(m) => m,
                    CoefficientRing::Exact => unreachable!(),
                };
                let mut out = vec![0u64; t + 1];
                for (i, &ai) in a.iter().enumerate().take(t + 1) {
                    if ai == 0 {
                        continue;
                    }
                    for (j, &bj) in b.iter().enumerate().take(t + 1 - i) {
                        if bj != 0 {
                            out[i + j] = addmod(out[i + j], mulmod(ai, bj, m), m);
                        }
                    }
                }
                Coeffs::Mod(out)
            }
            _ => unreachable!("ring checked above"),
        };
        Ok(QSeries {
            ring: self.ring,
            prefix,
            coeffs,
        })
    }

    /// Quotient `q` with `q * other = self` through the shared truncation,
    /// by forward substitution; prefixes subtract. The divisor's constant
    /// term must be `±1` (exact ring) or invertible mod `M`.
    pub fn div_unit(&self, other: &QSeries) -> Result<QSeries> {
        self.check_same_ring(other, "div_unit")?;
        let t = self.truncation().min(other.truncation());
        let prefix = &self.prefix - &other.prefix;
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                let unit = if b[0].is_one() {
                    1
                } else if (-&b[0]).is_one() {
                    -1
                } else {
                    return Err(Error::NonUnitConstant(format!(
                        "exact division requires constant term ±1, found {}",
                        b[0]
                    )));
                };
                let mut out = vec![BigInt::zero(); t + 1];
                for n in 0..=t {
                    let mut acc = a[n].clone();
                    for k in 1..=n {
                        if !b[k].is_zero() && !out[n - k].is_zero() {
                            acc -= &b[k] * &out[n - k];
                        }
                    }
                    out[n] = if unit == 1 { acc } else { -acc };
                }
                Coeffs::Exact(out)
            }
            (Coeffs::Mod(a), Coeffs::Mod(b)) => {
                let m = match self.ring {
                    CoefficientRing::Mod(m) => m,
                    CoefficientRing::Exact => unreachable!(),
                };
                let inv = invmod(b[0], m).ok_or_else(|| {
                    Error::NonUnitConstant(format!("{} is not invertible mod {m}", b[0]))
                })?;
                let mut out = vec![0u64; t + 1];
                for n in 0..=t {
                    let mut acc = a[n];
                    for k in 1..=n {
                        if b[k] != 0 && out[n - k] != 0 {
                            acc = submod(acc, mulmod(b[k], out[n - k], m), m);
                        }
                    }
                    out[n] = mulmod(acc, inv, m);
                }
                Coeffs::Mod(out)
            }
            _ => unreachable!("ring checked above"),
        };
        Ok(QSeries {
            ring: self.ring,
            prefix,
            coeffs,
        })
    }

    /// Integer power by repeated squaring; `e < 0` inverts first and needs a
    /// unit constant term. The prefix scales by `e`.
    pub fn pow_int(&self, e: i64) -> Result<QSeries> {
        let t = self.truncation();
        if e == 0 {
            return Ok(QSeries::one(self.ring, t));
        }
        let base = if e < 0 {
            QSeries::one(self.ring, t).div_unit(self)?
        } else {
            self.clone()
        };
        let mut exp = e.unsigned_abs();
        let mut result = QSeries::one(self.ring, t);
        let mut power = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&power)?;
            }
            exp >>= 1;
            if exp > 0 {
                power = power.mul(&power)?;
            }
        }
        Ok(result)
    }

    /// Substitute `q -> q^m`: the coefficient at `n` moves to `m·n`, the
    /// truncation becomes `m·T` (or `cap` if smaller), and the prefix
    /// multiplies by `m`.
    pub fn dilate(&self, m: usize, cap: Option<usize>) -> QSeries {
        assert!(m >= 1);
        let t = self.truncation();
        let new_t = cap.unwrap_or(m * t).min(m * t);
        let prefix = &self.prefix * BigInt::from(m);
        let coeffs = match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); new_t + 1];
                for (n, c) in v.iter().enumerate() {
                    if m * n <= new_t {
                        out[m * n] = c.clone();
                    }
                }
                Coeffs::Exact(out)
            }
            Coeffs::Mod(v) => {
                let mut out = vec![0u64; new_t + 1];
                for (n, &c) in v.iter().enumerate() {
                    if m * n <= new_t {
                        out[m * n] = c;
                    }
                }
                Coeffs::Mod(out)
            }
        };
        QSeries {
            ring: self.ring,
            prefix,
            coeffs,
        }
    }

    /// Coefficientwise reduction of an exact-integer series into `[0, M)`;
    /// the prefix is unchanged.
    pub fn reduce_mod(&self, m: u64) -> Result<QSeries> {
        CoefficientRing::Mod(m).validate()?;
        let v = match &self.coeffs {
            Coeffs::Exact(v) => v,
            Coeffs::Mod(_) => {
                return Err(Error::InvalidParameter(
                    "reduce_mod expects an exact-integer series".into(),
                ))
            }
        };
        Ok(QSeries {
            ring: CoefficientRing::Mod(m),
            prefix: self.prefix.clone(),
            coeffs: Coeffs::Mod(v.iter().map(|c| reduce_bigint(c, m)).collect()),
        })
    }

    /// In-place multiplication by a sparse factor (descending scan).
    pub fn mul_sparse(&mut self, f: &SparseFactor) {
        debug_assert_eq!(f.terms[0], (0, 1));
        match &mut self.coeffs {
            Coeffs::Mod(v) => {
                let m = match self.ring {
                    CoefficientRing::Mod(m) => m,
                    CoefficientRing::Exact => unreachable!(),
                };
                mod_sparse_pass(v, f, m, false);
            }
            Coeffs::Exact(v) => {
                for n in (0..v.len()).rev() {
                    let mut acc = v[n].clone();
                    for &(e, c) in &f.terms[1..] {
                        if e > n {
                            break;
                        }
                        if !v[n - e].is_zero() {
                            acc += &v[n - e] * c;
                        }
                    }
                    v[n] = acc;
                }
            }
        }
    }

    /// In-place division by a sparse factor with constant term `+1`
    /// (ascending forward substitution).
    pub fn div_sparse(&mut self, f: &SparseFactor) {
        debug_assert_eq!(f.terms[0], (0, 1));
        match &mut self.coeffs {
            Coeffs::Mod(v) => {
                let m = match self.ring {
                    CoefficientRing::Mod(m) => m,
                    CoefficientRing::Exact => unreachable!(),
                };
                mod_sparse_pass(v, f, m, true);
            }
            Coeffs::Exact(v) => {
                for n in 0..v.len() {
                    let mut acc = v[n].clone();
                    for &(e, c) in &f.terms[1..] {
                        if e > n {
                            break;
                        }
                        if !v[n - e].is_zero() {
                            acc -= &v[n - e] * c;
                        }
                    }
                    v[n] = acc;
                }
            }
        }
    }

    /// In-place multiplication by the binomial `1 + sign·q^e`, `sign = ±1`.
    pub fn mul_binomial(&mut self, e: usize, sign: i64) {
        debug_assert!(sign.abs() == 1 && e >= 1);
        match &mut self.coeffs {
            Coeffs::Mod(v) => {
                let m = match self.ring {
                    CoefficientRing::Mod(m) => m,
                    CoefficientRing::Exact => unreachable!(),
                };
                if sign == 1 {
                    for n in (e..v.len()).rev() {
                        v[n] = addmod(v[n], v[n - e], m);
                    }
                } else {
                    for n in (e..v.len()).rev() {
                        v[n] = submod(v[n], v[n - e], m);
                    }
                }
            }
            Coeffs::Exact(v) => {
                for n in (e..v.len()).rev() {
                    let prev = v[n - e].clone();
                    if sign == 1 {
                        v[n] += prev;
                    } else {
                        v[n] -= prev;
                    }
                }
            }
        }
    }

    /// In-place division by the binomial `1 + sign·q^e`, `sign = ±1`.
    pub fn div_binomial(&mut self, e: usize, sign: i64) {
        debug_assert!(sign.abs() == 1 && e >= 1);
        match &mut self.coeffs {
            Coeffs::Mod(v) => {
                let m = match self.ring {
                    CoefficientRing::Mod(m) => m,
                    CoefficientRing::Exact => unreachable!(),
                };
                if sign == 1 {
                    for n in e..v.len() {
                        v[n] = submod(v[n], v[n - e], m);
                    }
                } else {
                    for n in e..v.len() {
                        v[n] = addmod(v[n], v[n - e], m);
                    }
                }
            }
            Coeffs::Exact(v) => {
                for n in e..v.len() {
                    let prev = v[n - e].clone();
                    if sign == 1 {
                        v[n] -= prev;
                    } else {
                        v[n] += prev;
                    }
                }
            }
        }
    }

    pub fn add_to_prefix(&mut self, r: &Rat) {
        self.prefix += r;
    }
}

/// Integral part of `η(δτ)`: `∏(1 - q^{δn})` by the pentagonal number
/// theorem, with prefix `δ/24`.
pub fn eta_series(delta: usize, t: usize, ring: CoefficientRing) -> QSeries {
    assert!(delta >= 1);
    let support = pentagonal_support(delta, t);
    let mut s = QSeries::one(ring, t);
    match &mut s.coeffs {
        Coeffs::Exact(v) => {
            for &(e, c) in support.terms() {
                v[e] = BigInt::from(c);
            }
        }
        Coeffs::Mod(v) => {
            let m = match ring {
                CoefficientRing::Mod(m) => m,
                CoefficientRing::Exact => unreachable!(),
            };
            for &(e, c) in support.terms() {
                v[e] = reduce_i64(c, m);
            }
        }
    }
    s.prefix = Rat::new(BigInt::from(delta), BigInt::from(24));
    s
}

/// Integral part of the generalized eta-function `η_{δ,g}(τ)`:
/// `∏_{n≡g(δ)}(1-q^n) · ∏_{n≡-g(δ)}(1-q^n)` with prefix `P₂(g/δ)·δ/2`.
///
/// `g` is reduced mod `δ` and must not be ≡ 0 (use `η(δτ)² = η_{δ,0}` via
/// [`eta_series`] instead). When `2g = δ` the single residue class appears
/// squared, per the two-product definition.
pub fn geta_series(delta: usize, g: usize, t: usize, ring: CoefficientRing) -> Result<QSeries> {
    assert!(delta >= 1);
    let g = g % delta;
    if g == 0 {
        return Err(Error::InvalidParameter(format!(
            "geta_series requires g ≢ 0 (mod {delta}); η_{{δ,0}} = η(δτ)²"
        )));
    }
    let g = g.min(delta - g);
    let mut s = QSeries::one(ring, t);
    let double = 2 * g == delta;
    let mut e = g;
    while e <= t {
        s.mul_binomial(e, -1);
        if double {
            s.mul_binomial(e, -1);
        }
        e += delta;
    }
    if !double {
        let mut e = delta - g;
        while e <= t {
            s.mul_binomial(e, -1);
            e += delta;
        }
    }
    s.prefix = crate::modform::bernoulli_p2(&Rat::new(BigInt::from(g), BigInt::from(delta)))
        * Rat::new(BigInt::from(delta), BigInt::from(2));
    Ok(s)
}
