//! Brute-force partition and hook-length oracle, and verification of the
//! Nekrasov-Okounkov and Han hook-length product identities.
//!
//! The oracle side is deliberately naive: partitions are enumerated
//! explicitly and hook products are accumulated as exact rationals, so the
//! series it produces are independent of the eta-quotient expansion path
//! they are checked against.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::etaexpr::{build_named, expand, normalize, NamedFamily};
use crate::qseries::{CoefficientRing, QSeries};
use crate::{Error, Result};

/// Default partition enumeration cap (p(60) ≈ 9.7·10⁵ partitions).
pub const DEFAULT_PARTITION_CAP: usize = 60;

/// An integer partition: nonincreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Partition {
        assert!(parts.iter().all(|&p| p >= 1));
        assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Conjugate (transpose of the Ferrers diagram).
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition { parts: Vec::new() };
        }
        let max = self.parts[0] as usize;
        let mut parts = vec![0u32; max];
        for &p in &self.parts {
            for entry in parts.iter_mut().take(p as usize) {
                *entry += 1;
            }
        }
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Visit the parts of every partition of `n` in descending lexicographic
/// order, without materializing the list.
pub fn for_each_partition<F: FnMut(&[u32])>(n: usize, mut visit: F) {
    let mut parts: Vec<u32> = Vec::new();
    descend(n as u32, n as u32, &mut parts, &mut visit);
}

fn descend<F: FnMut(&[u32])>(remaining: u32, max_part: u32, parts: &mut Vec<u32>, visit: &mut F) {
    if remaining == 0 {
        visit(parts);
        return;
    }
    let mut part = remaining.min(max_part);
    while part >= 1 {
        parts.push(part);
        descend(remaining - part, part, parts, visit);
        parts.pop();
        part -= 1;
    }
}

/// All partitions of `n` in descending lexicographic order; errors above the
/// enumeration cap.
pub fn partitions_of(n: usize, cap: usize) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::BudgetExceeded(format!(
            "partitions_of({n}) exceeds the enumeration cap {cap}"
        )));
    }
    let mut out = Vec::new();
    for_each_partition(n, |parts| out.push(Partition::new(parts.to_vec())));
    Ok(out)
}

/// Unsorted hook lengths of a parts slice.
fn hooks_of(parts: &[u32]) -> Vec<u64> {
    let size: usize = parts.iter().map(|&p| p as usize).sum();
    let max = parts.first().copied().unwrap_or(0) as usize;
    let mut conjugate = vec![0u64; max];
    for &p in parts {
        for entry in conjugate.iter_mut().take(p as usize) {
            *entry += 1;
        }
    }
    let mut hooks = Vec::with_capacity(size);
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as u64 - (j as u64 + 1);
            let leg = conjugate[j] - (i as u64 + 1);
            hooks.push(arm + leg + 1);
        }
    }
    hooks
}

/// Hook lengths (arm + leg + 1 over all Ferrers boxes), sorted descending.
/// The multiset has exactly `|λ|` entries.
pub fn hook_multiset(partition: &Partition) -> Vec<u64> {
    let mut hooks = hooks_of(partition.parts());
    hooks.sort_unstable_by(|a, b| b.cmp(a));
    hooks
}

/// The sub-multiset of hooks divisible by `t`.
pub fn hook_t(partition: &Partition, t: u64) -> Vec<u64> {
    assert!(t >= 1);
    hook_multiset(partition)
        .into_iter()
        .filter(|h| h % t == 0)
        .collect()
}

/// The hook-length series `Σ_λ q^{|λ|} ∏_{h∈H_t(λ)} (y - tyz/h²)` for
/// `y = ±1` and integer `z`, through `q^T`. Every hook factor is the exact
/// rational `y(h² - tz)/h²`; the per-n sums are verified integral before the
/// result is returned as an exact-integer series.
pub fn han_lhs(t: u64, y: i8, z: i64, truncation: usize, cap: usize) -> Result<QSeries> {
    assert!(t >= 1 && (y == 1 || y == -1));
    if truncation > cap {
        return Err(Error::BudgetExceeded(format!(
            "hook-length series truncation {truncation} exceeds the partition cap {cap}"
        )));
    }
    let tz = BigInt::from(t as i64 * z);
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let mut sum = BigRational::zero();
        for_each_partition(n, |parts| {
            let mut numerator = BigInt::one();
            let mut denominator = BigInt::one();
            for h in hooks_of(parts) {
                if h % t != 0 {
                    continue;
                }
                let h_sq = BigInt::from(h * h);
                let mut factor = &h_sq - &tz;
                if y == -1 {
                    factor = -factor;
                }
                numerator *= factor;
                denominator *= h_sq;
            }
            sum += BigRational::new(numerator, denominator);
        });
        assert!(
            sum.is_integer(),
            "hook sum at n = {n} is not integral: {sum}"
        );
        coeffs.push(sum.to_integer());
    }
    Ok(QSeries::from_bigint_coeffs(coeffs))
}

/// Outcome of a hook-length identity verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub ok: bool,
    /// First differing exponent and the route that disagreed with the hook
    /// sum, when the check fails.
    pub mismatch: Option<(usize, &'static str)>,
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(f, "OK"),
            Some((n, route)) => write!(f, "mismatch at q^{n} against {route}"),
        }
    }
}

/// Verify the hook-length identity for `(t, y, z)` through `q^T`: the hook
/// sum must equal (i) the directly multiplied product
/// `∏ (1-q^{tn})^t / ((1-(yq^t)^n)^{t-z} (1-q^n))` and (ii) the expansion of
/// the corresponding eta-quotient family.
pub fn verify_identity(
    t: u64,
    y: i8,
    z: i64,
    truncation: usize,
    cap: usize,
) -> Result<IdentityCheck> {
    let lhs = han_lhs(t, y, z, truncation, cap)?;

    let mut product = QSeries::one(CoefficientRing::Exact, truncation);
    for n in 1..=truncation {
        let tn = t as usize * n;
        if tn <= truncation {
            for _ in 0..t {
                product.mul_binomial(tn, -1);
            }
            // (1 - (yq^t)^n) = (1 - q^{tn}) for y = 1 or even n, else (1 + q^{tn}).
            let sign = if y == -1 && n % 2 == 1 { 1 } else { -1 };
            let exponent = t as i64 - z;
            for _ in 0..exponent.unsigned_abs() {
                if exponent > 0 {
                    product.div_binomial(tn, sign);
                } else {
                    product.mul_binomial(tn, sign);
                }
            }
        }
        product.div_binomial(n, -1);
    }
    for n in 0..=truncation {
        if lhs.coeff(n) != product.coeff(n) {
            return Ok(IdentityCheck {
                ok: false,
                mismatch: Some((n, "direct product")),
            });
        }
    }

    let family = if y == 1 {
        NamedFamily::HanY1 { t, z }
    } else {
        NamedFamily::HanYm1 { t, z }
    };
    let quotient = expand(
        &normalize(&build_named(family)?)?,
        truncation,
        CoefficientRing::Exact,
    )?;
    for n in 0..=truncation {
        if lhs.coeff(n) != quotient.coeff(n) {
            return Ok(IdentityCheck {
                ok: false,
                mismatch: Some((n, "eta-quotient expansion")),
            });
        }
    }
    Ok(IdentityCheck {
        ok: true,
        mismatch: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::eta_series;

    #[test]
    fn partitions_of_four_in_order() {
        let parts = partitions_of(4, DEFAULT_PARTITION_CAP).unwrap();
        let expected: Vec<Vec<u32>> = vec![
            vec![4],
            vec![3, 1],
            vec![2, 2],
            vec![2, 1, 1],
            vec![1, 1, 1, 1],
        ];
        assert_eq!(
            parts.iter().map(|p| p.parts().to_vec()).collect::<Vec<_>>(),
            expected
        );
    }

    #[test]
    fn partitions_of_zero_is_the_empty_partition() {
        let parts = partitions_of(0, 10).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].parts().is_empty());
    }

    #[test]
    fn partition_counts_match_generating_function() {
        // The enumeration is the independent oracle for the coefficients of
        // 1/∏(1-q^n), through the full default cap.
        let t = DEFAULT_PARTITION_CAP;
        let series = QSeries::one(CoefficientRing::Exact, t)
            .div_unit(&eta_series(1, t, CoefficientRing::Exact))
            .unwrap();
        for n in 0..=t {
            let mut count = 0u64;
            for_each_partition(n, |_| count += 1);
            assert_eq!(BigInt::from(count), series.coeff(n), "p({n})");
        }
        assert_eq!(series.coeff(60), BigInt::from(966_467u64));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            partitions_of(11, 10),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(han_lhs(2, 1, 0, 11, 10).is_err());
    }

    #[test]
    fn hooks_of_4_2_1() {
        let p = Partition::new(vec![4, 2, 1]);
        assert_eq!(hook_multiset(&p), vec![6, 4, 3, 2, 1, 1, 1]);
        assert_eq!(hook_t(&p, 2), vec![6, 4, 2]);
        assert_eq!(hook_t(&p, 1), hook_multiset(&p));
        assert!(hook_t(&p, 100).is_empty());
    }

    #[test]
    fn hooks_of_single_row() {
        let p = Partition::new(vec![5]);
        assert_eq!(hook_multiset(&p), vec![5, 4, 3, 2, 1]);
    }

    #[test]
    fn hooks_are_conjugation_invariant_with_full_cardinality() {
        for n in 0..=30usize {
            for_each_partition(n, |parts| {
                let p = Partition::new(parts.to_vec());
                let hooks = hook_multiset(&p);
                assert_eq!(hooks.len() as u64, p.size());
                assert_eq!(hooks, hook_multiset(&p.conjugate()));
            });
        }
    }

    #[test]
    fn han_lhs_collapses_to_partition_series_at_z_zero() {
        let s = han_lhs(2, 1, 0, 18, 60).unwrap();
        let p = QSeries::one(CoefficientRing::Exact, 18)
            .div_unit(&eta_series(1, 18, CoefficientRing::Exact))
            .unwrap();
        assert_eq!(s.coeffs_bigint(), p.coeffs_bigint());
    }

    #[test]
    fn han_lhs_at_z_two_is_pentagonal_series() {
        // The t = 1, y = 1, z = 2 case is ∏(1-q^n)^{z-1} = ∏(1-q^n).
        let s = han_lhs(1, 1, 2, 12, 60).unwrap();
        let eta = eta_series(1, 12, CoefficientRing::Exact);
        assert_eq!(s.coeffs_bigint(), eta.coeffs_bigint());
    }

    #[test]
    fn han_lhs_at_z_one_is_t_regular() {
        let s = han_lhs(3, 1, 1, 12, 60).unwrap();
        let expr = normalize(&build_named(NamedFamily::TRegular { t: 3 }).unwrap()).unwrap();
        let expansion = expand(&expr, 12, CoefficientRing::Exact).unwrap();
        assert_eq!(s.coeffs_bigint(), expansion.coeffs_bigint());
    }

    #[test]
    fn verify_identity_examples() {
        assert!(verify_identity(2, 1, 0, 18, 60).unwrap().ok);
        assert!(verify_identity(3, -1, 1, 15, 60).unwrap().ok);
        assert!(verify_identity(18, 1, 3, 15, 60).unwrap().ok);
    }

    #[test]
    fn identity_check_display() {
        let check = verify_identity(2, 1, 1, 12, 60).unwrap();
        assert!(check.ok);
        assert_eq!(check.to_string(), "OK");
    }
}
