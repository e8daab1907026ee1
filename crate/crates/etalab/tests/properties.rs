//! Cross-module property tests for the algebraic invariants that hold on
//! random inputs: ring homomorphisms, inverse round-trips, print/parse
//! round-trips, multiplicativity of expansion, and the denominator
//! independence of the gcd invariant D.

use num::rational::Rational64;
use num::BigInt;
use proptest::prelude::*;

use etalab::etaexpr::{expand, normalize, parse, profile, EtaExpr, FactorBase, NormalForm};
use etalab::modform::{cusp_set_gamma0, order_at_cusp0};
use etalab::qseries::{CoefficientRing, QSeries};

/// Naive truncated product of binomials `∏ (1 - q^e)`, by direct
/// convolution over big integers; shares nothing with the series engine.
fn naive_product(factor_exponents: &[usize], t: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::ZERO; t + 1];
    c[0] = BigInt::from(1);
    for &e in factor_exponents {
        let mut next = c.clone();
        for n in e..=t {
            next[n] -= &c[n - e];
        }
        c = next;
    }
    c
}

fn exact_series(max_len: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-20i64..=20, 1..max_len)
        .prop_map(|v| QSeries::from_coeffs(CoefficientRing::Exact, &v))
}

/// A pair of equally truncated series, the second with a unit constant term
/// (binary operations truncate to the shorter input, so round-trip laws are
/// stated at a shared truncation).
fn series_and_unit(max_len: usize) -> impl Strategy<Value = (QSeries, QSeries)> {
    (1..max_len)
        .prop_flat_map(|len| {
            (
                prop::collection::vec(-20i64..=20, len),
                prop::collection::vec(-20i64..=20, len),
                prop::bool::ANY,
            )
        })
        .prop_map(|(a, mut b, negative)| {
            b[0] = if negative { -1 } else { 1 };
            (
                QSeries::from_coeffs(CoefficientRing::Exact, &a),
                QSeries::from_coeffs(CoefficientRing::Exact, &b),
            )
        })
}

fn modulus() -> impl Strategy<Value = u64> {
    prop_oneof![
        Just(2u64),
        Just(3u64),
        Just(5u64),
        Just(27u64),
        4u64..=10_000,
        Just((1u64 << 62) + 11),
    ]
}

/// A random well-formed factor: generic classes get integer exponents,
/// zero/half classes may get half-integer ones.
fn factor() -> impl Strategy<Value = (FactorBase, Rational64)> {
    prop_oneof![
        (1u64..=12, -5i64..=5).prop_map(|(delta, e)| (
            FactorBase::Ordinary { delta },
            Rational64::from_integer(e)
        )),
        (2u64..=12, 1u64..=11, -4i64..=4).prop_map(|(delta, g, e)| {
            let g = g % delta;
            if g == 0 || 2 * g == delta {
                (
                    FactorBase::Generalized { delta, g },
                    Rational64::new(e, 2),
                )
            } else {
                (
                    FactorBase::Generalized { delta, g },
                    Rational64::from_integer(e),
                )
            }
        }),
    ]
}

fn expression(max_factors: usize) -> impl Strategy<Value = EtaExpr> {
    prop::collection::vec(factor(), 0..max_factors).prop_map(EtaExpr::new)
}

fn normal_form(max_factors: usize) -> impl Strategy<Value = NormalForm> {
    expression(max_factors).prop_map(|e| normalize(&e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduction_commutes_with_multiplication(
        a in exact_series(24),
        b in exact_series(24),
        m in modulus(),
    ) {
        let product_then_reduce = a.mul(&b).unwrap().reduce_mod(m).unwrap();
        let reduce_then_product = a
            .reduce_mod(m)
            .unwrap()
            .mul(&b.reduce_mod(m).unwrap())
            .unwrap();
        prop_assert_eq!(product_then_reduce, reduce_then_product);
    }

    #[test]
    fn division_undoes_multiplication((a, b) in series_and_unit(24)) {
        let recovered = a.mul(&b).unwrap().div_unit(&b).unwrap();
        prop_assert_eq!(recovered, a);
    }

    #[test]
    fn division_undoes_multiplication_mod_m(
        (a, b) in series_and_unit(20),
        m in modulus(),
    ) {
        let am = a.reduce_mod(m).unwrap();
        let bm = b.reduce_mod(m).unwrap();
        let recovered = am.mul(&bm).unwrap().div_unit(&bm).unwrap();
        prop_assert_eq!(recovered, am);
    }

    #[test]
    fn print_parse_round_trip(nf in normal_form(6)) {
        let printed = nf.to_string();
        let reparsed = normalize(&parse(&printed).unwrap()).unwrap();
        prop_assert_eq!(nf, reparsed, "printed as {}", printed);
    }

    #[test]
    fn d_is_independent_of_denominator_factors(
        nf in normal_form(5),
        extra_delta in 1u64..=20,
        extra_exp in 1i64..=4,
    ) {
        // Deepening the denominator must not touch D; a δ collision with an
        // existing numerator factor would cancel it instead, which is a
        // numerator mutation, not a denominator one.
        prop_assume!(nf.ordinary_num().iter().all(|&(d, _)| d != extra_delta));
        let with_extra = normalize(&nf.to_expr().mul(EtaExpr::new(vec![(
            FactorBase::Ordinary { delta: extra_delta },
            Rational64::from_integer(-extra_exp),
        )])))
        .unwrap();
        // For the generalized D the added factor folds into the excluded
        // zero-class denominator list.
        prop_assert_eq!(profile(&nf).d, profile(&with_extra).d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expansion_is_multiplicative(a in expression(4), b in expression(4)) {
        let t = 20;
        let combined = normalize(&a.clone().mul(b.clone())).unwrap();
        let (na, nb) = (normalize(&a).unwrap(), normalize(&b).unwrap());
        let lhs = expand(&combined, t, CoefficientRing::Exact).unwrap();
        let rhs = expand(&na, t, CoefficientRing::Exact)
            .unwrap()
            .mul(&expand(&nb, t, CoefficientRing::Exact).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn expansion_agrees_with_naive_binomial_products(expr in expression(4)) {
        // Independent oracle: expand(nf)·∏(denominator binomials) must equal
        // ∏(numerator binomials), where both products are naive i128
        // convolutions that never touch the QSeries division path.
        let t = 40usize;
        let nf = normalize(&expr).unwrap();
        let mut numerator_factors: Vec<usize> = Vec::new();
        let mut denominator_factors: Vec<usize> = Vec::new();
        for (delta, g, r) in nf.generalized_factors() {
            // Twice the exponent is integral in every class; square the
            // binomial lists instead to keep integer multiplicities.
            let doubled = (r * 2).to_integer();
            let side = if doubled > 0 {
                &mut numerator_factors
            } else {
                &mut denominator_factors
            };
            let (delta, g) = (delta as usize, g as usize);
            let residues = if g == 0 || 2 * g == delta {
                vec![if g == 0 { delta } else { g }; 2]
            } else {
                vec![g, delta - g]
            };
            for _ in 0..doubled.unsigned_abs() {
                for &start in &residues {
                    let mut e = start;
                    while e <= t {
                        side.push(e);
                        e += delta;
                    }
                }
            }
        }
        let lhs = {
            // expand(nf)² times the naive denominator product.
            let expansion = expand(&nf, t, CoefficientRing::Exact).unwrap();
            let squared = expansion.mul(&expansion).unwrap();
            let den = QSeries::from_bigint_coeffs(naive_product(&denominator_factors, t));
            squared.mul(&den).unwrap()
        };
        let rhs = QSeries::from_bigint_coeffs(naive_product(&numerator_factors, t));
        for n in 0..=t {
            prop_assert_eq!(lhs.coeff(n), rhs.coeff(n), "q^{} of {}", n, nf);
        }
    }

    #[test]
    fn gamma0_order_depends_only_on_cusp_denominator(
        exponents in prop::collection::vec(-4i64..=4, 4),
    ) {
        // Factors over the divisors {1, 2, 3, 6} of N = 12.
        let n = 12u64;
        let deltas = [1u64, 2, 3, 6];
        let factors: Vec<(FactorBase, Rational64)> = deltas
            .iter()
            .zip(&exponents)
            .map(|(&delta, &e)| {
                (
                    FactorBase::Ordinary { delta },
                    Rational64::from_integer(2 * e),
                )
            })
            .collect();
        let nf = normalize(&EtaExpr::new(factors)).unwrap();
        for d in [1u64, 2, 3, 4, 6, 12] {
            let orders: Vec<_> = cusp_set_gamma0(n)
                .iter()
                .filter(|c| c.d == d)
                .map(|c| order_at_cusp0(&nf, n, c).unwrap())
                .collect();
            prop_assert!(orders.windows(2).all(|w| w[0] == w[1]));
        }
    }
}
