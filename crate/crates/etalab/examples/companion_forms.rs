//! Construct the companion quotients f and F for a non-holomorphic
//! eta-quotient, check the unit congruence f^(p^j) ≡ 1 (mod p^(j+1)) and the
//! coefficient congruence F ≡ G(24τ) (mod p^(j+1)) on truncated expansions,
//! and confirm that F is holomorphic at every cusp of its level.

use etalab::etaexpr::{normalize, parse, profile};
use etalab::lacunarity::{
    build_companion_f, build_companion_form, companion_weight, verify_congruence,
    verify_unit_lemma,
};
use etalab::modform::{holomorphy_report, Group};

fn main() -> etalab::Result<()> {
    let nf = normalize(&parse("eta(18)^3/eta(1)")?)?;
    let (p, a, j) = (3u64, 2u32, 1u32);

    let f = build_companion_f(&nf, p, a)?;
    let big_f = build_companion_form(&nf, p, a, j)?;
    let weight = companion_weight(&nf, p, a, j)?;
    println!("G = {nf}");
    println!("f = {f}");
    println!("F = G(24τ)·f^{}  =  {big_f}", p.pow(j));
    println!("k_F = {} (integral: {})", weight.weight, weight.integral);

    let modulus = p.pow(j + 1);
    println!(
        "f^(p^j) ≡ 1 (mod {modulus}) through q^300: {}",
        verify_unit_lemma(&nf, p, a, j, 300)?
    );
    println!(
        "F ≡ G(24τ) (mod {modulus}) through q^600: {}",
        verify_congruence(&nf, p, a, j, 600)?
    );

    let level = profile(&nf).level;
    let report = holomorphy_report(&normalize(&big_f)?, level, Group::Gamma0)?;
    println!(
        "F on Gamma0({level}): modularity {}, holomorphic {} (min order {} over {} cusps)",
        if report.modularity.pass { "pass" } else { "fail" },
        report.holomorphic,
        report.min_order,
        report.orders.len()
    );
    Ok(())
}
