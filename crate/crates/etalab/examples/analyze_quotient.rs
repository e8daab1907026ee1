//! Derive the invariants of an eta-quotient and analyze it as a modular
//! form: weight, gcd invariant D, level data, modularity conditions, and
//! exact orders of vanishing at all cusps.

use etalab::etaexpr::{normalize, parse, profile};
use etalab::modform::{holomorphy_report, kronecker_chi, Group};

fn main() -> etalab::Result<()> {
    for (text, level, group) in [
        ("eta(18)^3/eta(1)", 18, Group::Gamma0),
        ("geta(9,0)/geta(6,1)", 18, Group::Gamma1),
        ("eta(1)^24", 1, Group::Gamma0),
    ] {
        let nf = normalize(&parse(text)?)?;
        let prof = profile(&nf);
        println!("=== {nf} ===");
        println!("weight k = {}, D = {}, L = {}", prof.weight, prof.d, prof.l);
        println!(
            "prefix q^({}), companion level 576L^2 = {}",
            prof.prefix, prof.level
        );

        let report = holomorphy_report(&nf, level, group)?;
        println!(
            "modularity conditions on {group} at level {level}: {}",
            if report.modularity.pass { "pass" } else { "fail" }
        );
        println!(
            "holomorphic: {} (min order {} at cusp {})",
            report.holomorphic, report.min_order, report.witness
        );
        if nf.is_ordinary() && prof.weight.is_integer() {
            let chi: Vec<i32> = (1..=7)
                .map(|d| kronecker_chi(&nf, d))
                .collect::<etalab::Result<_>>()?;
            println!("character chi(1..7) = {chi:?}");
        }
        println!();
    }
    Ok(())
}
