//! Decide the prime-power lacunarity criteria for the two worked quotients
//! and print the exact squared bounds, plus the closed-form bounds for the
//! hook-length families.

use etalab::etaexpr::{normalize, parse};
use etalab::lacunarity::{criterion_check, han_family_bounds, max_dividing_power};

fn main() -> etalab::Result<()> {
    for text in ["eta(18)^3/eta(1)", "geta(9,0)/geta(6,1)"] {
        let nf = normalize(&parse(text)?)?;
        println!("=== {nf} ===");
        for p in [2u64, 3, 5] {
            let d = etalab::etaexpr::profile(&nf).d;
            let a = max_dividing_power(d, p).max(1);
            let v = criterion_check(&nf, p, a)?;
            println!(
                "p={p} a={a}: satisfied={} bound^2={}{}",
                v.satisfied,
                v.bound_sq,
                v.positivity
                    .as_ref()
                    .map(|pos| format!(" positivity={pos}"))
                    .unwrap_or_default()
            );
            println!("         {}", v.reason);
        }
        println!();
    }

    println!("hook-length family bounds (odd z < t):");
    for (t, z) in [(18u64, 3u64), (27, 25), (4, 1)] {
        let (b1, b2) = han_family_bounds(t, z)?;
        println!("  (t={t}, z={z}): bound1^2 = {b1}, bound2^2 = {b2}");
    }
    Ok(())
}
