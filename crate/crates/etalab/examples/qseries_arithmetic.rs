//! Raw q-series arithmetic: build the partition generating function by
//! forward substitution against the pentagonal series, reduce it modulo a
//! prime, and exercise products, powers, and dilation.

use etalab::qseries::{eta_series, CoefficientRing, QSeries};

fn main() -> etalab::Result<()> {
    let t = 30;
    let eta = eta_series(1, t, CoefficientRing::Exact);
    println!("pentagonal series ∏(1-q^n), prefix q^({}):", eta.prefix());
    for n in 0..=t {
        if eta.coeff(n) != 0u32.into() {
            print!(" {:+}q^{n}", eta.coeff(n));
        }
    }
    println!("\n");

    let partitions = QSeries::one(CoefficientRing::Exact, t).div_unit(&eta)?;
    println!("p(0..=12) = {:?}", (0..=12).map(|n| partitions.coeff(n)).collect::<Vec<_>>());

    let mod5 = partitions.reduce_mod(5)?;
    let residues: Vec<u64> = mod5.coeffs_mod().unwrap()[..=24].to_vec();
    println!("p(n) mod 5  = {residues:?}");
    println!("             (zero at n = 4, 9, 14, 19, 24)");

    // η(τ)^24: the discriminant-form coefficients via repeated squaring.
    let delta = eta_series(1, 8, CoefficientRing::Exact).pow_int(24)?;
    println!(
        "\n∏(1-q^n)^24 through q^8: {:?} with prefix q^({})",
        delta.coeffs_bigint(),
        delta.prefix()
    );

    // Dilation moves coefficients to multiples and scales the prefix.
    let dilated = eta_series(1, 10, CoefficientRing::Exact).dilate(3, None);
    assert_eq!(dilated, eta_series(3, 30, CoefficientRing::Exact));
    println!("dilate(η-series, 3) meets η(3τ): prefix q^({})", dilated.prefix());
    Ok(())
}
