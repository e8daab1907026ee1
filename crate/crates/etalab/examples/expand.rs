//! Expand an eta-quotient expression as a truncated q-series.
//!
//! ```bash
//! cargo run --example expand
//! cargo run --example expand -- "geta(5,2)/geta(5,1)" 30
//! ```

use etalab::etaexpr::{expand, normalize, parse};
use etalab::qseries::CoefficientRing;

fn main() -> etalab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = args.first().map(String::as_str).unwrap_or("1/eta(1)");
    let terms: usize = args
        .get(1)
        .and_then(|t| t.parse().ok())
        .unwrap_or(20);

    let expr = parse(text)?;
    let nf = normalize(&expr)?;
    let series = expand(&nf, terms, CoefficientRing::Exact)?;

    println!("expression : {nf}");
    println!("prefix     : q^({})", series.prefix());
    println!("integral part through q^{terms}:");
    for n in 0..=series.truncation() {
        let c = series.coeff(n);
        if c != 0u32.into() {
            println!("  q^{n:<4} {c}");
        }
    }
    Ok(())
}
