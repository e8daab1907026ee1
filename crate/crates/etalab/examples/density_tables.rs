//! Reproduce coefficient-divisibility density tables at desk scale:
//! the partition function modulo 2 and 3, the quotient eta(18)^3/eta(1)
//! modulo 2, 3, 5, and the generalized example geta(9,0)/geta(6,1)
//! modulo 3 and 5.

use etalab::density::{density_scan, emit_table, TableFormat};
use etalab::etaexpr::{normalize, parse};

fn main() -> etalab::Result<()> {
    let runs: [(&str, &[u64], &[usize]); 3] = [
        ("1/eta(1)", &[2, 3], &[20_000, 40_000, 60_000, 80_000, 100_000]),
        ("eta(18)^3/eta(1)", &[2, 3, 5], &[1_000, 50_000, 100_000]),
        ("geta(9,0)/geta(6,1)", &[3, 5], &[9_000, 18_000, 27_000, 36_000, 45_000]),
    ];
    for (text, moduli, checkpoints) in runs {
        let nf = normalize(&parse(text)?)?;
        for &m in moduli {
            let table = density_scan(&nf, m, checkpoints, 1_000_000)?;
            println!("# {text} mod {m}");
            print!("{}", emit_table(&table, TableFormat::Csv, true));
            println!();
        }
    }
    Ok(())
}
