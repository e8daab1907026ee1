//! Coefficient-divisibility density scans `δ(F, M; X)` over expanded
//! coefficient streams, with CSV and JSON table emission.
//!
//! A scan expands the integral series once modulo `M` (never exactly and
//! then reduced: at scan scale that would be hopeless) and counts, at each
//! checkpoint `X`, the indices `n ∈ [0, X)` whose coefficient vanishes
//! mod `M`. The counting convention is recorded in the emitted metadata;
//! an inclusive upper end would shift `δ` by at most `1/X`.

use num::bigint::BigInt;
use num::traits::ToPrimitive;
use serde::Serialize;

use crate::etaexpr::{expand, NormalForm};
use crate::qseries::CoefficientRing;
use crate::{Error, Rat, Result};

/// Default ceiling for the largest scan checkpoint.
pub const DEFAULT_SCAN_BUDGET: usize = 2_000_000;

/// Counting convention string embedded in emitted tables.
pub const CONVENTION: &str = "indices n in [0, X) of the integral series";

/// One checkpoint of a scan: `count` of the first `x` coefficients that are
/// divisible by the modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensitySample {
    pub x: usize,
    pub count: usize,
}

impl DensitySample {
    /// Exact density `count / x`.
    pub fn delta(&self) -> Rat {
        Rat::new(BigInt::from(self.count), BigInt::from(self.x))
    }

    /// Fixed-point decimal rendering with `digits` places, rounded half-up.
    pub fn decimal(&self, digits: u32) -> String {
        let scale = 10u128.pow(digits);
        let scaled = (2 * self.count as u128 * scale + self.x as u128) / (2 * self.x as u128);
        format!(
            "{}.{:0width$}",
            scaled / scale,
            scaled % scale,
            width = digits as usize
        )
    }
}

/// A density table for one expression and one modulus, with samples at
/// strictly increasing checkpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityTable {
    pub expr: String,
    pub modulus: u64,
    pub samples: Vec<DensitySample>,
}

/// Expand `nf` once modulo `m` and count divisible coefficients at each
/// checkpoint. Checkpoints must be nonempty, strictly increasing, and at
/// most `budget`.
pub fn density_scan(
    nf: &NormalForm,
    m: u64,
    checkpoints: &[usize],
    budget: usize,
) -> Result<DensityTable> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidParameter("no scan checkpoints given".into()));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "checkpoints must be positive and strictly increasing".into(),
        ));
    }
    let max_x = *checkpoints.last().unwrap();
    if max_x > budget {
        return Err(Error::BudgetExceeded(format!(
            "checkpoint {max_x} exceeds the scan budget {budget}"
        )));
    }
    let series = expand(nf, max_x - 1, CoefficientRing::Mod(m))?;
    let coeffs = series.coeffs_mod().expect("scan runs in a residue ring");
    let mut samples = Vec::with_capacity(checkpoints.len());
    let mut count = 0usize;
    let mut next = 0usize;
    for (n, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            count += 1;
        }
        if n + 1 == checkpoints[next] {
            samples.push(DensitySample { x: n + 1, count });
            next += 1;
            if next == checkpoints.len() {
                break;
            }
        }
    }
    Ok(DensityTable {
        expr: nf.to_string(),
        modulus: m,
        samples,
    })
}

/// Output format for emitted tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Decimal places used by the paper-style rendering.
pub const PAPER_STYLE_DIGITS: u32 = 6;

/// Render a table deterministically. CSV rows are `X,count,delta` with
/// `delta` as a fixed six-place decimal under `paper_style` and as the exact
/// reduced fraction otherwise. JSON mirrors the table structure.
pub fn emit_table(table: &DensityTable, format: TableFormat, paper_style: bool) -> String {
    match format {
        TableFormat::Csv => {
            let mut out = String::from("X,count,delta\n");
            for s in &table.samples {
                let delta = if paper_style {
                    s.decimal(PAPER_STYLE_DIGITS)
                } else {
                    let d = s.delta();
                    format!("{}/{}", d.numer(), d.denom())
                };
                out.push_str(&format!("{},{},{}\n", s.x, s.count, delta));
            }
            out
        }
        TableFormat::Json => {
            let shadow = TableJson {
                expr: table.expr.clone(),
                modulus: table.modulus,
                convention: CONVENTION,
                samples: table
                    .samples
                    .iter()
                    .map(|s| {
                        let d = s.delta();
                        SampleJson {
                            x: s.x,
                            count: s.count,
                            delta: DeltaJson {
                                num: d.numer().to_u64().unwrap(),
                                den: d.denom().to_u64().unwrap(),
                            },
                            decimal: s.decimal(PAPER_STYLE_DIGITS),
                        }
                    })
                    .collect(),
            };
            let mut text = serde_json::to_string_pretty(&shadow).unwrap();
            text.push('\n');
            text
        }
    }
}

/// Combine per-modulus tables over shared checkpoints into one wide CSV in
/// the layout of the published tables: header `X,delta_mod<m1>,...` and one
/// six-place decimal per modulus.
pub fn emit_wide_csv(tables: &[DensityTable]) -> Result<String> {
    let first = tables
        .first()
        .ok_or_else(|| Error::InvalidParameter("no tables to combine".into()))?;
    let xs: Vec<usize> = first.samples.iter().map(|s| s.x).collect();
    for t in tables {
        if t.samples.iter().map(|s| s.x).collect::<Vec<_>>() != xs {
            return Err(Error::InvalidParameter(
                "wide layout requires identical checkpoints across moduli".into(),
            ));
        }
    }
    let mut out = String::from("X");
    for t in tables {
        out.push_str(&format!(",delta_mod{}", t.modulus));
    }
    out.push('\n');
    for (i, &x) in xs.iter().enumerate() {
        out.push_str(&x.to_string());
        for t in tables {
            out.push(',');
            out.push_str(&t.samples[i].decimal(PAPER_STYLE_DIGITS));
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize)]
struct DeltaJson {
    num: u64,
    den: u64,
}

#[derive(Serialize)]
struct SampleJson {
    x: usize,
    count: usize,
    delta: DeltaJson,
    decimal: String,
}

#[derive(Serialize)]
struct TableJson {
    expr: String,
    modulus: u64,
    convention: &'static str,
    samples: Vec<SampleJson>,
}
