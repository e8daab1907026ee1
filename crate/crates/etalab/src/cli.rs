//! The `etalab` command-line driver: expansion, analysis, lacunarity checks,
//! density scans, identity verification, and companion-form construction,
//! with CSV/JSON output.
//!
//! Exit codes: 0 on success, 1 on domain errors (a machine-readable error
//! JSON is written to stderr), 2 on usage errors. Output for identical
//! configurations is byte-identical.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::density::{self, TableFormat};
use crate::etaexpr::{build_named, expand, normalize, parse, profile, EtaExpr, FormKind,
    NamedFamily, NormalForm};
use crate::hooklen;
use crate::lacunarity::{self, max_dividing_power};
use crate::modform::{self, weight_json, Group, RatRepr};
use crate::qseries::CoefficientRing;
use crate::{Error, Result};

/// Default ceiling for expansion/scan truncations (overridable via
/// `--cap` or the `ETALAB_CAP` environment variable).
pub const DEFAULT_SCAN_BUDGET: usize = density::DEFAULT_SCAN_BUDGET;

#[derive(Parser)]
#[command(
    name = "etalab",
    version,
    about = "Exact eta-quotient toolkit: q-expansions, cusp orders, lacunarity criteria, \
             density scans, and hook-length identities"
)]
struct Cli {
    /// Write the primary document to a file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Gamma0,
    Gamma1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Layout {
    /// One `X,count,delta` table per modulus.
    Long,
    /// A single `X,delta_mod<m>,...` table across all moduli.
    Wide,
}

#[derive(Args)]
struct ExprArgs {
    /// Eta-quotient expression, e.g. "eta(18)^3/eta(1)" or "geta(9,0)/geta(6,1)".
    #[arg(long, conflicts_with = "family")]
    expr: Option<String>,
    /// Named family: partition, t_regular, han_y1, han_ym1, or han (with --y).
    #[arg(long)]
    family: Option<String>,
    /// Family parameter t.
    #[arg(long)]
    t: Option<u64>,
    /// Family parameter z (integer, may be negative).
    #[arg(long, allow_negative_numbers = true)]
    z: Option<i64>,
    /// Family parameter y (+1 or -1), selects between the two han families.
    #[arg(long, allow_negative_numbers = true)]
    y: Option<i8>,
}

impl ExprArgs {
    fn resolve(&self) -> Result<EtaExpr> {
        match (&self.expr, &self.family) {
            (Some(text), None) => parse(text),
            (None, Some(name)) => build_named(self.named_family(name)?),
            _ => Err(Error::InvalidParameter(
                "exactly one of --expr or --family is required".into(),
            )),
        }
    }

    fn named_family(&self, name: &str) -> Result<NamedFamily> {
        let t = || {
            self.t
                .ok_or_else(|| Error::InvalidParameter(format!("--family {name} requires --t")))
        };
        let z = || {
            self.z
                .ok_or_else(|| Error::InvalidParameter(format!("--family {name} requires --z")))
        };
        match name {
            "partition" | "partition_gen" => Ok(NamedFamily::PartitionGen),
            "t_regular" => Ok(NamedFamily::TRegular { t: t()? }),
            "han_y1" => Ok(NamedFamily::HanY1 { t: t()?, z: z()? }),
            "han_ym1" => Ok(NamedFamily::HanYm1 { t: t()?, z: z()? }),
            "han" => match self.y {
                Some(1) => Ok(NamedFamily::HanY1 { t: t()?, z: z()? }),
                Some(-1) => Ok(NamedFamily::HanYm1 { t: t()?, z: z()? }),
                _ => Err(Error::InvalidParameter(
                    "--family han requires --y 1 or --y -1".into(),
                )),
            },
            other => Err(Error::InvalidParameter(format!(
                "unknown family '{other}' (expected partition, t_regular, han, han_y1, han_ym1)"
            ))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expand an eta-quotient as a truncated q-series.
    Expand {
        #[command(flatten)]
        expr: ExprArgs,
        /// Truncation order (inclusive).
        #[arg(long, default_value_t = 50)]
        terms: usize,
        /// Reduce coefficients modulo M.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Override the truncation budget.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Profile invariants, modularity conditions, bounds, and holomorphy.
    Analyze {
        #[command(flatten)]
        expr: ExprArgs,
        /// Level N (defaults to the lcm L of the factor parameters).
        #[arg(long)]
        level: Option<u64>,
        /// Congruence subgroup (defaults to Gamma0 for ordinary forms,
        /// Gamma1 otherwise).
        #[arg(long, value_enum)]
        group: Option<GroupArg>,
        /// Emit the JSON report instead of the text summary.
        #[arg(long)]
        json: bool,
    },
    /// Decide the lacunarity criterion for a prime power.
    Lacunarity {
        #[command(flatten)]
        expr: ExprArgs,
        #[arg(long)]
        p: u64,
        /// Prime-power exponent (defaults to the maximal a with p^a | D).
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Scan coefficient-divisibility densities and emit a table.
    Density {
        #[command(flatten)]
        expr: ExprArgs,
        /// Modulus M (repeatable; scans run independently per modulus).
        #[arg(long = "mod", required = true)]
        modulus: Vec<u64>,
        /// Checkpoint X (repeatable, strictly increasing).
        #[arg(long = "at", required = true)]
        at: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Render densities as fixed six-place decimals.
        #[arg(long)]
        paper_style: bool,
        /// Table layout for CSV output across multiple moduli.
        #[arg(long, value_enum, default_value_t = Layout::Long)]
        layout: Layout,
        /// Override the scan budget.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Verify a hook-length identity (--family han) or the
    /// Rogers-Ramanujan product (--family rr).
    Verify {
        #[command(flatten)]
        expr: ExprArgs,
        /// Truncation order for the comparison.
        #[arg(long, default_value_t = 18)]
        terms: usize,
        /// Override the partition enumeration cap.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Build the companion forms f and F and run the congruence checks.
    Companion {
        #[command(flatten)]
        expr: ExprArgs,
        #[arg(long)]
        p: u64,
        /// Prime-power exponent (defaults to the maximal a with p^a | D).
        #[arg(long)]
        a: Option<u32>,
        /// Congruence index: checks run modulo p^(j+1).
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Truncation order for the congruence checks.
        #[arg(long, default_value_t = 300)]
        terms: usize,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

/// Entry point used by the `etalab` binary and by tests. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap distinguishes --help/--version (exit 0) from usage errors.
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
        }
    };
    // Documents are buffered so a failing run never leaves a partial table
    // on the primary stream; complete documents are still emitted when a
    // verification reports a mismatch (the nonzero exit code carries the
    // outcome).
    let mut document = Vec::new();
    let result = dispatch(cli.command, &mut document);
    let emit = |document: &[u8], out: &mut dyn Write, err: &mut dyn Write| -> bool {
        if document.is_empty() {
            return true;
        }
        match &cli.output {
            Some(path) => match std::fs::write(path, document) {
                Ok(()) => true,
                Err(io) => {
                    let payload = json!({"error": {
                        "kind": "io-error",
                        "message": format!("cannot write {}: {io}", path.display()),
                    }});
                    let _ = writeln!(err, "{payload}");
                    false
                }
            },
            None => out.write_all(document).is_ok(),
        }
    };
    match result {
        Ok(()) => {
            if emit(&document, out, err) {
                0
            } else {
                1
            }
        }
        Err(DispatchError::Domain(e)) => {
            let kind = error_kind(&e);
            let payload = json!({"error": {"kind": kind, "message": e.to_string()}});
            let _ = writeln!(err, "{payload}");
            1
        }
        Err(DispatchError::VerificationFailed(message)) => {
            emit(&document, out, err);
            let payload = json!({"error": {"kind": "verification-failed", "message": message}});
            let _ = writeln!(err, "{payload}");
            1
        }
    }
}

enum DispatchError {
    Domain(Error),
    VerificationFailed(String),
}

impl From<Error> for DispatchError {
    fn from(e: Error) -> Self {
        DispatchError::Domain(e)
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::RingMismatch(_) => "ring-mismatch",
        Error::NonUnitConstant(_) => "non-unit-constant",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::Syntax { .. } => "syntax-error",
        Error::InvalidExponent(_) => "invalid-exponent",
        Error::InvalidLevel(_) => "invalid-level",
        Error::InvalidCusp(_) => "invalid-cusp",
        Error::BudgetExceeded(_) => "budget-exceeded",
    }
}

fn env_cap() -> Option<usize> {
    std::env::var("ETALAB_CAP").ok()?.parse().ok()
}

fn effective_cap(flag: Option<usize>, default: usize) -> usize {
    flag.or_else(env_cap).unwrap_or(default)
}

fn resolve_normal_form(expr: &ExprArgs) -> Result<(String, NormalForm)> {
    let parsed = expr.resolve()?;
    let nf = normalize(&parsed)?;
    Ok((parsed.to_string(), nf))
}

fn dispatch(command: Command, out: &mut dyn Write) -> std::result::Result<(), DispatchError> {
    match command {
        Command::Expand {
            expr,
            terms,
            modulus,
            format,
            cap,
        } => {
            let (text, nf) = resolve_normal_form(&expr)?;
            let budget = effective_cap(cap, DEFAULT_SCAN_BUDGET);
            if terms > budget {
                return Err(Error::BudgetExceeded(format!(
                    "--terms {terms} exceeds the budget {budget}"
                ))
                .into());
            }
            let ring = match modulus {
                Some(m) => CoefficientRing::Mod(m),
                None => CoefficientRing::Exact,
            };
            let series = expand(&nf, terms, ring)?;
            match format {
                Format::Csv => {
                    let _ = writeln!(out, "n,coefficient");
                    for n in 0..=series.truncation() {
                        let _ = writeln!(out, "{n},{}", series.coeff(n));
                    }
                }
                Format::Json => {
                    let payload = json!({
                        "expr": text,
                        "terms": terms,
                        "modulus": modulus,
                        "prefix": RatRepr::from(series.prefix()),
                        "coeffs": (0..=series.truncation())
                            .map(|n| series.coeff(n).to_string())
                            .collect::<Vec<_>>(),
                    });
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&payload).unwrap());
                }
            }
            Ok(())
        }
        Command::Analyze {
            expr,
            level,
            group,
            json: as_json,
        } => {
            let (text, nf) = resolve_normal_form(&expr)?;
            let prof = profile(&nf);
            let group = match group {
                Some(GroupArg::Gamma0) => Group::Gamma0,
                Some(GroupArg::Gamma1) => Group::Gamma1,
                None => match prof.kind {
                    FormKind::Ordinary => Group::Gamma0,
                    FormKind::Generalized => Group::Gamma1,
                },
            };
            let n = level.unwrap_or(prof.l.max(1));
            let report = modform::holomorphy_report(&nf, n, group)?;
            let verdict_bounds = match prof.kind {
                FormKind::Ordinary => lacunarity::ordinary_criterion(&nf, 2, 1)
                    .ok()
                    .filter(|v| !v.reason.contains("inapplicable"))
                    .map(|v| (v.bound_sq, v.positivity)),
                FormKind::Generalized => lacunarity::generalized_criterion(&nf, 2, 1)
                    .ok()
                    .filter(|v| !v.reason.contains("inapplicable"))
                    .map(|v| (v.bound_sq, v.positivity)),
            };
            if as_json {
                let (bound_key, bound_val, positivity) = match (&prof.kind, &verdict_bounds) {
                    (FormKind::Ordinary, Some((b, _))) => {
                        ("thm1_bound_sq", serde_json::to_value(RatRepr::from(b)).unwrap(), None)
                    }
                    (FormKind::Generalized, Some((b, pos))) => (
                        "thm3_bound_sq",
                        serde_json::to_value(RatRepr::from(b)).unwrap(),
                        pos.as_ref().map(RatRepr::from),
                    ),
                    (FormKind::Ordinary, None) => ("thm1_bound_sq", serde_json::Value::Null, None),
                    (FormKind::Generalized, None) => {
                        ("thm3_bound_sq", serde_json::Value::Null, None)
                    }
                };
                let mut payload = json!({
                    "expr": text,
                    "kind": match prof.kind {
                        FormKind::Ordinary => "ordinary",
                        FormKind::Generalized => "generalized",
                    },
                    "weight": weight_json(&prof.weight),
                    "D": prof.d,
                    "L": prof.l,
                    "level": n,
                    "companion_level": prof.level,
                    "n_tilde": prof.n_tilde,
                    "E": RatRepr::from(&prof.e),
                    "prefix": RatRepr::from(&prof.prefix),
                    "holomorphic": report.holomorphic,
                    "report": report.to_json(),
                });
                payload[bound_key] = bound_val;
                if let Some(pos) = positivity {
                    payload["thm3_positivity"] = serde_json::to_value(pos).unwrap();
                }
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                let _ = writeln!(out, "expression: {text}");
                let _ = writeln!(out, "weight: {}", prof.weight);
                let _ = writeln!(out, "D: {}", prof.d);
                let _ = writeln!(out, "L: {} (level used: {n}, group: {group})", prof.l);
                let _ = writeln!(out, "E: {} (prefix {})", prof.e, prof.prefix);
                if let Some((bound, pos)) = &verdict_bounds {
                    let _ = writeln!(out, "criterion bound^2: {bound}");
                    if let Some(pos) = pos {
                        let _ = writeln!(out, "criterion positivity: {pos}");
                    }
                }
                let _ = writeln!(
                    out,
                    "modularity conditions: {}",
                    if report.modularity.pass { "pass" } else { "fail" }
                );
                let _ = writeln!(
                    out,
                    "holomorphic: {} (min order {} at {})",
                    report.holomorphic, report.min_order, report.witness
                );
            }
            Ok(())
        }
        Command::Lacunarity {
            expr,
            p,
            a,
            json: as_json,
        } => {
            let (_, nf) = resolve_normal_form(&expr)?;
            let prof = profile(&nf);
            let a = a.unwrap_or_else(|| max_dividing_power(prof.d, p).max(1));
            let verdict = lacunarity::criterion_check(&nf, p, a)?;
            let family_bounds = match (expr.family.as_deref(), expr.t, expr.z) {
                (Some("han" | "han_y1" | "han_ym1"), Some(t), Some(z)) if z > 0 => {
                    lacunarity::han_family_bounds(t, z as u64).ok()
                }
                _ => None,
            };
            if as_json {
                let mut payload = verdict.to_json();
                if let Some((b1, b2)) = &family_bounds {
                    payload["family_bound1_sq"] =
                        serde_json::to_value(RatRepr::from(b1)).unwrap();
                    payload["family_bound2_sq"] =
                        serde_json::to_value(RatRepr::from(b2)).unwrap();
                }
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                let _ = writeln!(
                    out,
                    "{}: p={p} a={a} criterion={} satisfied={} ({})",
                    verdict.expr, verdict.criterion, verdict.satisfied, verdict.reason
                );
                if let Some((b1, b2)) = &family_bounds {
                    let _ = writeln!(out, "family bounds: bound1^2={b1} bound2^2={b2}");
                }
            }
            Ok(())
        }
        Command::Density {
            expr,
            modulus,
            at,
            format,
            paper_style,
            layout,
            cap,
        } => {
            let (text, nf) = resolve_normal_form(&expr)?;
            let budget = effective_cap(cap, DEFAULT_SCAN_BUDGET);
            let fmt = match format {
                Format::Csv => TableFormat::Csv,
                Format::Json => TableFormat::Json,
            };
            if layout == Layout::Wide && fmt != TableFormat::Csv {
                return Err(Error::InvalidParameter(
                    "--layout wide is a CSV layout; use --format csv".into(),
                )
                .into());
            }
            let tables: Vec<density::DensityTable> = modulus
                .iter()
                .map(|&m| density::density_scan(&nf, m, &at, budget))
                .collect::<Result<_>>()?;
            match (fmt, layout) {
                (TableFormat::Csv, Layout::Wide) => {
                    let _ = writeln!(out, "# {text}");
                    let _ = write!(out, "{}", density::emit_wide_csv(&tables)?);
                }
                (TableFormat::Csv, Layout::Long) => {
                    for table in &tables {
                        let _ = writeln!(out, "# {text} mod {}", table.modulus);
                        let _ =
                            write!(out, "{}", density::emit_table(table, fmt, paper_style));
                    }
                }
                (TableFormat::Json, _) => {
                    let json_tables: Vec<serde_json::Value> = tables
                        .iter()
                        .map(|table| {
                            let rendered = density::emit_table(table, fmt, paper_style);
                            serde_json::from_str(&rendered).unwrap()
                        })
                        .collect();
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&serde_json::Value::Array(json_tables))
                            .unwrap()
                    );
                }
            }
            Ok(())
        }
        Command::Verify { expr, terms, cap } => {
            let cap = effective_cap(cap, hooklen::DEFAULT_PARTITION_CAP);
            match expr.family.as_deref() {
                Some("rr") => {
                    let quotient = expand(
                        &normalize(&parse("geta(5,2)/geta(5,1)")?)?,
                        terms,
                        CoefficientRing::Exact,
                    )?;
                    let mut direct = crate::qseries::QSeries::one(CoefficientRing::Exact, terms);
                    for n in 0..=terms {
                        for e in [5 * n + 2, 5 * n + 3] {
                            if e <= terms {
                                direct.mul_binomial(e, -1);
                            }
                        }
                        for e in [5 * n + 1, 5 * n + 4] {
                            if e <= terms {
                                direct.div_binomial(e, -1);
                            }
                        }
                    }
                    for n in 0..=terms {
                        if quotient.coeff(n) != direct.coeff(n) {
                            return Err(DispatchError::VerificationFailed(format!(
                                "Rogers-Ramanujan mismatch at q^{n}"
                            )));
                        }
                    }
                    let _ = writeln!(out, "OK");
                    Ok(())
                }
                Some("han" | "han_y1" | "han_ym1") => {
                    let t = expr.t.ok_or_else(|| {
                        Error::InvalidParameter("verify --family han requires --t".into())
                    })?;
                    let z = expr.z.ok_or_else(|| {
                        Error::InvalidParameter("verify --family han requires --z".into())
                    })?;
                    let y = match expr.family.as_deref() {
                        Some("han_y1") => 1,
                        Some("han_ym1") => -1,
                        _ => expr.y.ok_or_else(|| {
                            Error::InvalidParameter("verify --family han requires --y".into())
                        })?,
                    };
                    if y != 1 && y != -1 {
                        return Err(
                            Error::InvalidParameter("--y must be 1 or -1".into()).into()
                        );
                    }
                    let check = hooklen::verify_identity(t, y, z, terms, cap)?;
                    let _ = writeln!(out, "{check}");
                    if check.ok {
                        Ok(())
                    } else {
                        Err(DispatchError::VerificationFailed(check.to_string()))
                    }
                }
                other => Err(Error::InvalidParameter(format!(
                    "verify requires --family han|han_y1|han_ym1|rr, got {other:?}"
                ))
                .into()),
            }
        }
        Command::Companion {
            expr,
            p,
            a,
            j,
            terms,
            cap,
            json: as_json,
        } => {
            let (text, nf) = resolve_normal_form(&expr)?;
            let budget = effective_cap(cap, DEFAULT_SCAN_BUDGET);
            if terms > budget {
                return Err(Error::BudgetExceeded(format!(
                    "--terms {terms} exceeds the budget {budget}"
                ))
                .into());
            }
            let prof = profile(&nf);
            let a = a.unwrap_or_else(|| max_dividing_power(prof.d, p).max(1));
            let f = lacunarity::build_companion_f(&nf, p, a)?;
            let big_f = lacunarity::build_companion_form(&nf, p, a, j)?;
            let weight = lacunarity::companion_weight(&nf, p, a, j)?;
            let unit = lacunarity::verify_unit_lemma(&nf, p, a, j, terms)?;
            let congruence = lacunarity::verify_congruence(&nf, p, a, j, terms)?;
            if as_json {
                let payload = json!({
                    "expr": text,
                    "p": p,
                    "a": a,
                    "j": j,
                    "modulus": p.pow(j + 1),
                    "f": f.to_string(),
                    "F": big_f.to_string(),
                    "k_F": weight_json(&weight.weight),
                    "k_F_integral": weight.integral,
                    "terms": terms,
                    "unit_lemma": unit,
                    "congruence": congruence,
                });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&payload).unwrap());
            } else {
                let _ = writeln!(out, "expression: {text}");
                let _ = writeln!(out, "f = {f}");
                let _ = writeln!(out, "F = {big_f}");
                let _ = writeln!(
                    out,
                    "k_F = {}{}",
                    weight.weight,
                    if weight.integral {
                        ""
                    } else {
                        "  (warning: non-integral)"
                    }
                );
                let _ = writeln!(
                    out,
                    "f^(p^j) ≡ 1 (mod p^(j+1)) through q^{terms}: {unit}"
                );
                let _ = writeln!(
                    out,
                    "F ≡ dilated expression (mod p^(j+1)) through q^{terms}: {congruence}"
                );
            }
            if unit && congruence {
                Ok(())
            } else {
                Err(DispatchError::VerificationFailed(
                    "companion congruence checks failed".into(),
                ))
            }
        }
    }
}
