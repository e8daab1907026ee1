//! Exact arithmetic for Dedekind eta-quotients and generalized eta-quotients.
//!
//! The crate is organized around a pipeline: parse an eta-quotient expression,
//! normalize it, derive its invariants, and then either expand it as a
//! truncated q-series, analyze it as a modular form, or decide lacunarity
//! criteria for it.
//!
//! - [`qseries`]: truncated q-series over exact integers or residues mod `M`,
//!   with sparse pentagonal-support multiplication and division
//! - [`etaexpr`]: expression grammar (`eta(d)`, `geta(d,g)`), normal forms,
//!   derived profile invariants, and series expansion
//! - [`modform`]: cusp sets for Γ₀(N) and Γ₁(N), modularity condition checks,
//!   exact orders of vanishing, eta-quotient characters, holomorphy reports
//! - [`lacunarity`]: prime-power lacunarity criteria for ordinary and
//!   generalized quotients, companion-form construction, and congruence
//!   verification on truncated expansions
//! - [`density`]: coefficient-divisibility density scans δ(F, M; X) with CSV
//!   and JSON table output
//! - [`hooklen`]: brute-force partition/hook-length oracle and verification of
//!   the Nekrasov-Okounkov and Han product identities
//! - [`cli`]: the `etalab` command-line driver
//!
//! Everything that feeds a mathematical decision (orders, bounds, weights,
//! exponent prefixes) is computed with exact rational arithmetic; floating
//! point appears only in display formatting.

pub mod cli;
pub mod density;
pub mod etaexpr;
pub mod hooklen;
pub mod lacunarity;
pub mod modform;
pub mod qseries;

use num::BigInt;
use num::rational::BigRational;

pub use etaexpr::{EtaExpr, NormalForm, QuotientProfile};
pub use lacunarity::LacunarityVerdict;
pub use modform::{Group, HolomorphyReport};
pub use qseries::{CoefficientRing, QSeries};

/// Exact rational used for prefixes, orders, weights, and bounds.
pub type Rat = BigRational;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Binary series operation over two different coefficient rings.
    #[error("coefficient ring mismatch: {0}")]
    RingMismatch(String),
    /// Division by a series whose constant term is not a unit.
    #[error("constant term is not invertible: {0}")]
    NonUnitConstant(String),
    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Expression text failed to parse.
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    /// An exponent falls outside the permitted half-integer classes.
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    /// A factor parameter does not divide the requested level.
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    /// A cusp does not belong to the given level or group.
    #[error("invalid cusp: {0}")]
    InvalidCusp(String),
    /// A request exceeds the configured truncation or enumeration budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
