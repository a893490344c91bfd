//! Exact-arithmetic toolkit for truncated q-expansions of modular forms.
//!
//! Everything lives on the universal q^(1/24) grid: a [`Series24`] stores a
//! sparse map from grid index `n` (meaning the exponent n/24) to an exact
//! coefficient, so integer-weight forms occupy indices divisible by 24 while
//! half-integral eta-multiplier forms occupy a fixed residue class mod 24.
//! Coefficients are big rationals, optionally extended to a quadratic field
//! `a + b*sqrt(d)` ([`FieldElem`]) so that eigenform data over fields like
//! Q(sqrt(-11)) stays exact end to end.
//!
//! The crate is organized as:
//!
//! * [`qseries`] — coefficient rings and the series type with its operator
//!   algebra (U/V, twists, sieves, theta derivative, Rankin-Cohen brackets).
//! * [`chars`] — real Dirichlet characters via Kronecker/Jacobi symbols.
//! * [`forms`] — concrete constructors: eta and eta quotients with weight /
//!   character / cusp-order metadata, theta-series tables, Eisenstein series
//!   with exact L-values, and the worked-example fixture catalog.
//! * [`hecke`] — Hecke operators in integer weight, the half-integral T_{p^2},
//!   eigenform detection, and exact eigenbasis decomposition.
//! * [`shimura`] — the Shimura lift for the theta multiplier and both
//!   eta-multiplier variants, plus the eta-power pipelines.
//! * [`verify`] — named coefficient-by-coefficient identity checks; the
//!   acceptance surface.
//! * [`lmfdb`] — newform coefficient records: bundled offline fixtures, an
//!   on-disk cache, and an opt-in HTTP client.

pub mod chars;
pub mod forms;
pub mod hecke;
pub mod lmfdb;
pub mod qseries;
pub mod shimura;
pub mod verify;

pub use chars::RealChar;
pub use qseries::{FieldElem, Rational, Series24};

/// Errors reported by fallible operations (parsing, IO, decomposition, …).
///
/// Contract violations inside the exact-arithmetic core (coefficient-field
/// mismatches, reads past a series' precision bound, …) are programming
/// errors and panic instead.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("negative valuation: {0}")]
    NegativeValuation(String),
    #[error("residue-class violation: {0}")]
    ResidueClass(String),
    #[error("t = {0} is not square-free")]
    NotSquareFree(u64),
    #[error("singular decomposition system: {0}")]
    SingularSystem(String),
    #[error("target outside basis span: first residual at grid index {0}")]
    NonzeroResidual(u64),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("coefficient count {want} exceeds available {have} for {label}")]
    CountExceedsAvailable { label: String, want: usize, have: usize },
    #[error("cache parse failure in {path}: {msg}")]
    CacheParse { path: String, msg: String },
    #[error("network failure: {0}")]
    Network(String),
    #[error("network access disabled (pass --network to enable)")]
    NetworkDisabled,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("transition not covered: {0}")]
    Uncovered(String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
