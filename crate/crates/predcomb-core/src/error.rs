//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

use crate::word::Word;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two values disagree on the alphabet size.
    AlphabetMismatch { left: usize, right: usize },
    /// A symbol is not below the alphabet size.
    SymbolOutOfRange { symbol: u8, alphabet: usize },
    /// An alphabet size below 2 was requested.
    AlphabetTooSmall { alphabet: usize },
    /// The period of an eventually periodic word must be nonempty.
    EmptyPeriod,
    /// A check or encoding needs more positions than the input provides.
    HorizonTooSmall { needed: usize, available: usize },
    /// `check_constant_exact` requires a finite-memory predictor.
    NotFiniteMemory,
    /// A table predictor is missing entries below its depth bound.
    IncompleteTable { missing: usize },
    /// A prefix length is incompatible with the requested block offset.
    PhaseMismatch { len: usize, k: usize, j: usize },
    /// The extension-set level is undefined for this prefix length.
    LevelUndefined { sigma_len: usize, k: usize, level: usize },
    /// An enumeration would exceed the configured budget.
    BudgetExceeded { required: u128, allowed: u64 },
    /// The weak-prediction hypothesis fails at the given encoder index,
    /// offset and block; the conclusion check is vacuous there.
    HypothesisFails { g_index: u64, j: usize, block: usize },
    /// The requested node is not in the tree.
    NodeAbsent { node: Word },
    /// A tree node carries all `2^k` window traces, so no single predictor
    /// covers the window below it.
    WindowOverflow { node: Word },
    /// A condition fed to a poset operation fails its validity invariants.
    InvalidCondition { index: usize, detail: String },
    /// The conditions do not share one bucket `(ℓ, σ)`.
    BucketMismatch,
    /// More conditions than one bucket guarantees a common extension for.
    TooManyConditions { given: usize, max: usize },
    /// An internally constructed value failed its re-verification.
    VerificationFailed { detail: String },
    /// An exclusion cell rules out every candidate value at some input.
    LinkednessViolated { cell: usize, sigma: Word },
    /// An extension set exceeds the halving bound; this is a
    /// build-stopping defect, never expected.
    ClaimViolated { sigma: Word, family_index: u64 },
    /// A textual form could not be parsed.
    Parse { what: &'static str, detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AlphabetMismatch { left, right } => {
                write!(f, "alphabet mismatch: {left} vs {right}")
            }
            Error::SymbolOutOfRange { symbol, alphabet } => {
                write!(f, "symbol {symbol} out of range for alphabet {alphabet}")
            }
            Error::AlphabetTooSmall { alphabet } => {
                write!(f, "alphabet size {alphabet} is below 2")
            }
            Error::EmptyPeriod => write!(f, "period must be nonempty"),
            Error::HorizonTooSmall { needed, available } => {
                write!(f, "horizon too small: need {needed}, have {available}")
            }
            Error::NotFiniteMemory => write!(f, "predictor is not finite-memory"),
            Error::IncompleteTable { missing } => {
                write!(f, "table predictor is missing {missing} entries")
            }
            Error::PhaseMismatch { len, k, j } => {
                write!(f, "length {len} is not ≡ {j} (mod {k})")
            }
            Error::LevelUndefined { sigma_len, k, level } => {
                write!(
                    f,
                    "level {level} undefined for prefix length {sigma_len} at window {k}"
                )
            }
            Error::BudgetExceeded { required, allowed } => {
                write!(f, "budget exceeded: {required} items, allowed {allowed}")
            }
            Error::HypothesisFails { g_index, j, block } => {
                write!(
                    f,
                    "weak-prediction hypothesis fails at encoder {g_index}, offset {j}, block {block}"
                )
            }
            Error::NodeAbsent { node } => write!(f, "node {node} absent from tree"),
            Error::WindowOverflow { node } => {
                write!(f, "node {node} carries a full set of window traces")
            }
            Error::InvalidCondition { index, detail } => {
                write!(f, "condition {index} invalid: {detail}")
            }
            Error::BucketMismatch => write!(f, "conditions do not share one bucket"),
            Error::TooManyConditions { given, max } => {
                write!(f, "{given} conditions given, bucket guarantees only {max}")
            }
            Error::VerificationFailed { detail } => {
                write!(f, "re-verification failed: {detail}")
            }
            Error::LinkednessViolated { cell, sigma } => {
                write!(f, "cell {cell} excludes every value at {sigma}")
            }
            Error::ClaimViolated { sigma, family_index } => {
                write!(
                    f,
                    "extension-set bound violated at {sigma} (family {family_index})"
                )
            }
            Error::Parse { what, detail } => write!(f, "cannot parse {what}: {detail}"),
        }
    }
}
