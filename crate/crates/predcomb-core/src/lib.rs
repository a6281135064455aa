//! Finitary combinatorics of constant prediction and evasion.
//!
//! A predictor is a total function from finite words over an alphabet of
//! size `n` to a next-symbol guess.  It *k-constantly predicts* an infinite
//! word when, from some point on, every window of `k` consecutive positions
//! contains a correct guess; the *weak* variant only requires a correct
//! guess in every aligned block `[mk, (m+1)k)`.
//!
//! This crate provides the desk-scale machinery around those notions:
//!
//! * [`word`] — finite words, eventually periodic infinite words, and the
//!   prediction-checking semantics ([`checking`]);
//! * [`encoding`] — the reduction of n-ary k-constant prediction to binary
//!   weak prediction via block encodings and the halving predictor ψ;
//! * [`trees`] — window traces on prefix trees, the halving predictor for
//!   bounded-branching trees, coverability, and per-window evasion;
//! * [`forcing`] — the poset of finite predictor approximations `(ℓ, σ, F)`
//!   with its linked bucket structure and sharpness witnesses;
//! * [`oracles`] — independent brute-force ground truth for every counting
//!   claim used elsewhere.
//!
//! Everything is pure and immutable after construction; the crate is
//! `no_std` (with `alloc`) and all randomized helpers are seeded and
//! deterministic across platforms.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod checking;
pub mod encoding;
pub mod error;
pub mod forcing;
pub mod oracles;
pub mod sampling;
pub mod trees;
pub mod word;

pub use checking::{
    check_constant, check_constant_exact, check_weak, diagonal_evader, round_robin_evader,
    HitReport,
};
pub use encoding::{
    a_set, encode_prefix, encode_ultword, encode_word, enum_g_families, g_space_size, psi,
    psi_explain, psi_table, verify_main_theorem, ASet, BinPredictorFamily, GFamily, PsiDecision,
};
pub use error::{Error, Result};
pub use forcing::{
    bucket_count, bucket_key, common_extension, extends, extract_guessers, sharpness_witness,
    validate_condition, BucketKey, ConditionReport, ExclusionMap, ExtendCheck, PkCondition,
    SharpnessWitness,
};
pub use oracles::EnumBudget;
pub use trees::{
    build_window_predictor, check_star, evade_in_window, is_coverable, max_coverable_size,
    phi_from_predictor, window_traces, BlockMap, BlockTree, CoverMode, CoverReport, CoverWitness,
    PrefixTree, StarReport,
};
pub use word::{Predictor, Symbol, SymbolSource, UltWord, Word};
