//! Independent brute-force ground truth: predictor enumeration, exact
//! finite cover numbers, window-impossibility certificates, and exhaustive
//! verification of the extension-set bound.

use alloc::string::String;
use alloc::vec::Vec;

use crate::encoding::{a_set, BinPredictorFamily};
use crate::error::{Error, Result};
use crate::sampling::prf_bit;
use crate::trees::{is_coverable, CoverMode};
use crate::word::{words_below, Predictor, Word};

pub mod sweep;

/// Upfront cap on enumerations; checked before any expansion starts,
/// never mid-result.  The time field is advisory for callers that own a
/// clock; the core only enforces item counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    pub max_items: u64,
    pub max_seconds: u64,
}

impl EnumBudget {
    pub fn new(max_items: u64) -> Self {
        EnumBudget { max_items, max_seconds: u64::MAX }
    }

    pub fn admit(&self, required: u128) -> Result<()> {
        if required > self.max_items as u128 {
            return Err(Error::BudgetExceeded { required, allowed: self.max_items });
        }
        Ok(())
    }
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget { max_items: 1 << 22, max_seconds: u64::MAX }
    }
}

/// Number of table predictors over `n` symbols with the given depth.
pub fn predictor_count(n: usize, depth: usize) -> u128 {
    let entries = words_below(n, depth);
    if entries >= 128 {
        return u128::MAX;
    }
    (n as u128).checked_pow(entries as u32).unwrap_or(u128::MAX)
}

/// All table predictors of the given depth, lexicographic by table.
pub fn enum_predictors(
    n: usize,
    depth: usize,
    budget: &EnumBudget,
) -> Result<impl Iterator<Item = Predictor>> {
    let count = predictor_count(n, depth);
    budget.admit(count)?;
    Ok((0..count as u64).map(move |i| {
        Predictor::table_from_index(n, depth, i).expect("index below the admitted count")
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// Every all-equal family built from every binary table predictor of
    /// the report's depth.
    Exhaustive,
    /// Seeded lazily-resolved random families.
    Trials { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASetBoundReport {
    pub n: usize,
    pub k: usize,
    pub depth: usize,
    pub mode: String,
    pub seed: Option<u64>,
    pub families_checked: u64,
    pub prefixes_checked: u64,
    pub max_observed: usize,
}

/// Checks `|A_σ^k| ≤ 2^k − 1` over every prefix of length ≤ `depth` for
/// every family in scope.  A violation is returned as
/// [`Error::ClaimViolated`] carrying the offending prefix and family
/// index; it would be a build-stopping defect.
pub fn verify_a_set_bound(
    n: usize,
    k: usize,
    depth: usize,
    mode: BoundMode,
    budget: &EnumBudget,
) -> Result<ASetBoundReport> {
    let mut report = ASetBoundReport {
        n,
        k,
        depth,
        mode: match mode {
            BoundMode::Exhaustive => String::from("exhaustive"),
            BoundMode::Trials { .. } => String::from("trials"),
        },
        seed: match mode {
            BoundMode::Trials { seed, .. } => Some(seed),
            BoundMode::Exhaustive => None,
        },
        families_checked: 0,
        prefixes_checked: 0,
        max_observed: 0,
    };
    let mut scan = |fam: &BinPredictorFamily, family_index: u64| -> Result<()> {
        for len in 0..=depth {
            for r in 0..(n as u64).pow(len as u32) {
                let sigma = Word::from_rank(n, len, r);
                let set = a_set(&sigma, fam, k).map_err(|e| match e {
                    Error::ClaimViolated { sigma, .. } => {
                        Error::ClaimViolated { sigma, family_index }
                    }
                    other => other,
                })?;
                report.prefixes_checked += 1;
                report.max_observed = report.max_observed.max(set.members.len());
            }
        }
        report.families_checked += 1;
        Ok(())
    };
    match mode {
        BoundMode::Exhaustive => {
            let count = predictor_count(2, depth);
            budget.admit(count)?;
            for idx in 0..count as u64 {
                let pi = Predictor::table_from_index(2, depth, idx)?;
                let fam = BinPredictorFamily::all_equal(n, k, pi)?;
                scan(&fam, idx)?;
            }
        }
        BoundMode::Trials { trials, seed } => {
            budget.admit(trials as u128)?;
            for t in 0..trials {
                let fam = random_resolver_family(n, k, seed, t)?;
                scan(&fam, t)?;
            }
        }
    }
    Ok(report)
}

/// A lazily resolved family whose member at `(ḡ, j)` answers by a PRF of
/// `(seed, trial, ḡ index, j, input word)`.  Deterministic and total over
/// index spaces far too large to materialize.
pub fn random_resolver_family(
    n: usize,
    k: usize,
    seed: u64,
    trial: u64,
) -> Result<BinPredictorFamily> {
    BinPredictorFamily::from_resolver(n, k, move |g, j| {
        let g_index = g.index();
        Predictor::from_rule(2, move |w| prf_bit(seed, &[trial, g_index, j as u64], w))
            .expect("binary alphabet")
    })
}

/// One decision fragment on the full binary window tree, with the
/// patterns it misses throughout the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentMiss {
    /// Bit `2^d − 1 + u` is the prediction at node `(d, u)`.
    pub fragment: u64,
    pub missed: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCertificate {
    pub k: usize,
    pub fragments: Vec<FragmentMiss>,
    pub max_hit_count: usize,
}

/// Certifies that no predictor fragment hits all `2^k` binary patterns
/// inside one window: every fragment misses at least one pattern
/// throughout, so each hits at most `2^k − 1`.
pub fn no_full_window_predictor(k: usize, budget: &EnumBudget) -> Result<WindowCertificate> {
    if k == 0 || k > 6 {
        return Err(Error::BudgetExceeded { required: u128::MAX, allowed: budget.max_items });
    }
    let nodes = (1u64 << k) - 1;
    budget.admit(1u128 << nodes)?;
    let mut fragments = Vec::with_capacity(1 << nodes);
    let mut max_hit_count = 0;
    for frag in 0..(1u64 << nodes) {
        let node_bit = |d: usize, u: u64| (frag >> ((1u64 << d) - 1 + u)) & 1;
        let mut missed = Vec::new();
        let mut hits = 0;
        for pattern in 0..(1u64 << k) {
            let hit = (0..k).any(|i| {
                let prefix = pattern >> (k - i);
                let symbol = (pattern >> (k - 1 - i)) & 1;
                node_bit(i, prefix) == symbol
            });
            if hit {
                hits += 1;
            } else {
                missed.push(Word::from_rank(2, k, pattern));
            }
        }
        if missed.is_empty() {
            return Err(Error::VerificationFailed {
                detail: alloc::format!("fragment {frag} hits every pattern at k={k}"),
            });
        }
        max_hit_count = max_hit_count.max(hits);
        fragments.push(FragmentMiss { fragment: frag, missed });
    }
    Ok(WindowCertificate { k, fragments, max_hit_count })
}

/// Largest coverable subset of all length-`len` words (hit in every
/// window of length `k`), by direct enumeration of subsets.
pub fn max_coverable_subset_size(
    n: usize,
    len: usize,
    k: usize,
    budget: &EnumBudget,
) -> Result<usize> {
    let total = (n as u128).pow(len as u32);
    if total > 24 {
        return Err(Error::BudgetExceeded { required: 1 << total, allowed: budget.max_items });
    }
    budget.admit(1u128 << total)?;
    let words: Vec<Word> = (0..total as u64).map(|r| Word::from_rank(n, len, r)).collect();
    let mode = if n == 2 { CoverMode::Exact } else { CoverMode::Brute };
    let mut best = 0;
    for mask in 1u64..(1 << total) {
        if (mask.count_ones() as usize) <= best {
            continue;
        }
        let subset: Vec<Word> = words
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, w)| w.clone())
            .collect();
        if is_coverable(&subset, k, mode, budget)?.coverable {
            best = subset.len();
        }
    }
    Ok(best)
}

/// First-fit partition of all length-`len` words into coverable parts; an
/// upper bound on the exact cover number.
pub fn greedy_cover_bound(n: usize, len: usize, k: usize, budget: &EnumBudget) -> Result<usize> {
    let total = (n as u128).pow(len as u32);
    budget.admit(total)?;
    let mode = if n == 2 { CoverMode::Exact } else { CoverMode::Brute };
    let mut parts: Vec<Vec<Word>> = Vec::new();
    for r in 0..total as u64 {
        let w = Word::from_rank(n, len, r);
        let mut placed = false;
        for part in parts.iter_mut() {
            let mut candidate = part.clone();
            candidate.push(w.clone());
            if is_coverable(&candidate, k, mode, budget)?.coverable {
                part.push(w.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            parts.push(alloc::vec![w]);
        }
    }
    Ok(parts.len())
}

/// Exact minimum number of predictors needed so that every length-`len`
/// word is hit in every window `[a, a+k) ⊆ [0, len)`: branch and bound
/// over partitions into coverable parts.
pub fn exhaustive_cover_number(
    n: usize,
    len: usize,
    k: usize,
    budget: &EnumBudget,
) -> Result<usize> {
    let total = (n as u128).pow(len as u32);
    if total > 16 {
        return Err(Error::BudgetExceeded { required: total, allowed: 16 });
    }
    budget.admit(1u128 << total)?;
    let words: Vec<Word> = (0..total as u64).map(|r| Word::from_rank(n, len, r)).collect();
    let mode = if n == 2 { CoverMode::Exact } else { CoverMode::Brute };
    let cap = max_coverable_subset_size(n, len, k, budget)?.max(1);
    let mut best = greedy_cover_bound(n, len, k, budget)?;

    #[allow(clippy::too_many_arguments)]
    fn descend(
        words: &[Word],
        idx: usize,
        parts: &mut Vec<Vec<Word>>,
        best: &mut usize,
        cap: usize,
        k: usize,
        mode: CoverMode,
        budget: &EnumBudget,
    ) -> Result<()> {
        if idx == words.len() {
            *best = (*best).min(parts.len());
            return Ok(());
        }
        // every part holds at most `cap` words, so the words that cannot
        // fit into existing free capacity force new parts
        let remaining = words.len() - idx;
        let free: usize = parts.iter().map(|p| cap - p.len()).sum();
        let must_open = remaining.saturating_sub(free).div_ceil(cap);
        if parts.len() + must_open >= *best {
            return Ok(());
        }
        let w = &words[idx];
        for p in 0..parts.len() {
            if parts[p].len() >= cap {
                continue;
            }
            let mut candidate = parts[p].clone();
            candidate.push(w.clone());
            if is_coverable(&candidate, k, mode, budget)?.coverable {
                parts[p].push(w.clone());
                descend(words, idx + 1, parts, best, cap, k, mode, budget)?;
                parts[p].pop();
            }
        }
        parts.push(alloc::vec![w.clone()]);
        descend(words, idx + 1, parts, best, cap, k, mode, budget)?;
        parts.pop();
        Ok(())
    }

    let mut parts = Vec::new();
    descend(&words, 0, &mut parts, &mut best, cap, k, mode, budget)?;
    Ok(best)
}
