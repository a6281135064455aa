//! Exhaustive verification of the tree halving predictor over *every*
//! binary tree of small depth meeting the window-trace bound.
//!
//! The decisive observation: the halving decision at a node only reads
//! extension counts inside that node's subtree, so for a depth-`L` tree
//! split at the root, everything below depth 1 is summarized per subtree
//! by (its node counts at shallow depths, whether all its branches pass
//! all windows given a hit/miss at position 0, and whether it is full at
//! depth `k−1`).  Trees whose two subtrees share those summaries are
//! indistinguishable to the check, which turns billions of trees into a
//! few thousand class pairs — while still counting every tree exactly
//! once.  The summary route is cross-checked against a direct per-tree
//! route, which is in turn checked against the general predictor builder.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::word::{Symbol, Word};

const MAX_DEPTH: usize = 5;

/// Presence masks per depth: `p[d]` bit `u` is set iff node `(d, u)` lies
/// on the tree of `leaves`.
fn fold_presence(leaves: u64, depth: usize) -> [u64; MAX_DEPTH + 1] {
    let mut p = [0u64; MAX_DEPTH + 1];
    p[depth] = leaves;
    for d in (0..depth).rev() {
        let mut m = 0u64;
        for u in 0..1u64 << d {
            if (p[d + 1] >> (2 * u)) & 3 != 0 {
                m |= 1 << u;
            }
        }
        p[d] = m;
    }
    p
}

fn descendants(p: &[u64; MAX_DEPTH + 1], d: usize, u: u64, e: usize) -> u32 {
    let span = e - d;
    ((p[e] >> (u << span)) & ((1u64 << (1 << span)) - 1)).count_ones()
}

/// Does every node with a full window below it have fewer than `2^k`
/// window traces?
pub fn tree_meets_trace_bound(leaves: u64, depth: usize, k: usize) -> bool {
    let p = fold_presence(leaves, depth);
    for d in 0..=depth.saturating_sub(k) {
        for u in 0..1u64 << d {
            if (p[d] >> u) & 1 == 1 && descendants(&p, d, u, d + k) >= 1 << k {
                return false;
            }
        }
    }
    true
}

/// The halving prediction at node `(d, u)`, bit-level route.
fn bit_halving_value(p: &[u64; MAX_DEPTH + 1], depth: usize, k: usize, d: usize, u: u64) -> u8 {
    if d >= depth || (p[d] >> u) & 1 == 0 {
        return 0;
    }
    let hi = k.min(depth - d);
    for i in 1..=hi {
        if descendants(p, d, u, d + i) < 1 << i {
            let c0 = descendants(p, d + 1, 2 * u, d + i);
            let c1 = descendants(p, d + 1, 2 * u + 1, d + i);
            return (c1 > c0) as u8;
        }
    }
    0
}

/// Direct per-tree check: build the halving predictions and scan every
/// branch for a hit in every window.
pub fn halving_check_tree(leaves: u64, depth: usize, k: usize) -> bool {
    let p = fold_presence(leaves, depth);
    let mut pi = [0u64; MAX_DEPTH];
    for d in 0..depth {
        for u in 0..1u64 << d {
            if (p[d] >> u) & 1 == 1 && bit_halving_value(&p, depth, k, d, u) == 1 {
                pi[d] |= 1 << u;
            }
        }
    }
    for v in 0..1u64 << depth {
        if (leaves >> v) & 1 == 0 {
            continue;
        }
        let mut hits = 0u64;
        for (pos, pi_level) in pi.iter().enumerate().take(depth) {
            let prefix = v >> (depth - pos);
            let symbol = (v >> (depth - 1 - pos)) & 1;
            if (pi_level >> prefix) & 1 == symbol {
                hits |= 1 << pos;
            }
        }
        let wmask = (1u64 << k) - 1;
        for a in 0..=depth.saturating_sub(k) {
            if depth >= k && hits & (wmask << a) == 0 {
                return false;
            }
        }
    }
    true
}

/// On-tree halving predictions as explicit `(node, value)` pairs, for
/// agreement tests against the general construction.
pub fn bit_halving_predictions(leaves: u64, depth: usize, k: usize) -> Vec<(Word, Symbol)> {
    let p = fold_presence(leaves, depth);
    let mut out = Vec::new();
    for d in 0..depth {
        for u in 0..1u64 << d {
            if (p[d] >> u) & 1 == 1 {
                out.push((Word::from_rank(2, d, u), bit_halving_value(&p, depth, k, d, u)));
            }
        }
    }
    out
}

/// Everything the root check needs to know about one depth-1 subtree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct ClassKey {
    /// Present node counts at subtree-relative depths 0, 1, 2.
    counts: [u8; 3],
    /// All branches pass all windows, given a hit at position 0.
    ok_hit: bool,
    /// … given a miss at position 0.
    ok_miss: bool,
    /// Subtree has all `2^{k−1}` nodes at relative depth `k−1`.
    full: bool,
}

const NULL_KEY: ClassKey =
    ClassKey { counts: [0, 0, 0], ok_hit: true, ok_miss: true, full: false };

/// Is the subtree admissible when hung at depth 1 of a depth-`L` tree?
fn subtree_valid(mask: u64, height: usize, k: usize) -> bool {
    if height < k {
        return true;
    }
    let p = fold_presence(mask, height);
    for r in 0..=height - k {
        for u in 0..1u64 << r {
            if (p[r] >> u) & 1 == 1 && descendants(&p, r, u, r + k) >= 1 << k {
                return false;
            }
        }
    }
    true
}

fn summarize(mask: u64, depth: usize, k: usize) -> ClassKey {
    let height = depth - 1;
    let p = fold_presence(mask, height);
    let mut counts = [0u8; 3];
    for (r, c) in counts.iter_mut().enumerate() {
        if r <= height {
            *c = p[r].count_ones() as u8;
        }
    }
    // internal predictions live at absolute depths 1..depth, i.e. at
    // relative depths 0..height, with the level cap taken absolutely
    let mut pi = [0u64; MAX_DEPTH];
    for r in 0..height {
        for u in 0..1u64 << r {
            if (p[r] >> u) & 1 == 1 {
                let hi = k.min(depth - (r + 1));
                let mut val = 0u8;
                for i in 1..=hi {
                    if descendants(&p, r, u, r + i) < 1 << i {
                        let c0 = descendants(&p, r + 1, 2 * u, r + i);
                        let c1 = descendants(&p, r + 1, 2 * u + 1, r + i);
                        val = (c1 > c0) as u8;
                        break;
                    }
                }
                if val == 1 {
                    pi[r] |= 1 << u;
                }
            }
        }
    }
    let mut ok = [true, true];
    let wmask = (1u64 << k) - 1;
    for v in 0..1u64 << height {
        if (mask >> v) & 1 == 0 {
            continue;
        }
        let mut hits = 0u64;
        for pos in 1..depth {
            let r = pos - 1;
            let prefix = v >> (height - r);
            let symbol = (v >> (height - pos)) & 1;
            if (pi[r] >> prefix) & 1 == symbol {
                hits |= 1 << pos;
            }
        }
        for (b, slot) in ok.iter_mut().enumerate() {
            let full_hits = hits | b as u64;
            for a in 0..=depth.saturating_sub(k) {
                if depth >= k && full_hits & (wmask << a) == 0 {
                    *slot = false;
                }
            }
        }
    }
    let full = k >= 1 && k - 1 <= height && p[k - 1].count_ones() == 1 << (k - 1);
    ClassKey { counts, ok_hit: ok[1], ok_miss: ok[0], full }
}

/// Root combination: pick the halving value at the root from the summed
/// shallow counts, then both subtrees must pass under the induced
/// position-0 hit pattern.
fn combine(l: &ClassKey, r: &ClassKey, depth: usize, k: usize) -> bool {
    let hi = k.min(depth);
    let mut pi0 = 0u8;
    for i in 1..=hi {
        let c = l.counts[i - 1] as u32 + r.counts[i - 1] as u32;
        if c < 1 << i {
            pi0 = (r.counts[i - 1] > l.counts[i - 1]) as u8;
            break;
        }
    }
    let left_ok = if pi0 == 0 { l.ok_hit } else { l.ok_miss };
    let right_ok = if pi0 == 1 { r.ok_hit } else { r.ok_miss };
    left_ok && right_ok
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub depth: usize,
    pub k: usize,
    /// Trees enumerated (every bound-satisfying tree of exactly `depth`).
    pub trees: u64,
    /// Trees whose halving predictor misses a window on some branch.
    pub violations: u64,
    /// Leaf set of one violating tree, if any.
    pub first_violation: Option<u64>,
}

/// Checks the halving predictor over every binary tree of exactly `depth`
/// that satisfies the `< 2^k` window-trace bound.
pub fn sweep(depth: usize, k: usize) -> Result<SweepOutcome> {
    if depth == 0 || depth > MAX_DEPTH || k == 0 || k > 3 {
        return Err(Error::BudgetExceeded {
            required: u128::MAX,
            allowed: (MAX_DEPTH as u64) << 32,
        });
    }
    let height = depth - 1;
    let width = 1u64 << (1 << height);
    let mut classes: BTreeMap<ClassKey, (u64, u64)> = BTreeMap::new();
    for mask in 1..width {
        if subtree_valid(mask, height, k) {
            let key = summarize(mask, depth, k);
            let slot = classes.entry(key).or_insert((0, mask));
            slot.0 += 1;
        }
    }
    let mut trees = 0u64;
    let mut violations = 0u64;
    let mut first_violation = None;
    let entries: Vec<(ClassKey, u64, u64)> =
        classes.iter().map(|(k2, &(c, rep))| (*k2, c, rep)).collect();
    let mut account = |lk: &ClassKey, rk: &ClassKey, count: u64, lrep: u64, rrep: u64| {
        trees += count;
        if !combine(lk, rk, depth, k) {
            violations += count;
            if first_violation.is_none() {
                first_violation = Some(lrep | (rrep << (1 << height)));
            }
        }
    };
    for (lk, lc, lrep) in &entries {
        // singles: subtree on one side only
        account(lk, &NULL_KEY, *lc, *lrep, 0);
        account(&NULL_KEY, lk, *lc, 0, *lrep);
        for (rk, rc, rrep) in &entries {
            if lk.full && rk.full {
                continue;
            }
            account(lk, rk, lc * rc, *lrep, *rrep);
        }
    }
    Ok(SweepOutcome { depth, k, trees, violations, first_violation })
}

/// Counts the bound-satisfying trees of exactly `depth` by an independent
/// class recurrence over fullness flags alone.
pub fn count_bounded_trees(depth: usize, k: usize) -> u128 {
    if depth == 0 || k == 0 || k > 7 {
        return 0;
    }
    // flags bit j = subtree has all 2^j nodes at relative depth j
    let top = 1u8 << (k - 1);
    let mut classes: BTreeMap<u8, u128> = BTreeMap::new();
    classes.insert(1, 1);
    for _ in 0..depth - 1 {
        let mut next: BTreeMap<u8, u128> = BTreeMap::new();
        let total: u128 = classes.values().sum();
        *next.entry(1).or_insert(0) += 2 * total;
        for (&fl, &cl) in &classes {
            for (&fr, &cr) in &classes {
                if fl & fr & top != 0 {
                    continue;
                }
                let nf = (((fl & fr) << 1) | 1) & ((1u8 << k) - 1).max(1);
                *next.entry(nf).or_insert(0) += cl * cr;
            }
        }
        classes = next;
    }
    let total: u128 = classes.values().sum();
    let mut count = 2 * total;
    for (&fl, &cl) in &classes {
        for (&fr, &cr) in &classes {
            if fl & fr & top == 0 {
                count += cl * cr;
            }
        }
    }
    count
}
