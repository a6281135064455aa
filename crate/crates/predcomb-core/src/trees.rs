//! Prefix trees, window traces, the halving predictor for trees with
//! bounded window branching, coverability, and block-map evasion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oracles::EnumBudget;
use crate::word::{Predictor, Symbol, SymbolSource, UltWord, Word};

/// A finite prefix-closed tree whose maximal nodes all sit at one depth.
/// Stored by its maximal words; every prefix of a stored word is a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTree {
    n: usize,
    depth: usize,
    leaves: BTreeSet<Word>,
}

impl PrefixTree {
    /// Builds the tree of initial segments of the given words, which must
    /// be nonempty and share one length and alphabet.
    pub fn from_words(words: &[Word]) -> Result<Self> {
        let first = words.first().ok_or(Error::Parse {
            what: "prefix tree",
            detail: "no words given".to_string(),
        })?;
        let (n, depth) = (first.alphabet_size(), first.len());
        let mut leaves = BTreeSet::new();
        for w in words {
            if w.alphabet_size() != n {
                return Err(Error::AlphabetMismatch { left: w.alphabet_size(), right: n });
            }
            if w.len() != depth {
                return Err(Error::HorizonTooSmall { needed: depth, available: w.len() });
            }
            leaves.insert(w.clone());
        }
        Ok(PrefixTree { n, depth, leaves })
    }

    /// The full n-ary tree of the given depth.
    pub fn full(n: usize, depth: usize) -> Result<Self> {
        let count = (n as u64).checked_pow(depth as u32).ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            allowed: u64::MAX,
        })?;
        let words: Vec<Word> = (0..count).map(|r| Word::from_rank(n, depth, r)).collect();
        PrefixTree::from_words(&words)
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Word> {
        self.leaves.iter()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        if w.len() > self.depth || w.alphabet_size() != self.n {
            return false;
        }
        // leaves sort after their prefixes, so the first leaf ≥ w extends
        // w exactly when any leaf does
        self.leaves.range(w.clone()..).next().is_some_and(|leaf| leaf.starts_with(w))
    }

    /// All nodes in (length, lexicographic) order.
    pub fn nodes(&self) -> Vec<Word> {
        let mut set = BTreeSet::new();
        for leaf in &self.leaves {
            for len in 0..=self.depth {
                set.insert(leaf.prefix(len));
            }
        }
        let mut nodes: Vec<Word> = set.into_iter().collect();
        nodes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        nodes
    }

    /// Number of distinct length-`d` prefixes among leaves extending `w`.
    pub fn extension_count(&self, w: &Word, d: usize) -> usize {
        let mut count = 0;
        let mut last: Option<Word> = None;
        for leaf in self.leaves.range(w.clone()..) {
            if !leaf.starts_with(w) {
                break;
            }
            let p = leaf.prefix(d);
            if last.as_ref() != Some(&p) {
                count += 1;
                last = Some(p);
            }
        }
        count
    }
}

/// The distinct restrictions of depth-`(|σ|+k)` nodes above `σ` to the
/// window `[|σ|, |σ|+k)`.
pub fn window_traces(tree: &PrefixTree, sigma: &Word, k: usize) -> Result<BTreeSet<Word>> {
    if sigma.len() + k > tree.depth {
        return Err(Error::HorizonTooSmall { needed: sigma.len() + k, available: tree.depth });
    }
    if !tree.contains(sigma) {
        return Err(Error::NodeAbsent { node: sigma.clone() });
    }
    let mut traces = BTreeSet::new();
    for leaf in tree.leaves.range(sigma.clone()..) {
        if !leaf.starts_with(sigma) {
            break;
        }
        traces.insert(leaf.block(sigma.len(), k));
    }
    Ok(traces)
}

/// The halving decision at one node: smallest level whose extension count
/// is below `2^level`, then the child with the most extensions at that
/// level (least symbol on ties).  Nodes past the depth, off the tree, or
/// with no admissible level answer 0; such prefixes are never consulted
/// inside a violated window.
pub(crate) fn halving_value(tree: &PrefixTree, sigma: &Word, k: usize) -> Symbol {
    if sigma.len() >= tree.depth || !tree.contains(sigma) {
        return 0;
    }
    let hi = k.min(tree.depth - sigma.len());
    for level in 1..=hi {
        let count = tree.extension_count(sigma, sigma.len() + level);
        if count < 1usize << level {
            let mut chosen = 0u8;
            let mut best = 0usize;
            for s in 0..tree.n as u8 {
                let c = tree.extension_count(&sigma.child(s), sigma.len() + level);
                if c > best {
                    best = c;
                    chosen = s;
                }
            }
            return chosen;
        }
    }
    0
}

/// Builds a predictor scoring a hit on every branch of the tree inside
/// every window `[a, a+k) ⊆ [0, depth)`.  Requires every node with a full
/// window below it to have fewer than `2^k` traces there; the first node
/// violating that (in length-then-lexicographic order) is reported.
pub fn build_window_predictor(tree: &PrefixTree, k: usize) -> Result<Predictor> {
    if k == 0 {
        return Err(Error::HorizonTooSmall { needed: 1, available: 0 });
    }
    for node in tree.nodes() {
        if node.len() + k <= tree.depth
            && tree.extension_count(&node, node.len() + k) >= 1usize << k
        {
            return Err(Error::WindowOverflow { node });
        }
    }
    let tree = tree.clone();
    let n = tree.n;
    Predictor::from_rule(n, move |w| {
        let sigma = Word::new(n, w.to_vec()).expect("caller symbols in range");
        halving_value(&tree, &sigma, k)
    })
}

/// A prefix tree with marked levels and a declared branching bound per
/// gap: each node at level `marks[j]` must have exactly `bounds[j]`
/// extensions at level `marks[j+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTree {
    pub tree: PrefixTree,
    pub marks: Vec<usize>,
    pub bounds: Vec<usize>,
}

impl BlockTree {
    pub fn new(tree: PrefixTree, marks: Vec<usize>, bounds: Vec<usize>) -> Result<Self> {
        if marks.is_empty()
            || bounds.len() + 1 != marks.len()
            || marks.windows(2).any(|p| p[0] >= p[1])
            || *marks.last().unwrap() > tree.depth()
        {
            return Err(Error::Parse {
                what: "block tree",
                detail: "marks must be strictly increasing within the depth".to_string(),
            });
        }
        let bt = BlockTree { tree, marks, bounds };
        bt.check_branching()?;
        Ok(bt)
    }

    /// Verifies the declared per-gap branching counts.
    pub fn check_branching(&self) -> Result<()> {
        for j in 0..self.bounds.len() {
            for node in self.tree.nodes() {
                if node.len() == self.marks[j]
                    && self.tree.extension_count(&node, self.marks[j + 1]) != self.bounds[j]
                {
                    return Err(Error::VerificationFailed {
                        detail: alloc::format!(
                            "node {node} has {} extensions at level {}, declared {}",
                            self.tree.extension_count(&node, self.marks[j + 1]),
                            self.marks[j + 1],
                            self.bounds[j]
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Why a set is or is not coverable by a single predictor.
#[derive(Debug, Clone)]
pub enum CoverWitness {
    /// A predictor hitting every word in every window.
    Predictor(Predictor),
    /// A node carrying all `2^k` window traces.
    FullNode(Word),
    /// The brute-force search exhausted every decision fragment.
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub coverable: bool,
    pub witness: CoverWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Binary only: coverable iff no node has a full trace set.
    Exact,
    /// Any alphabet: backtracking over decision fragments on the tree.
    Brute,
}

/// Can one predictor score a hit on every word of `words` in every window
/// `[a, a+k) ⊆ [0, L)`?
pub fn is_coverable(
    words: &[Word],
    k: usize,
    mode: CoverMode,
    budget: &EnumBudget,
) -> Result<CoverReport> {
    let tree = PrefixTree::from_words(words)?;
    match mode {
        CoverMode::Exact => {
            if tree.n != 2 {
                return Err(Error::AlphabetMismatch { left: tree.n, right: 2 });
            }
            match build_window_predictor(&tree, k) {
                Ok(pi) => Ok(CoverReport { coverable: true, witness: CoverWitness::Predictor(pi) }),
                Err(Error::WindowOverflow { node }) => {
                    Ok(CoverReport { coverable: false, witness: CoverWitness::FullNode(node) })
                }
                Err(e) => Err(e),
            }
        }
        CoverMode::Brute => {
            let states = (tree.n as u128 * tree.n as u128).pow(tree.depth as u32);
            budget.admit(states)?;
            let mut assignment: Vec<(Word, Symbol)> = Vec::new();
            let found = fragment_search(&tree, k, &Word::empty(tree.n), 0, &mut assignment);
            if found {
                let depth = tree.depth;
                let map: BTreeMap<Word, Symbol> = assignment.into_iter().collect();
                let pi = Predictor::table_from_fn(tree.n, depth, |w| {
                    map.get(w).copied().unwrap_or(0)
                })?;
                Ok(CoverReport { coverable: true, witness: CoverWitness::Predictor(pi) })
            } else {
                Ok(CoverReport { coverable: false, witness: CoverWitness::Exhausted })
            }
        }
    }
}

/// Backtracking over predictor values on tree nodes.  A branch fails as
/// soon as it accumulates `k` consecutive misses, which is exactly a
/// violated window; every fragment is explored up to that pruning.
fn fragment_search(
    tree: &PrefixTree,
    k: usize,
    sigma: &Word,
    streak: usize,
    assignment: &mut Vec<(Word, Symbol)>,
) -> bool {
    if sigma.len() == tree.depth {
        return true;
    }
    let children: Vec<Symbol> =
        (0..tree.n as u8).filter(|&s| tree.contains(&sigma.child(s))).collect();
    'values: for v in 0..tree.n as u8 {
        let checkpoint = assignment.len();
        for &c in &children {
            let next_streak = if c == v { 0 } else { streak + 1 };
            if next_streak >= k || !fragment_search(tree, k, &sigma.child(c), next_streak, assignment)
            {
                assignment.truncate(checkpoint);
                continue 'values;
            }
        }
        assignment.push((sigma.clone(), v));
        return true;
    }
    false
}

/// Largest number of distinct length-`k` traces one predictor can fully
/// hit inside the single window `[0, k)`, by exhaustive search over trace
/// sets and decision fragments.
pub fn max_coverable_size(n: usize, k: usize, budget: &EnumBudget) -> Result<usize> {
    let trace_count = (n as u128).checked_pow(k as u32).ok_or(Error::BudgetExceeded {
        required: u128::MAX,
        allowed: budget.max_items,
    })?;
    if trace_count > 20 {
        return Err(Error::BudgetExceeded { required: 1 << trace_count, allowed: budget.max_items });
    }
    budget.admit(1u128 << trace_count)?;
    let traces: Vec<Word> =
        (0..trace_count as u64).map(|r| Word::from_rank(n, k, r)).collect();
    let mut best = 0;
    for mask in 1u64..(1 << trace_count) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let subset: Vec<Word> = traces
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, w)| w.clone())
            .collect();
        if is_coverable(&subset, k, CoverMode::Brute, budget)?.coverable {
            best = size;
        }
    }
    Ok(best)
}

/// The unique continuation a binary predictor gets entirely wrong on the
/// window `[|σ|, |σ|+k)`, built left to right.
pub fn evade_in_window(pi: &Predictor, sigma: &Word, k: usize) -> Result<Word> {
    if pi.alphabet_size() != 2 || sigma.alphabet_size() != 2 {
        return Err(Error::AlphabetMismatch {
            left: pi.alphabet_size().max(sigma.alphabet_size()),
            right: 2,
        });
    }
    let mut buf = sigma.symbols().to_vec();
    for _ in 0..k {
        let guess = pi.predict(&buf);
        buf.push(1 - guess);
    }
    Word::new(2, buf[sigma.len()..].to_vec())
}

/// A total map from block-aligned binary words to length-`k` blocks.
#[derive(Debug, Clone)]
pub struct BlockMap {
    k: usize,
    kind: BlockMapKind,
}

#[derive(Debug, Clone)]
enum BlockMapKind {
    /// `φ(σ)` is the all-miss continuation of `σ` under the predictor.
    Evader(Predictor),
    /// Finite table with a default for unlisted inputs.
    Table { entries: BTreeMap<Word, Word>, default: Word },
}

impl BlockMap {
    /// The map `φ` whose fixed blocks defeat `pi`: a word agreeing with
    /// `φ(g↾ik)` on block `i` is missed by `pi` throughout that block.
    pub fn from_predictor(pi: Predictor, k: usize) -> Result<Self> {
        if pi.alphabet_size() != 2 {
            return Err(Error::AlphabetMismatch { left: pi.alphabet_size(), right: 2 });
        }
        Ok(BlockMap { k, kind: BlockMapKind::Evader(pi) })
    }

    pub fn from_table(k: usize, entries: BTreeMap<Word, Word>, default: Word) -> Result<Self> {
        if default.len() != k {
            return Err(Error::HorizonTooSmall { needed: k, available: default.len() });
        }
        for (sigma, v) in &entries {
            if sigma.len() % k != 0 || v.len() != k {
                return Err(Error::PhaseMismatch { len: sigma.len(), k, j: 0 });
            }
        }
        Ok(BlockMap { k, kind: BlockMapKind::Table { entries, default } })
    }

    pub fn constant(k: usize, value: Word) -> Result<Self> {
        BlockMap::from_table(k, BTreeMap::new(), value)
    }

    pub fn block_len(&self) -> usize {
        self.k
    }

    pub fn apply(&self, sigma: &Word) -> Result<Word> {
        if !sigma.len().is_multiple_of(self.k) {
            return Err(Error::PhaseMismatch { len: sigma.len(), k: self.k, j: 0 });
        }
        match &self.kind {
            BlockMapKind::Evader(pi) => evade_in_window(pi, sigma, self.k),
            BlockMapKind::Table { entries, default } => {
                Ok(entries.get(sigma).cloned().unwrap_or_else(|| default.clone()))
            }
        }
    }
}

/// `φ` as a map value for every block-aligned prefix.
pub fn phi_from_predictor(pi: &Predictor, k: usize) -> Result<BlockMap> {
    BlockMap::from_predictor(pi.clone(), k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarOutcome {
    pub map_index: usize,
    /// Member reaching the threshold, if any.
    pub witness: Option<usize>,
    /// Best (member, match count) seen.
    pub best_member: usize,
    pub best_matches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub outcomes: Vec<StarOutcome>,
    pub all_satisfied: bool,
}

/// Finite surrogate of the (⋆) property: for each block map, some member
/// of the family must match its guessed block at least `threshold` times
/// among the blocks below the horizon.
pub fn check_star(
    family: &[UltWord],
    maps: &[BlockMap],
    k: usize,
    h: usize,
    threshold: usize,
) -> Result<StarReport> {
    if threshold * k > h || k == 0 {
        return Err(Error::HorizonTooSmall { needed: threshold * k.max(1), available: h });
    }
    for g in family {
        if g.alphabet_size() != 2 {
            return Err(Error::AlphabetMismatch { left: g.alphabet_size(), right: 2 });
        }
    }
    let mut outcomes = Vec::with_capacity(maps.len());
    let mut all = true;
    for (map_index, psi) in maps.iter().enumerate() {
        let mut best_member = 0;
        let mut best_matches = 0;
        let mut witness = None;
        for (gi, g) in family.iter().enumerate() {
            let mut matches = 0;
            for block in 0..h / k {
                if psi.apply(&g.prefix(block * k))? == g.block(block * k, k) {
                    matches += 1;
                }
            }
            if matches > best_matches {
                best_matches = matches;
                best_member = gi;
            }
            if matches >= threshold {
                witness = Some(gi);
                break;
            }
        }
        all &= witness.is_some();
        outcomes.push(StarOutcome { map_index, witness, best_member, best_matches });
    }
    Ok(StarReport { outcomes, all_satisfied: all })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checking::check_constant;
    use alloc::vec;

    fn words(n: usize, items: &[&str]) -> Vec<Word> {
        items.iter().map(|s| Word::parse(n, s).unwrap()).collect()
    }

    #[test]
    fn traces_on_small_trees() {
        let full = PrefixTree::full(2, 3).unwrap();
        let t = window_traces(&full, &Word::parse(2, "0").unwrap(), 2).unwrap();
        assert_eq!(t.len(), 4);

        let tree = PrefixTree::from_words(&words(2, &["00", "01", "10"])).unwrap();
        let t = window_traces(&tree, &Word::empty(2), 2).unwrap();
        assert_eq!(t, words(2, &["00", "01", "10"]).into_iter().collect());

        let chain = PrefixTree::from_words(&words(2, &["0110"])).unwrap();
        for len in 0..3 {
            let sigma = Word::parse(2, &"0110"[..len]).unwrap();
            assert_eq!(window_traces(&chain, &sigma, 2).unwrap().len(), 1);
        }
        assert!(matches!(
            window_traces(&chain, &Word::parse(2, "1").unwrap(), 2),
            Err(Error::NodeAbsent { .. })
        ));
    }

    #[test]
    fn window_predictor_three_leaf_example() {
        let tree = PrefixTree::from_words(&words(2, &["00", "01", "10"])).unwrap();
        let pi = build_window_predictor(&tree, 2).unwrap();
        assert_eq!(pi.predict(&[]), 0);
        assert_eq!(pi.predict(&[1]), 0);
        for leaf in tree.leaves() {
            assert!(check_constant(&pi, leaf, 2, 0, 2).unwrap().verdict);
        }
    }

    #[test]
    fn window_predictor_full_tree_overflows() {
        let tree = PrefixTree::full(2, 2).unwrap();
        match build_window_predictor(&tree, 2) {
            Err(Error::WindowOverflow { node }) => assert_eq!(node, Word::empty(2)),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn window_predictor_ternary_sufficient_condition() {
        // for n ≥ 3 the trace bound < 2^k is sufficient (not necessary)
        let tree = PrefixTree::from_words(&words(3, &["0012", "2101", "2110"])).unwrap();
        let pi = build_window_predictor(&tree, 2).unwrap();
        for leaf in tree.leaves() {
            assert!(check_constant(&pi, leaf, 2, 0, 4).unwrap().verdict, "{leaf}");
        }
    }

    #[test]
    fn window_predictor_chain_copies_branch() {
        let tree = PrefixTree::from_words(&words(2, &["0110"])).unwrap();
        let pi = build_window_predictor(&tree, 1).unwrap();
        let leaf = Word::parse(2, "0110").unwrap();
        for i in 0..4 {
            assert_eq!(pi.predict(leaf.prefix(i).symbols()), leaf.at(i));
        }
    }

    #[test]
    fn block_tree_predictor_covers_all_branches() {
        // marks spaced past the window, branching 2^(k-1) per gap with
        // splits right after each mark: the trace bound holds and the
        // halving predictor covers every branch in every window
        let mut rng = crate::sampling::Rng::new(23);
        let k = 2;
        for _ in 0..20 {
            let mut leaves = vec![Word::empty(2)];
            let marks = vec![0usize, 3, 6];
            for _ in 0..2 {
                let mut next = Vec::new();
                for leaf in &leaves {
                    for s in 0..2u8 {
                        let mut word = leaf.child(s);
                        for _ in 0..2 {
                            word = word.child(rng.symbol(2));
                        }
                        next.push(word);
                    }
                }
                leaves = next;
            }
            let tree = PrefixTree::from_words(&leaves).unwrap();
            let bt = BlockTree::new(tree, marks, vec![2, 2]).unwrap();
            let pi = build_window_predictor(&bt.tree, k).unwrap();
            for leaf in bt.tree.leaves() {
                assert!(check_constant(&pi, leaf, k, 0, 6).unwrap().verdict, "{leaf}");
            }
        }
    }

    #[test]
    fn block_tree_branching_validation() {
        let tree = PrefixTree::from_words(&words(2, &["0000", "0110", "1010", "1100"])).unwrap();
        // the root has all 4 extensions at level 2; every level-2 node
        // continues along exactly one branch to level 4
        let bt = BlockTree::new(tree.clone(), vec![0, 2, 4], vec![4, 1]).unwrap();
        assert_eq!(bt.bounds, vec![4, 1]);
        assert!(BlockTree::new(tree, vec![0, 2, 4], vec![4, 2]).is_err());
    }

    #[test]
    fn coverability_examples() {
        let budget = EnumBudget::default();
        // any 3-element subset of 2^2 is coverable
        for drop in 0..4u64 {
            let subset: Vec<Word> = (0..4u64)
                .filter(|&r| r != drop)
                .map(|r| Word::from_rank(2, 2, r))
                .collect();
            let r = is_coverable(&subset, 2, CoverMode::Exact, &budget).unwrap();
            assert!(r.coverable);
        }
        // all of 2^2 is not
        let all: Vec<Word> = (0..4u64).map(|r| Word::from_rank(2, 2, r)).collect();
        let r = is_coverable(&all, 2, CoverMode::Exact, &budget).unwrap();
        assert!(!r.coverable);
        match r.witness {
            CoverWitness::FullNode(node) => assert_eq!(node, Word::empty(2)),
            other => panic!("expected full node, got {other:?}"),
        }
        // ternary brute force: a coverable 5-element window set exists
        assert_eq!(max_coverable_size(3, 2, &budget).unwrap(), 5);
    }

    #[test]
    fn max_coverable_binary_values() {
        let budget = EnumBudget::default();
        assert_eq!(max_coverable_size(2, 1, &budget).unwrap(), 1);
        assert_eq!(max_coverable_size(2, 2, &budget).unwrap(), 3);
        assert_eq!(max_coverable_size(2, 3, &budget).unwrap(), 7);
    }

    #[test]
    fn evasion_window_examples() {
        let zero = Predictor::constant(2, 0).unwrap();
        assert_eq!(
            evade_in_window(&zero, &Word::parse(2, "01").unwrap(), 2).unwrap(),
            Word::parse(2, "11").unwrap()
        );
        let copy_last = Predictor::finite_memory(2, 1, 1, vec![0, 1]).unwrap();
        assert_eq!(
            evade_in_window(&copy_last, &Word::empty(2), 2).unwrap(),
            Word::parse(2, "10").unwrap()
        );
    }

    #[test]
    fn evasion_uniqueness_small_exhaustive() {
        // for every depth-3 table predictor and every σ of length ≤ 2,
        // exactly one τ ∈ 2^k is missed throughout the window
        for k in 1..=2usize {
            for idx in 0..128u64 {
                let pi = Predictor::table_from_index(2, 3, idx).unwrap();
                for slen in 0..=2usize {
                    for sr in 0..(1u64 << slen) {
                        let sigma = Word::from_rank(2, slen, sr);
                        let mut all_miss = Vec::new();
                        for tr in 0..(1u64 << k) {
                            let tau = Word::from_rank(2, k, tr);
                            let word = sigma.concat(&tau);
                            let miss = (0..k).all(|i| {
                                pi.predict(word.prefix(sigma.len() + i).symbols())
                                    != word.at(sigma.len() + i)
                            });
                            if miss {
                                all_miss.push(tau);
                            }
                        }
                        assert_eq!(all_miss.len(), 1);
                        assert_eq!(all_miss[0], evade_in_window(&pi, &sigma, k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn phi_matches_round_robin() {
        let mut rng = crate::sampling::Rng::new(11);
        for _ in 0..20 {
            let pi = rng.table_predictor(2, 5);
            let k = 2;
            let h = 12;
            let x = crate::checking::round_robin_evader(core::slice::from_ref(&pi), k, h).unwrap();
            let phi = phi_from_predictor(&pi, k).unwrap();
            for block in 0..h / k {
                assert_eq!(
                    phi.apply(&x.prefix(block * k)).unwrap(),
                    x.block(block * k, k)
                );
            }
        }
    }

    #[test]
    fn star_examples() {
        let zero = Predictor::constant(2, 0).unwrap();
        let k = 2;
        let h = 12;
        let x = crate::checking::round_robin_evader(core::slice::from_ref(&zero), k, h).unwrap();
        let g = UltWord::periodic(x).unwrap();
        let phi = phi_from_predictor(&zero, k).unwrap();
        let r = check_star(core::slice::from_ref(&g), core::slice::from_ref(&phi), k, h, h / k).unwrap();
        assert!(r.all_satisfied);
        assert_eq!(r.outcomes[0].witness, Some(0));

        // ψ ≡ 00 never matches the all-ones word
        let zz = BlockMap::constant(2, Word::parse(2, "00").unwrap()).unwrap();
        let ones = UltWord::constant(2, 1).unwrap();
        let r = check_star(&[ones], &[zz], 2, 12, 1).unwrap();
        assert!(!r.all_satisfied);
        assert_eq!(r.outcomes[0].best_matches, 0);

        // empty map set is vacuous success
        let r = check_star(&[], &[], 2, 12, 1).unwrap();
        assert!(r.all_satisfied);
    }
}
