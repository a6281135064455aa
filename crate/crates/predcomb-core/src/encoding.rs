//! Reduction of n-ary k-constant prediction to binary weak prediction.
//!
//! A word `y` over `n` symbols is encoded, per encoder family `ḡ` and
//! offset `j < k`, as the binary word `y^{ḡ,j}(mk+i) = g_i(y↾[mk+j,
//! (m+1)k+j))`.  Given one binary predictor per `(ḡ, j)`, the extension
//! sets `A_σ^i` track which continuations of `σ` stay predicted across
//! every encoder, and the halving predictor ψ always guesses toward the
//! largest surviving set.  If every encoding is weakly predicted, ψ
//! k-constantly predicts `y`: every miss at least halves a set that
//! started below `2^k`, so `k` misses in a row are impossible.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::checking::HitReport;
use crate::error::{Error, Result};
use crate::oracles::EnumBudget;
use crate::word::{Predictor, Symbol, SymbolSource, UltWord, Word};

/// Hard ceiling on any internal enumeration of the encoder space or of
/// value assignments on its support.
pub(crate) const G_ENUM_CAP: u64 = 1 << 22;

/// An encoder family `ḡ = ⟨g_i : i < k⟩`, each `g_i` a total map from
/// length-k words over `n` symbols to bits.  Tables are stored one bit per
/// input, indexed by the input's lexicographic rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFamily {
    n: usize,
    k: usize,
    tables: Vec<u64>,
}

/// Number of encoder families for the given parameters, `(2^{n^k})^k`.
pub fn g_space_size(n: usize, k: usize) -> u128 {
    let inputs = (n as u128).checked_pow(k as u32);
    match inputs {
        Some(inp) if inp.checked_mul(k as u128).is_some_and(|bits| bits < 128) => {
            1u128 << (inp * k as u128)
        }
        _ => u128::MAX,
    }
}

impl GFamily {
    /// The family at position `index` in the lexicographic enumeration by
    /// concatenated truth tables of `g_0, …, g_{k−1}` (inputs in
    /// lexicographic order, most significant first).
    pub fn from_index(n: usize, k: usize, index: u64) -> Result<Self> {
        let count = g_space_size(n, k);
        if count > u64::MAX as u128 {
            return Err(Error::BudgetExceeded { required: count, allowed: u64::MAX });
        }
        if index as u128 >= count {
            return Err(Error::Parse { what: "encoder index", detail: index.to_string() });
        }
        let inputs = (n as u64).pow(k as u32);
        let bits = k as u64 * inputs;
        let mut tables = Vec::with_capacity(k);
        for i in 0..k as u64 {
            let mut t = 0u64;
            for r in 0..inputs {
                let pos = bits - 1 - (i * inputs + r);
                if (index >> pos) & 1 == 1 {
                    t |= 1 << r;
                }
            }
            tables.push(t);
        }
        Ok(GFamily { n, k, tables })
    }

    /// Builds a family from explicit values on a support set, zero
    /// elsewhere: `values[i][t]` is `g_i` on `support[t]`.
    pub fn from_support(n: usize, k: usize, support: &[Word], values: &[Vec<u8>]) -> Result<Self> {
        let inputs = (n as u128).pow(k as u32);
        if inputs > 64 {
            return Err(Error::BudgetExceeded { required: inputs, allowed: 64 });
        }
        let mut tables = alloc::vec![0u64; k];
        for (i, row) in values.iter().enumerate() {
            for (t, &v) in row.iter().enumerate() {
                if v == 1 {
                    tables[i] |= 1 << support[t].rank();
                }
            }
        }
        Ok(GFamily { n, k, tables })
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> usize {
        self.k
    }

    /// `g_i` applied to a length-k block.
    pub fn value(&self, i: usize, block: &Word) -> u8 {
        debug_assert_eq!(block.len(), self.k);
        ((self.tables[i] >> block.rank()) & 1) as u8
    }

    /// Inverse of [`GFamily::from_index`].
    pub fn index(&self) -> u64 {
        let inputs = (self.n as u64).pow(self.k as u32);
        let bits = self.k as u64 * inputs;
        let mut idx = 0u64;
        for i in 0..self.k as u64 {
            for r in 0..inputs {
                let pos = bits - 1 - (i * inputs + r);
                if (self.tables[i as usize] >> r) & 1 == 1 {
                    idx |= 1 << pos;
                }
            }
        }
        idx
    }

    /// Truth table of `g_i` as a bit string in input rank order.
    pub fn table_bits(&self, i: usize) -> Vec<u8> {
        let inputs = (self.n as u64).pow(self.k as u32);
        (0..inputs).map(|r| ((self.tables[i] >> r) & 1) as u8).collect()
    }

    pub fn from_table_bits(n: usize, k: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let inputs = (n as u128).pow(k as u32);
        if inputs > 64 {
            return Err(Error::BudgetExceeded { required: inputs, allowed: 64 });
        }
        if rows.len() != k || rows.iter().any(|r| r.len() as u128 != inputs) {
            return Err(Error::Parse {
                what: "encoder tables",
                detail: "wrong table shape".to_string(),
            });
        }
        let mut tables = alloc::vec![0u64; k];
        for (i, row) in rows.iter().enumerate() {
            for (r, &v) in row.iter().enumerate() {
                if v == 1 {
                    tables[i] |= 1 << r;
                }
            }
        }
        Ok(GFamily { n, k, tables })
    }
}

/// All `(2^{n^k})^k` encoder families in canonical order.
pub fn enum_g_families(n: usize, k: usize, budget: &EnumBudget) -> Result<Vec<GFamily>> {
    let count = g_space_size(n, k);
    budget.admit(count)?;
    (0..count as u64).map(|i| GFamily::from_index(n, k, i)).collect()
}

/// `y^{ḡ,j}`: the binary encoding of `y`, truncated to `out_len` bits.
pub fn encode_word(
    y: &impl SymbolSource,
    g: &GFamily,
    j: usize,
    out_len: usize,
) -> Result<Word> {
    let k = g.k;
    if y.alphabet_size() != g.n {
        return Err(Error::AlphabetMismatch { left: y.alphabet_size(), right: g.n });
    }
    if out_len > 0 {
        let needed = ((out_len - 1) / k + 1) * k + j;
        y.require_horizon(needed)?;
    }
    let mut bits = Vec::with_capacity(out_len);
    let mut m = 0;
    while m * k < out_len {
        let block = y.block(m * k + j, k);
        for i in 0..k {
            if m * k + i < out_len {
                bits.push(g.value(i, &block));
            }
        }
        m += 1;
    }
    Word::new(2, bits)
}

/// `σ^{ḡ,j}` for a finite prefix whose length is `m₀k + j`; the encoding
/// has length `m₀k`.
pub fn encode_prefix(sigma: &Word, g: &GFamily, j: usize) -> Result<Word> {
    let k = g.k;
    if j >= k || sigma.len() % k != j {
        return Err(Error::PhaseMismatch { len: sigma.len(), k, j });
    }
    encode_word(sigma, g, j, sigma.len() - j)
}

/// Encoding of an eventually periodic word, again eventually periodic:
/// blocks are stable once they start past the preperiod, and then repeat
/// with period `|period| / gcd(|period|, k)` blocks.
pub fn encode_ultword(y: &UltWord, g: &GFamily, j: usize) -> Result<UltWord> {
    let k = g.k;
    if y.alphabet_size() != g.n {
        return Err(Error::AlphabetMismatch { left: y.alphabet_size(), right: g.n });
    }
    let pre_len = y.preperiod().len();
    let m1 = if pre_len > j { (pre_len - j).div_ceil(k) } else { 0 };
    let block_period = y.period().len() / crate::word::gcd(y.period().len(), k);
    let pre = encode_word(y, g, j, m1 * k)?;
    let mut per_bits = Vec::with_capacity(block_period * k);
    for m in m1..m1 + block_period {
        let block = y.block(m * k + j, k);
        for i in 0..k {
            per_bits.push(g.value(i, &block));
        }
    }
    UltWord::new(pre, Word::new(2, per_bits)?)
}

type ResolverFn = dyn Fn(&GFamily, usize) -> Predictor + Send + Sync;

/// The predictor family `π̄ = ⟨π^{ḡ,j}⟩` indexed by encoder × offset.
///
/// Three forms: a single shared binary predictor (the form the reduction
/// corollary needs), a family that predicts the encodings of one fixed
/// word by position, and an arbitrary resolver.  Only the resolver form
/// forces full enumeration of the encoder space; the other two admit
/// support-restricted evaluation of the `∀ḡ` quantifiers.
#[derive(Clone)]
pub struct BinPredictorFamily {
    n: usize,
    k: usize,
    kind: FamilyKind,
}

#[derive(Clone)]
enum FamilyKind {
    AllEqual(Predictor),
    Tracking(UltWord),
    Resolver(Arc<ResolverFn>),
}

impl core::fmt::Debug for BinPredictorFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let kind = match &self.kind {
            FamilyKind::AllEqual(_) => "all-equal",
            FamilyKind::Tracking(_) => "tracking",
            FamilyKind::Resolver(_) => "resolver",
        };
        write!(f, "BinPredictorFamily(n={}, k={}, {kind})", self.n, self.k)
    }
}

impl BinPredictorFamily {
    /// `π^{ḡ,j} = π` for every index.
    pub fn all_equal(n: usize, k: usize, pi: Predictor) -> Result<Self> {
        if pi.alphabet_size() != 2 {
            return Err(Error::AlphabetMismatch { left: pi.alphabet_size(), right: 2 });
        }
        if n < 2 || k == 0 {
            return Err(Error::AlphabetTooSmall { alphabet: n });
        }
        Ok(BinPredictorFamily { n, k, kind: FamilyKind::AllEqual(pi) })
    }

    /// `π^{ḡ,j}(w) = y^{ḡ,j}(|w|)`: each predictor reads off the encoding
    /// of the fixed word `y` by position, so it weakly predicts that
    /// encoding at every block.
    pub fn tracking(y: UltWord, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::AlphabetTooSmall { alphabet: 0 });
        }
        let n = y.alphabet_size();
        Ok(BinPredictorFamily { n, k, kind: FamilyKind::Tracking(y) })
    }

    pub fn from_resolver(
        n: usize,
        k: usize,
        resolver: impl Fn(&GFamily, usize) -> Predictor + Send + Sync + 'static,
    ) -> Result<Self> {
        if n < 2 || k == 0 {
            return Err(Error::AlphabetTooSmall { alphabet: n });
        }
        Ok(BinPredictorFamily { n, k, kind: FamilyKind::Resolver(Arc::new(resolver)) })
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> usize {
        self.k
    }

    /// The member predictor at `(ḡ, j)`; total for every form.
    pub fn resolve(&self, g: &GFamily, j: usize) -> Predictor {
        match &self.kind {
            FamilyKind::AllEqual(pi) => pi.clone(),
            FamilyKind::Tracking(y) => {
                let y = y.clone();
                let g = g.clone();
                let k = self.k;
                Predictor::from_rule(2, move |w| {
                    let m = w.len() / k;
                    let i = w.len() % k;
                    g.value(i, &y.block(m * k + j, k))
                })
                .expect("binary alphabet")
            }
            FamilyKind::Resolver(f) => f(g, j),
        }
    }

    /// Wraps any family as a plain resolver; evaluation then goes through
    /// full encoder enumeration.  Used to cross-check the restricted
    /// evaluation strategies.
    pub fn as_resolver(&self) -> Self {
        let inner = self.clone();
        BinPredictorFamily {
            n: self.n,
            k: self.k,
            kind: FamilyKind::Resolver(Arc::new(move |g, j| inner.resolve(g, j))),
        }
    }

    fn admit_full_enumeration(&self) -> Result<u64> {
        let count = g_space_size(self.n, self.k);
        if count > G_ENUM_CAP as u128 {
            return Err(Error::BudgetExceeded { required: count, allowed: G_ENUM_CAP });
        }
        Ok(count as u64)
    }
}

/// Is `σ⌢B` in `A_σ^k`? That is: does every encoder family admit a hit of
/// `π^{ḡ,j}` on the final encoded block of `σ⌢B`?
fn member(fam: &BinPredictorFamily, sigma: &Word, b_block: &Word) -> Result<bool> {
    match &fam.kind {
        FamilyKind::AllEqual(pi) => member_all_equal(fam, pi, sigma, b_block),
        FamilyKind::Tracking(y) => Ok(member_tracking(fam, y, sigma, b_block)),
        FamilyKind::Resolver(_) => member_full(fam, sigma, b_block),
    }
}

/// Full enumeration of the encoder space.  Exact for every family form,
/// but exponential in `k · n^k`.
fn member_full(fam: &BinPredictorFamily, sigma: &Word, b_block: &Word) -> Result<bool> {
    let (n, k) = (fam.n, fam.k);
    let count = fam.admit_full_enumeration()?;
    let j = sigma.len() % k;
    let m = sigma.len() / k;
    let mut prefix: Vec<Symbol> = Vec::with_capacity((m + 1) * k);
    for g_idx in 0..count {
        let g = GFamily::from_index(n, k, g_idx)?;
        let pi = fam.resolve(&g, j);
        prefix.clear();
        for mm in 0..m {
            let block = sigma.block(mm * k + j, k);
            for i in 0..k {
                prefix.push(g.value(i, &block));
            }
        }
        let mut all_miss = true;
        for i in 0..k {
            let bit = g.value(i, b_block);
            if pi.predict(&prefix) == bit {
                all_miss = false;
                break;
            }
            prefix.push(bit);
        }
        if all_miss {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Collects the distinct blocks the membership condition reads, mapping
/// each block position of `sigma` (and the candidate block) to an index
/// into the support.
fn block_support(sigma: &Word, b_block: &Word, k: usize, j: usize) -> (Vec<Word>, Vec<usize>, usize) {
    let m = sigma.len() / k;
    let mut support: Vec<Word> = Vec::new();
    let mut pos_index = Vec::with_capacity(m);
    let index_of = |w: Word, support: &mut Vec<Word>| -> usize {
        if let Some(t) = support.iter().position(|s| *s == w) {
            t
        } else {
            support.push(w);
            support.len() - 1
        }
    };
    for mm in 0..m {
        let idx = index_of(sigma.block(mm * k + j, k), &mut support);
        pos_index.push(idx);
    }
    let b_idx = index_of(b_block.clone(), &mut support);
    (support, pos_index, b_idx)
}

/// Shared-predictor evaluation: the condition only reads `ḡ` on the blocks
/// of `σ` and on the candidate block, so it suffices to quantify over
/// value assignments on that support.  Every assignment extends to a full
/// family and every family restricts to an assignment.
fn member_all_equal(
    fam: &BinPredictorFamily,
    pi: &Predictor,
    sigma: &Word,
    b_block: &Word,
) -> Result<bool> {
    let k = fam.k;
    let j = sigma.len() % k;
    let m = sigma.len() / k;
    let (support, pos_index, b_idx) = block_support(sigma, b_block, k, j);
    let d = support.len();
    let bits = (k * d) as u32;
    if bits >= 63 || (1u64 << bits) > G_ENUM_CAP {
        return member_full(fam, sigma, b_block);
    }
    let mut prefix: Vec<Symbol> = Vec::with_capacity((m + 1) * k);
    for assign in 0..(1u64 << bits) {
        let val = |i: usize, t: usize| ((assign >> (i * d + t)) & 1) as Symbol;
        prefix.clear();
        for &t in &pos_index {
            for i in 0..k {
                prefix.push(val(i, t));
            }
        }
        let mut all_miss = true;
        for i in 0..k {
            let bit = val(i, b_idx);
            if pi.predict(&prefix) == bit {
                all_miss = false;
                break;
            }
            prefix.push(bit);
        }
        if all_miss {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tracking-family evaluation: the predictor's answer at length `mk+i` is
/// `g_i` on the tracked word's current block, so the condition reads `ḡ`
/// on at most two blocks.
fn member_tracking(fam: &BinPredictorFamily, y: &UltWord, sigma: &Word, b_block: &Word) -> bool {
    let k = fam.k;
    let j = sigma.len() % k;
    let m = sigma.len() / k;
    let tracked = y.block(m * k + j, k);
    if tracked == *b_block {
        return true;
    }
    // two distinct support blocks: indices 0 = candidate, 1 = tracked
    let d = 2;
    for assign in 0..(1u64 << (k * d)) {
        let val = |i: usize, t: usize| ((assign >> (i * d + t)) & 1) as Symbol;
        let all_miss = (0..k).all(|i| val(i, 0) != val(i, 1));
        if all_miss {
            return false;
        }
    }
    true
}

/// The level-k extension set of `base`: all `base⌢B` that stay predicted
/// across every encoder.  Errors with [`Error::ClaimViolated`] if the
/// result ever reaches size `2^k`; that bound is a theorem, so a
/// violation is a build-stopping defect.
fn level_k_set(fam: &BinPredictorFamily, base: &Word) -> Result<Vec<Word>> {
    let (n, k) = (fam.n, fam.k);
    let mut members = Vec::new();
    let count = (n as u64).pow(k as u32);
    for r in 0..count {
        let block = Word::from_rank(n, k, r);
        if member(fam, base, &block)? {
            members.push(base.concat(&block));
        }
    }
    if members.len() >= 1usize << k {
        return Err(Error::ClaimViolated { sigma: base.clone(), family_index: 0 });
    }
    Ok(members)
}

/// The extension set `A_σ^level`: length-`(|σ|+level)` extensions of `σ`
/// inside the level-k set of the truncated base `σ↾(|σ|−k+level)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASet {
    pub base: Word,
    pub level: usize,
    pub members: BTreeSet<Word>,
}

pub fn a_set(sigma: &Word, fam: &BinPredictorFamily, level: usize) -> Result<ASet> {
    let k = fam.k;
    if sigma.alphabet_size() != fam.n {
        return Err(Error::AlphabetMismatch { left: sigma.alphabet_size(), right: fam.n });
    }
    if level > k || sigma.len() + level < k {
        return Err(Error::LevelUndefined { sigma_len: sigma.len(), k, level });
    }
    let base = sigma.prefix(sigma.len() + level - k);
    let members = level_k_set(fam, &base)?
        .into_iter()
        .filter(|t| t.starts_with(sigma))
        .collect();
    Ok(ASet { base: sigma.clone(), level, members })
}

/// One ψ decision, with the counts that drove it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiDecision {
    /// Minimal level `i` with `|A_σ^i| < 2^i` (within defined levels).
    pub level: usize,
    /// `|A_σ^level|`.
    pub level_size: usize,
    /// `|A_{σ⌢ℓ}^{level−1}|` per symbol `ℓ`; empty when `level = 0`.
    pub child_sizes: Vec<usize>,
    pub chosen: Symbol,
}

/// Evaluates ψ at one prefix and reports the sets it consulted.
pub fn psi_explain(fam: &BinPredictorFamily, sigma: &Word) -> Result<PsiDecision> {
    let (n, k) = (fam.n, fam.k);
    if sigma.alphabet_size() != n {
        return Err(Error::AlphabetMismatch { left: sigma.alphabet_size(), right: n });
    }
    let lo = k.saturating_sub(sigma.len());
    for level in lo..=k {
        let base = sigma.prefix(sigma.len() + level - k);
        let set = level_k_set(fam, &base)?;
        let size = set.iter().filter(|t| t.starts_with(sigma)).count();
        if size < 1usize << level {
            if level == 0 {
                return Ok(PsiDecision { level, level_size: size, child_sizes: Vec::new(), chosen: 0 });
            }
            let mut child_sizes = Vec::with_capacity(n);
            let mut chosen = 0u8;
            let mut best = 0usize;
            for l in 0..n as u8 {
                let child = sigma.child(l);
                let c = set.iter().filter(|t| t.starts_with(&child)).count();
                if child_sizes.is_empty() || c > best {
                    best = c;
                    chosen = l;
                }
                child_sizes.push(c);
            }
            return Ok(PsiDecision { level, level_size: size, child_sizes, chosen });
        }
    }
    unreachable!("level k always satisfies the halving bound")
}

/// The halving predictor for the family, as a total rule predictor over
/// the source alphabet.
pub fn psi(fam: &BinPredictorFamily) -> Result<Predictor> {
    if matches!(fam.kind, FamilyKind::Resolver(_)) {
        fam.admit_full_enumeration()?;
    }
    let fam = fam.clone();
    let n = fam.n;
    Predictor::from_rule(n, move |w| {
        let sigma = Word::new(n, w.to_vec()).expect("caller symbols in range");
        psi_explain(&fam, &sigma)
            .expect("halving bound holds and enumeration was admitted")
            .chosen
    })
}

/// ψ frozen as a table predictor of the requested depth.
pub fn psi_table(fam: &BinPredictorFamily, depth: usize, budget: &EnumBudget) -> Result<Predictor> {
    budget.admit(crate::word::words_below(fam.n, depth))?;
    let rule = psi(fam)?;
    rule.to_table(depth)
}

/// Checks the reduction end to end on one word.
///
/// Hypothesis: for every `(ḡ, j)` and every block `m ≥ m0` with
/// `(m+1)k + j + k ≤ h`, the member predictor hits the encoding of `y`
/// inside block `m`.  A failure is reported as an error naming the
/// violating index, which distinguishes a vacuous run from a theorem
/// violation.
///
/// Conclusion: every window `[a, a+k)` with `(m0+1)k ≤ a` and
/// `a + k ≤ h − k` contains a ψ-hit on `y`; the final `k` positions are
/// slack, since encodings of `y↾h` only settle ψ that far.
pub fn verify_main_theorem(
    y: &UltWord,
    fam: &BinPredictorFamily,
    m0: usize,
    h: usize,
) -> Result<HitReport> {
    let (n, k) = (fam.n, fam.k);
    if y.alphabet_size() != n {
        return Err(Error::AlphabetMismatch { left: y.alphabet_size(), right: n });
    }
    for j in 0..k {
        let mut m = m0;
        while (m + 1) * k + j + k <= h {
            check_hypothesis_block(fam, y, j, m)?;
            m += 1;
        }
    }

    let start = (m0 + 1) * k;
    let mut hits = Vec::new();
    let mut i = start;
    while i < h.saturating_sub(k) {
        let d = psi_explain(fam, &y.prefix(i))?;
        hits.push(d.chosen == y.at(i));
        i += 1;
    }
    let mut witness = None;
    let mut a = start;
    while a + k <= h.saturating_sub(k) {
        if !hits[a - start..a + k - start].iter().any(|&b| b) {
            witness = Some(a);
            break;
        }
        a += 1;
    }
    Ok(HitReport { verdict: witness.is_none(), witness, checked_horizon: h, out_of_depth: false })
}

/// Does every encoder family admit a hit on block `m` of `y^{ḡ,j}`?
fn check_hypothesis_block(
    fam: &BinPredictorFamily,
    y: &UltWord,
    j: usize,
    m: usize,
) -> Result<()> {
    match &fam.kind {
        FamilyKind::AllEqual(pi) => hypothesis_all_equal(fam, pi, y, j, m),
        FamilyKind::Tracking(tracked) => {
            // the answer at position mk+i is g_i on the tracked block
            let k = fam.k;
            let checked = y.block(m * k + j, k);
            let target = tracked.block(m * k + j, k);
            if checked == target {
                return Ok(());
            }
            // support blocks: 0 = checked word's block, 1 = tracked block
            for assign in 0..(1u64 << (2 * k)) {
                let val = |i: usize, t: usize| ((assign >> (i * 2 + t)) & 1) as Symbol;
                if (0..k).all(|i| val(i, 0) != val(i, 1)) {
                    let g = witness_family(fam, &[checked, target], assign, 2)?;
                    return Err(Error::HypothesisFails { g_index: g.index(), j, block: m });
                }
            }
            Ok(())
        }
        FamilyKind::Resolver(_) => hypothesis_full(fam, y, j, m),
    }
}

fn hypothesis_full(fam: &BinPredictorFamily, y: &UltWord, j: usize, m: usize) -> Result<()> {
    let (n, k) = (fam.n, fam.k);
    let count = fam.admit_full_enumeration()?;
    for g_idx in 0..count {
        let g = GFamily::from_index(n, k, g_idx)?;
        let pi = fam.resolve(&g, j);
        let mut prefix = encode_word(y, &g, j, m * k)?.symbols().to_vec();
        let block = y.block(m * k + j, k);
        let mut hit = false;
        for i in 0..k {
            let bit = g.value(i, &block);
            if pi.predict(&prefix) == bit {
                hit = true;
                break;
            }
            prefix.push(bit);
        }
        if !hit {
            return Err(Error::HypothesisFails { g_index: g_idx, j, block: m });
        }
    }
    Ok(())
}

fn hypothesis_all_equal(
    fam: &BinPredictorFamily,
    pi: &Predictor,
    y: &UltWord,
    j: usize,
    m: usize,
) -> Result<()> {
    let k = fam.k;
    // support: the blocks of y at offset j up to and including block m
    let mut support: Vec<Word> = Vec::new();
    let mut pos_index = Vec::with_capacity(m + 1);
    for mm in 0..=m {
        let w = y.block(mm * k + j, k);
        let idx = support.iter().position(|s| *s == w).unwrap_or_else(|| {
            support.push(w.clone());
            support.len() - 1
        });
        pos_index.push(idx);
    }
    let d = support.len();
    let bits = (k * d) as u32;
    if bits >= 63 || (1u64 << bits) > G_ENUM_CAP {
        return hypothesis_full(fam, y, j, m);
    }
    let cur = pos_index[m];
    let mut prefix: Vec<Symbol> = Vec::with_capacity((m + 1) * k);
    for assign in 0..(1u64 << bits) {
        let val = |i: usize, t: usize| ((assign >> (i * d + t)) & 1) as Symbol;
        prefix.clear();
        for &t in &pos_index[..m] {
            for i in 0..k {
                prefix.push(val(i, t));
            }
        }
        let mut hit = false;
        for i in 0..k {
            let bit = val(i, cur);
            if pi.predict(&prefix) == bit {
                hit = true;
                break;
            }
            prefix.push(bit);
        }
        if !hit {
            let g = witness_family(fam, &support, assign, d)?;
            return Err(Error::HypothesisFails { g_index: g.index(), j, block: m });
        }
    }
    Ok(())
}

/// Materializes a full encoder family extending a violating assignment.
fn witness_family(
    fam: &BinPredictorFamily,
    support: &[Word],
    assign: u64,
    d: usize,
) -> Result<GFamily> {
    let k = fam.k;
    let values: Vec<Vec<u8>> = (0..k)
        .map(|i| (0..support.len()).map(|t| ((assign >> (i * d + t)) & 1) as u8).collect())
        .collect();
    GFamily::from_support(fam.n, k, support, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::EnumBudget;
    use alloc::vec;

    fn w(n: usize, s: &str) -> Word {
        Word::parse(n, s).unwrap()
    }

    #[test]
    fn g_space_counts() {
        assert_eq!(g_space_size(2, 1), 4);
        assert_eq!(g_space_size(2, 2), 256);
        assert_eq!(g_space_size(3, 1), 8);
        let fams = enum_g_families(2, 1, &EnumBudget::default()).unwrap();
        assert_eq!(fams.len(), 4);
        assert_eq!(enum_g_families(3, 1, &EnumBudget::default()).unwrap().len(), 8);
        let err = enum_g_families(3, 3, &EnumBudget::new(1 << 20)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn g_index_roundtrip_and_order() {
        for idx in 0..256 {
            let g = GFamily::from_index(2, 2, idx).unwrap();
            assert_eq!(g.index(), idx);
        }
        // index 0 is all-zero, the last index all-one
        let g0 = GFamily::from_index(2, 2, 0).unwrap();
        assert_eq!(g0.table_bits(0), vec![0, 0, 0, 0]);
        let g255 = GFamily::from_index(2, 2, 255).unwrap();
        assert_eq!(g255.table_bits(0), vec![1, 1, 1, 1]);
        assert_eq!(g255.table_bits(1), vec![1, 1, 1, 1]);
        // index 1 sets only the lexicographically last input of g_{k−1}
        let g1 = GFamily::from_index(2, 2, 1).unwrap();
        assert_eq!(g1.table_bits(0), vec![0, 0, 0, 0]);
        assert_eq!(g1.table_bits(1), vec![0, 0, 0, 1]);
    }

    fn projections(n: usize, k: usize) -> GFamily {
        // g_i(s) = s(i), valid for binary blocks
        let inputs = (n as u64).pow(k as u32);
        let rows: Vec<Vec<u8>> = (0..k)
            .map(|i| {
                (0..inputs)
                    .map(|r| Word::from_rank(n, k, r).at(i))
                    .collect()
            })
            .collect();
        GFamily::from_table_bits(n, k, &rows).unwrap()
    }

    #[test]
    fn encoding_with_projections_is_identity() {
        let g = projections(2, 2);
        let y = UltWord::parse(2, "(0110)").unwrap();
        let enc = encode_word(&y, &g, 0, 8).unwrap();
        assert_eq!(enc, y.prefix(8));
    }

    #[test]
    fn encoding_all_zero_family() {
        let g = GFamily::from_index(2, 2, 0).unwrap();
        let y = UltWord::parse(2, "(01)").unwrap();
        assert_eq!(encode_word(&y, &g, 1, 6).unwrap(), w(2, "000000"));
    }

    #[test]
    fn encoding_shifted_blocks() {
        // j = 1 reads blocks [1,3), [3,5) of 010101…, both "10"
        let g = projections(2, 2);
        let y = UltWord::parse(2, "(01)").unwrap();
        assert_eq!(encode_word(&y, &g, 1, 4).unwrap(), w(2, "1010"));
    }

    #[test]
    fn encode_prefix_phase() {
        let g = projections(2, 2);
        let sigma = w(2, "010");
        assert_eq!(encode_prefix(&sigma, &g, 1).unwrap(), w(2, "10"));
        assert!(matches!(
            encode_prefix(&sigma, &g, 0),
            Err(Error::PhaseMismatch { .. })
        ));
        assert_eq!(encode_prefix(&w(2, "0"), &g, 1).unwrap(), Word::empty(2));
        let ones = GFamily::from_index(2, 2, 255).unwrap();
        assert_eq!(encode_prefix(&w(2, "01010"), &ones, 1).unwrap(), w(2, "1111"));
    }

    #[test]
    fn encode_ultword_matches_pointwise() {
        let g = projections(2, 2);
        for (pre, per) in [("", "01"), ("011", "0"), ("1", "10"), ("0010", "011")] {
            let y = UltWord::parse(2, &alloc::format!("{pre}({per})")).unwrap();
            for j in 0..2 {
                let e = encode_ultword(&y, &g, j).unwrap();
                let direct = encode_word(&y, &g, j, 24).unwrap();
                assert_eq!(e.prefix(24), direct, "pre={pre} per={per} j={j}");
            }
        }
    }

    #[test]
    fn a_set_empty_for_constant_zero_family() {
        let pi = Predictor::constant(2, 0).unwrap();
        let fam = BinPredictorFamily::all_equal(2, 1, pi).unwrap();
        for s in ["", "0", "1", "01", "110"] {
            let set = a_set(&w(2, s), &fam, 1).unwrap();
            assert!(set.members.is_empty(), "sigma={s}");
        }
    }

    #[test]
    fn a_set_singleton_for_image_resolver() {
        // π^{⟨g₀⟩,0} is the constant g₀(⟨0⟩)
        let fam = BinPredictorFamily::from_resolver(2, 1, |g, _| {
            Predictor::constant(2, g.value(0, &Word::parse(2, "0").unwrap())).unwrap()
        })
        .unwrap();
        for s in ["", "0", "1", "10", "011"] {
            let sigma = w(2, s);
            let set = a_set(&sigma, &fam, 1).unwrap();
            assert_eq!(
                set.members.into_iter().collect::<Vec<_>>(),
                vec![sigma.child(0)],
                "sigma={s}"
            );
        }
    }

    #[test]
    fn a_set_level_bounds() {
        let pi = Predictor::constant(2, 0).unwrap();
        let fam = BinPredictorFamily::all_equal(2, 2, pi).unwrap();
        assert!(matches!(
            a_set(&w(2, "0"), &fam, 0),
            Err(Error::LevelUndefined { .. })
        ));
        assert!(matches!(
            a_set(&w(2, "0"), &fam, 3),
            Err(Error::LevelUndefined { .. })
        ));
        // level 1 at |σ| = 1 is defined (base is the empty word)
        a_set(&w(2, "0"), &fam, 1).unwrap();
    }

    #[test]
    fn psi_examples() {
        let fam = BinPredictorFamily::from_resolver(2, 1, |g, _| {
            Predictor::constant(2, g.value(0, &Word::parse(2, "0").unwrap())).unwrap()
        })
        .unwrap();
        let psi = psi(&fam).unwrap();
        for s in ["", "0", "1", "01", "111"] {
            assert_eq!(psi.predict(w(2, s).symbols()), 0, "sigma={s}");
        }

        let zero = BinPredictorFamily::all_equal(
            2,
            1,
            Predictor::constant(2, 0).unwrap(),
        )
        .unwrap();
        let psi0 = super::psi(&zero).unwrap();
        for s in ["", "0", "1", "10", "0110"] {
            // total everywhere even though the sets are empty
            let _ = psi0.predict(w(2, s).symbols());
        }
    }

    #[test]
    fn restricted_paths_agree_with_full_enumeration() {
        // all-equal vs resolver wrapping of the same family
        let mut rng = crate::sampling::Rng::new(42);
        for _ in 0..12 {
            let pi = rng.table_predictor(2, 4);
            for (n, k) in [(2, 1), (2, 2), (3, 1)] {
                let fam = BinPredictorFamily::all_equal(n, k, pi.clone()).unwrap();
                let full = fam.as_resolver();
                for len in 0..4 {
                    let sigma = rng.word(n, len);
                    let a = a_set(&sigma, &fam, k).unwrap();
                    let b = a_set(&sigma, &full, k).unwrap();
                    assert_eq!(a.members, b.members, "n={n} k={k} sigma={sigma}");
                }
            }
        }
        // tracking vs resolver wrapping
        for seed in 0..8 {
            let mut rng = crate::sampling::Rng::new(900 + seed);
            for (n, k) in [(2, 1), (2, 2), (3, 1)] {
                let y = rng.ultword(n, 3, 4);
                let fam = BinPredictorFamily::tracking(y.clone(), k).unwrap();
                let full = fam.as_resolver();
                for len in 0..4 {
                    let sigma = rng.word(n, len);
                    let a = a_set(&sigma, &fam, k).unwrap();
                    let b = a_set(&sigma, &full, k).unwrap();
                    assert_eq!(a.members, b.members, "n={n} k={k} y={y} sigma={sigma}");
                }
            }
        }
    }

    #[test]
    fn halving_step_inequality() {
        let mut rng = crate::sampling::Rng::new(7);
        for _ in 0..40 {
            let pi = rng.table_predictor(2, 4);
            let fam = BinPredictorFamily::all_equal(2, 2, pi).unwrap();
            for len in 0..4 {
                let sigma = rng.word(2, len);
                let d = psi_explain(&fam, &sigma).unwrap();
                if d.level > 0 {
                    assert!(d.child_sizes.iter().sum::<usize>() <= d.level_size);
                    for (l, &c) in d.child_sizes.iter().enumerate() {
                        if l as u8 != d.chosen {
                            assert!(2 * c <= d.level_size, "missed child not halved");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn image_resolver_predicts_the_zero_word_everywhere() {
        // π^{⟨g₀⟩,0} = const g₀(⟨0⟩) hits every block of every encoding
        // of 0^ω, so ψ must 1-constantly predict it from the start
        let fam = BinPredictorFamily::from_resolver(2, 1, |g, _| {
            Predictor::constant(2, g.value(0, &Word::parse(2, "0").unwrap())).unwrap()
        })
        .unwrap();
        let y = UltWord::constant(2, 0).unwrap();
        let r = verify_main_theorem(&y, &fam, 0, 16).unwrap();
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn psi_exports_as_table() {
        let y = UltWord::parse(3, "(021)").unwrap();
        let fam = BinPredictorFamily::tracking(y, 2).unwrap();
        let rule = psi(&fam).unwrap();
        let table = psi_table(&fam, 3, &EnumBudget::default()).unwrap();
        assert_eq!(table.table_depth(), Some(3));
        for len in 0..3 {
            for r in 0..3u64.pow(len as u32) {
                let w = Word::from_rank(3, len, r);
                assert_eq!(table.predict(w.symbols()), rule.predict(w.symbols()));
            }
        }
    }

    #[test]
    fn main_theorem_tracking_small() {
        let y = UltWord::parse(2, "(011)").unwrap();
        let fam = BinPredictorFamily::tracking(y.clone(), 2).unwrap();
        let r = verify_main_theorem(&y, &fam, 0, 24).unwrap();
        assert!(r.verdict, "{r:?}");
    }

    #[test]
    fn main_theorem_hypothesis_failure_is_reported() {
        let y = UltWord::parse(2, "(1)").unwrap();
        let pi = Predictor::constant(2, 0).unwrap();
        let fam = BinPredictorFamily::all_equal(2, 1, pi).unwrap();
        let err = verify_main_theorem(&y, &fam, 0, 8).unwrap_err();
        // the identity encoder makes the encoding all-ones, never predicted
        match err {
            Error::HypothesisFails { g_index, j, block } => {
                assert_eq!((g_index, j, block), (1, 0, 0));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
