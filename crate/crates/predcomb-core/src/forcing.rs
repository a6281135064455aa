//! The poset of finite predictor approximations.
//!
//! A condition is a triple `(ℓ, σ, F)`: a predictor table total on all
//! binary words of length ≤ ℓ, plus finitely many reals it already
//! predicts at the boundary, pairwise separated at level ℓ.  An extension
//! grows the table and the real set and must hit every carried real in
//! every length-k window strictly between the levels.  Conditions sharing
//! one `(ℓ, σ)` bucket admit a common extension whenever at most `2^k − 1`
//! of them are combined: through each level-ℓ node they contribute at
//! most one branch each, so the tree halving predictor covers every
//! window.  A bucket of `2^k` conditions realizing all window patterns
//! behind a common forced bit has no common extension at all.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oracles::{no_full_window_predictor, EnumBudget, WindowCertificate};
use crate::trees::{build_window_predictor, BlockMap, PrefixTree};
use crate::word::{Predictor, Symbol, SymbolSource, UltWord, Word};

/// A condition `(ℓ, σ, F)` of the poset with window length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PkCondition {
    pub k: usize,
    pub ell: usize,
    /// Total table on all binary words of length ≤ `ell`.
    pub sigma: BTreeMap<Word, Symbol>,
    /// Finitely many reals, pairwise separated at level `ell`.
    pub members: Vec<UltWord>,
}

impl PkCondition {
    pub fn new(k: usize, ell: usize, sigma: BTreeMap<Word, Symbol>, members: Vec<UltWord>) -> Self {
        PkCondition { k, ell, sigma, members }
    }

    /// The table filled with one value everywhere on `2^{≤ell}`.
    pub fn uniform_table(ell: usize, value: Symbol) -> BTreeMap<Word, Symbol> {
        let mut sigma = BTreeMap::new();
        for len in 0..=ell {
            for r in 0..1u64 << len {
                sigma.insert(Word::from_rank(2, len, r), value);
            }
        }
        sigma
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionViolation {
    /// The table domain is not exactly `2^{≤ell}`.
    Domain { missing: Option<Word>, extra: Option<Word> },
    /// A table value or member is not binary.
    NotBinary,
    /// Two members share their length-`ell` prefix.
    PrefixCollision { first: usize, second: usize },
    /// `σ(f↾ell) ≠ f(ell)` for the given member.
    BoundaryMismatch { member: usize },
}

impl core::fmt::Display for ConditionViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ConditionViolation::Domain { missing, extra } => {
                write!(f, "table domain is not 2^(<=ell):")?;
                if let Some(w) = missing {
                    write!(f, " missing {w}")?;
                }
                if let Some(w) = extra {
                    write!(f, " extra {w}")?;
                }
                Ok(())
            }
            ConditionViolation::NotBinary => write!(f, "non-binary value"),
            ConditionViolation::PrefixCollision { first, second } => {
                write!(f, "members {first} and {second} collide at level ell")
            }
            ConditionViolation::BoundaryMismatch { member } => {
                write!(f, "table does not predict member {member} at level ell")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub valid: bool,
    pub violations: Vec<ConditionViolation>,
}

/// Checks the three condition invariants; never fails, only reports.
pub fn validate_condition(p: &PkCondition) -> ConditionReport {
    let mut violations = Vec::new();
    for len in 0..=p.ell {
        for r in 0..1u64 << len {
            let w = Word::from_rank(2, len, r);
            if !p.sigma.contains_key(&w) {
                violations.push(ConditionViolation::Domain { missing: Some(w), extra: None });
            }
        }
    }
    for (w, &v) in &p.sigma {
        if w.len() > p.ell || w.alphabet_size() != 2 {
            violations.push(ConditionViolation::Domain { missing: None, extra: Some(w.clone()) });
        }
        if v > 1 {
            violations.push(ConditionViolation::NotBinary);
        }
    }
    for (i, f) in p.members.iter().enumerate() {
        if f.alphabet_size() != 2 {
            violations.push(ConditionViolation::NotBinary);
            continue;
        }
        for (jj, g) in p.members.iter().enumerate().skip(i + 1) {
            if f.prefix(p.ell) == g.prefix(p.ell) {
                violations.push(ConditionViolation::PrefixCollision { first: i, second: jj });
            }
        }
        if p.sigma.get(&f.prefix(p.ell)) != Some(&f.at(p.ell)) {
            violations.push(ConditionViolation::BoundaryMismatch { member: i });
        }
    }
    ConditionReport { valid: violations.is_empty(), violations }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendViolation {
    LevelDecreased,
    TableNotExtended { entry: Word },
    MemberDropped { member: usize },
    /// No hit for the member in the window starting here.
    WindowMissed { member: usize, start: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendCheck {
    pub holds: bool,
    pub violation: Option<ExtendViolation>,
}

fn require_valid(p: &PkCondition, index: usize) -> Result<()> {
    let report = validate_condition(p);
    if !report.valid {
        return Err(Error::InvalidCondition {
            index,
            detail: report.violations.first().map(|v| format!("{v}")).unwrap_or_default(),
        });
    }
    Ok(())
}

/// Does `q` extend `p`?  Level and table grow, members carry over, and
/// every carried member is hit in every window `[a, a+k)` with
/// `p.ell + 1 ≤ a` and `a + k ≤ q.ell`.
pub fn extends(q: &PkCondition, p: &PkCondition) -> Result<ExtendCheck> {
    if q.k != p.k {
        return Err(Error::InvalidCondition { index: 0, detail: "window mismatch".to_string() });
    }
    require_valid(q, 0)?;
    require_valid(p, 1)?;
    let fail = |violation| Ok(ExtendCheck { holds: false, violation: Some(violation) });
    if q.ell < p.ell {
        return fail(ExtendViolation::LevelDecreased);
    }
    for (w, v) in &p.sigma {
        if q.sigma.get(w) != Some(v) {
            return fail(ExtendViolation::TableNotExtended { entry: w.clone() });
        }
    }
    for (i, f) in p.members.iter().enumerate() {
        if !q.members.iter().any(|g| g == f) {
            return fail(ExtendViolation::MemberDropped { member: i });
        }
    }
    let k = p.k;
    for (i, f) in p.members.iter().enumerate() {
        let mut a = p.ell + 1;
        while a + k <= q.ell {
            let hit = (a..a + k).any(|pos| q.sigma.get(&f.prefix(pos)) == Some(&f.at(pos)));
            if !hit {
                return fail(ExtendViolation::WindowMissed { member: i, start: a });
            }
            a += 1;
        }
    }
    Ok(ExtendCheck { holds: true, violation: None })
}

/// A cell `(ℓ, σ)` of the linked decomposition; the member set is not
/// part of the key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BucketKey {
    pub ell: usize,
    /// Table values in (length, lexicographic) domain order.
    pub table_bits: Vec<Symbol>,
}

pub fn bucket_key(p: &PkCondition) -> BucketKey {
    let mut table_bits = Vec::with_capacity((1 << (p.ell + 1)) - 1);
    for len in 0..=p.ell {
        for r in 0..1u64 << len {
            table_bits.push(*p.sigma.get(&Word::from_rank(2, len, r)).unwrap_or(&0));
        }
    }
    BucketKey { ell: p.ell, table_bits }
}

/// Number of distinct bucket keys at one level: every total binary table
/// on `2^{≤ell}`.
pub fn bucket_count(ell: usize) -> u128 {
    1u128 << ((1u128 << (ell + 1)) - 1)
}

const MAX_EXTENSION_LEVEL: usize = 22;

/// Common extension of at most `2^k − 1` conditions sharing one bucket.
///
/// The union of their member sets routes at most one real per condition
/// through each level-ℓ node, so the suffix tree below every node stays
/// under `2^k` branches and the halving predictor hits every real in
/// every window up to the separation level.  The result is re-verified
/// against every input before being returned.
pub fn common_extension(conditions: &[PkCondition]) -> Result<PkCondition> {
    let first = conditions.first().ok_or(Error::BucketMismatch)?;
    let k = first.k;
    let max = (1usize << k) - 1;
    if conditions.len() > max {
        return Err(Error::TooManyConditions { given: conditions.len(), max });
    }
    for (i, p) in conditions.iter().enumerate() {
        require_valid(p, i)?;
        if p.k != k || bucket_key(p) != bucket_key(first) {
            return Err(Error::BucketMismatch);
        }
    }
    let ell = first.ell;
    let union: BTreeSet<UltWord> =
        conditions.iter().flat_map(|p| p.members.iter().cloned()).collect();
    let members: Vec<UltWord> = union.into_iter().collect();

    let mut m = ell;
    for (i, f) in members.iter().enumerate() {
        for g in members.iter().skip(i + 1) {
            let fd = f.first_difference(g).expect("set members are distinct words");
            m = m.max(fd + 1);
        }
    }
    if m > MAX_EXTENSION_LEVEL {
        return Err(Error::BudgetExceeded { required: 1u128 << (m + 1), allowed: 1 << MAX_EXTENSION_LEVEL });
    }

    let mut tau = first.sigma.clone();
    for s_rank in 0..1u64 << ell {
        let node = Word::from_rank(2, ell, s_rank);
        let branches: Vec<Word> = members
            .iter()
            .filter(|f| f.prefix(ell) == node)
            .map(|f| f.block(ell, m - ell))
            .collect();
        let window_pi = if branches.is_empty() || m == ell {
            None
        } else {
            let tree = PrefixTree::from_words(&branches)?;
            Some(build_window_predictor(&tree, k).map_err(|e| Error::VerificationFailed {
                detail: format!("window predictor construction failed: {e}"),
            })?)
        };
        // totality on lengths (ell, m): halving values along occupied
        // nodes, zero elsewhere
        for len in ell + 1..m {
            for r in 0..1u64 << (len - ell) {
                let suffix = Word::from_rank(2, len - ell, r);
                let w = node.concat(&suffix);
                let v = window_pi.as_ref().map_or(0, |pi| pi.predict(suffix.symbols()));
                tau.insert(w, v);
            }
        }
    }
    if m > ell {
        for r in 0..1u64 << m {
            let w = Word::from_rank(2, m, r);
            let v = members.iter().find(|g| g.prefix(m) == w).map_or(0, |g| g.at(m));
            tau.insert(w, v);
        }
    }

    let q = PkCondition { k, ell: m, sigma: tau, members };
    let report = validate_condition(&q);
    if !report.valid {
        return Err(Error::VerificationFailed {
            detail: format!("built condition invalid: {:?}", report.violations.first()),
        });
    }
    for (i, p) in conditions.iter().enumerate() {
        let check = extends(&q, p)?;
        if !check.holds {
            return Err(Error::VerificationFailed {
                detail: format!("built condition does not extend input {i}: {:?}", check.violation),
            });
        }
    }
    Ok(q)
}

/// A bucket of `2^k` conditions with no common extension, plus the
/// enumeration certificate showing why.
#[derive(Debug, Clone)]
pub struct SharpnessWitness {
    pub conditions: Vec<PkCondition>,
    /// Every predictor fragment on the splitting window misses at least
    /// one of the realized patterns throughout.
    pub certificate: WindowCertificate,
    /// The level every common extension is forced past, `ell + 1 + k`.
    pub forced_level: usize,
}

/// Builds `2^k` same-bucket conditions whose members share the forced
/// prefix `0^{ell+1}` and then realize all `2^k` window patterns,
/// continuing with zeros.  Separation forces any common extension to
/// level `ell + 1 + k`, where the certified full window sits strictly
/// between the levels.
pub fn sharpness_witness(k: usize, ell: usize, budget: &EnumBudget) -> Result<SharpnessWitness> {
    let certificate = no_full_window_predictor(k, budget)?;
    let sigma = PkCondition::uniform_table(ell, 0);
    let mut conditions = Vec::with_capacity(1 << k);
    let stem = Word::from_rank(2, ell + 1, 0);
    for t in 0..1u64 << k {
        let pattern = Word::from_rank(2, k, t);
        let pre = stem.concat(&pattern);
        let f = UltWord::new(pre, Word::new(2, alloc::vec![0])?)?;
        conditions.push(PkCondition::new(k, ell, sigma.clone(), alloc::vec![f]));
    }
    Ok(SharpnessWitness { conditions, certificate, forced_level: ell + 1 + k })
}

/// Per-cell sets of window values some condition in that cell forbids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionMap {
    pub k: usize,
    pub cells: Vec<BTreeMap<Word, BTreeSet<Word>>>,
}

/// For each cell, the guessing map `ψ_n(σ)` = least window value the cell
/// does not exclude at `σ`.  A cell excluding everything anywhere cannot
/// come from a `2^k`-linked decomposition and is rejected.
pub fn extract_guessers(em: &ExclusionMap) -> Result<Vec<BlockMap>> {
    let k = em.k;
    let default = Word::from_rank(2, k, 0);
    let mut out = Vec::with_capacity(em.cells.len());
    for (cell_index, cell) in em.cells.iter().enumerate() {
        let mut entries = BTreeMap::new();
        for (sigma, excluded) in cell {
            let choice = (0..1u64 << k)
                .map(|r| Word::from_rank(2, k, r))
                .find(|w| !excluded.contains(w))
                .ok_or(Error::LinkednessViolated { cell: cell_index, sigma: sigma.clone() })?;
            entries.insert(sigma.clone(), choice);
        }
        out.push(BlockMap::from_table(k, entries, default.clone())?);
    }
    Ok(out)
}

/// Proper lengthening of one condition: the minimal common extension of
/// itself, raised to the requested level along its members.
pub fn extend_to_level(p: &PkCondition, new_level: usize) -> Result<PkCondition> {
    let mut q = common_extension(core::slice::from_ref(p))?;
    if q.ell < new_level {
        q = raise_level(&q, new_level)?;
    }
    Ok(q)
}

/// Lengthens a condition to a higher level along its own members.
fn raise_level(p: &PkCondition, new_level: usize) -> Result<PkCondition> {
    if new_level > MAX_EXTENSION_LEVEL {
        return Err(Error::BudgetExceeded {
            required: 1u128 << (new_level + 1),
            allowed: 1 << MAX_EXTENSION_LEVEL,
        });
    }
    let mut tau = p.sigma.clone();
    let follower = Predictor::follower(2, &p.members, new_level + 1)?;
    for len in p.ell + 1..=new_level {
        for r in 0..1u64 << len {
            let w = Word::from_rank(2, len, r);
            tau.insert(w.clone(), follower.predict(w.symbols()));
        }
    }
    let q = PkCondition::new(p.k, new_level, tau, p.members.clone());
    let check = extends(&q, p)?;
    if !check.holds {
        return Err(Error::VerificationFailed {
            detail: format!("raised condition does not extend: {:?}", check.violation),
        });
    }
    Ok(q)
}

pub fn violations_to_string(violations: &[ConditionViolation]) -> String {
    let mut s = String::new();
    for v in violations {
        if !s.is_empty() {
            s.push_str("; ");
        }
        s.push_str(&format!("{v}"));
    }
    s
}
