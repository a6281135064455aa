//! Finite words, eventually periodic infinite words, and predictors.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::error::{Error, Result};

/// A single alphabet symbol.  Alphabets are `0..n` for some `n ≥ 2`.
pub type Symbol = u8;

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn check_alphabet(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::AlphabetTooSmall { alphabet: n });
    }
    Ok(())
}

/// A finite sequence over the alphabet `0..alphabet_size`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    n: usize,
    symbols: Vec<Symbol>,
}

impl Word {
    pub fn new(n: usize, symbols: Vec<Symbol>) -> Result<Self> {
        check_alphabet(n)?;
        for &s in &symbols {
            if s as usize >= n {
                return Err(Error::SymbolOutOfRange { symbol: s, alphabet: n });
            }
        }
        Ok(Word { n, symbols })
    }

    pub fn empty(n: usize) -> Self {
        Word { n, symbols: Vec::new() }
    }

    /// Parses a digit string such as `"0121"`.  The alphabet must cover
    /// every digit; digits above 9 are not representable.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            let d = c.to_digit(10).ok_or(Error::Parse {
                what: "word",
                detail: format!("non-digit character {c:?}"),
            })? as Symbol;
            symbols.push(d);
        }
        Word::new(n, symbols)
    }

    /// Parses a digit string, inferring the smallest admissible alphabet
    /// (at least binary).
    pub fn parse_inferred(text: &str) -> Result<Self> {
        let probe = Word::parse(10, text)?;
        let n = probe.symbols.iter().map(|&s| s as usize + 1).max().unwrap_or(0).max(2);
        Word::new(n, probe.symbols)
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn at(&self, i: usize) -> Symbol {
        self.symbols[i]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word { n: self.n, symbols: self.symbols[..len].to_vec() }
    }

    /// The subword at positions `[start, start + len)`.
    pub fn block(&self, start: usize, len: usize) -> Word {
        Word { n: self.n, symbols: self.symbols[start..start + len].to_vec() }
    }

    pub fn child(&self, s: Symbol) -> Word {
        debug_assert!((s as usize) < self.n);
        let mut symbols = self.symbols.clone();
        symbols.push(s);
        Word { n: self.n, symbols }
    }

    pub fn concat(&self, tail: &Word) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&tail.symbols);
        Word { n: self.n, symbols }
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.n == other.n && self.symbols.starts_with(&other.symbols)
    }

    /// Lexicographic rank among all words of the same length.
    pub fn rank(&self) -> u64 {
        let mut r = 0u64;
        for &s in &self.symbols {
            r = r * self.n as u64 + s as u64;
        }
        r
    }

    /// Inverse of [`Word::rank`] for the given length.
    pub fn from_rank(n: usize, len: usize, mut rank: u64) -> Word {
        let mut symbols = vec![0; len];
        for i in (0..len).rev() {
            symbols[i] = (rank % n as u64) as Symbol;
            rank /= n as u64;
        }
        Word { n, symbols }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// An eventually periodic infinite word, stored in normal form: the period
/// is primitive and the preperiod is as short as possible.  Two values are
/// equal exactly when they denote the same infinite word, which coincides
/// with agreement on the first `|pre₁| + |pre₂| + lcm(|per₁|, |per₂|)`
/// positions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UltWord {
    n: usize,
    preperiod: Word,
    period: Word,
}

impl UltWord {
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if preperiod.n != period.n {
            return Err(Error::AlphabetMismatch { left: preperiod.n, right: period.n });
        }
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut pre = preperiod.symbols;
        let mut per = period.symbols;
        // Primitive period: the shortest divisor-length word repeating to it.
        for d in 1..=per.len() {
            if per.len().is_multiple_of(d) && per.chunks(d).all(|c| c == &per[..d]) {
                per.truncate(d);
                break;
            }
        }
        // Absorb preperiod symbols that already match the period boundary.
        while let Some(&last) = pre.last() {
            if last == *per.last().unwrap() {
                pre.pop();
                per.rotate_right(1);
            } else {
                break;
            }
        }
        let n = period.n;
        Ok(UltWord {
            n,
            preperiod: Word { n, symbols: pre },
            period: Word { n, symbols: per },
        })
    }

    /// Parses the `pre(period)` form, e.g. `"011(01)"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let open = text.find('(').ok_or(Error::Parse {
            what: "ultimately periodic word",
            detail: "missing '('".to_owned(),
        })?;
        if !text.ends_with(')') {
            return Err(Error::Parse {
                what: "ultimately periodic word",
                detail: "missing trailing ')'".to_owned(),
            });
        }
        let pre = Word::parse(n, &text[..open])?;
        let per = Word::parse(n, &text[open + 1..text.len() - 1])?;
        UltWord::new(pre, per)
    }

    /// The constant word `s s s …`.
    pub fn constant(n: usize, s: Symbol) -> Result<Self> {
        UltWord::new(Word::empty(n), Word::new(n, vec![s])?)
    }

    /// Repeats a finite word forever.
    pub fn periodic(period: Word) -> Result<Self> {
        UltWord::new(Word::empty(period.n), period)
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn at(&self, i: usize) -> Symbol {
        if i < self.preperiod.len() {
            self.preperiod.at(i)
        } else {
            self.period.at((i - self.preperiod.len()) % self.period.len())
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        let mut symbols = Vec::with_capacity(len);
        for i in 0..len {
            symbols.push(self.at(i));
        }
        Word { n: self.n, symbols }
    }

    /// Number of positions that decide equality with `other`.
    pub fn equality_bound(&self, other: &UltWord) -> usize {
        self.preperiod.len()
            + other.preperiod.len()
            + lcm(self.period.len(), other.period.len())
    }

    /// First position where the two words differ, if any.
    pub fn first_difference(&self, other: &UltWord) -> Option<usize> {
        (0..self.equality_bound(other)).find(|&i| self.at(i) != other.at(i))
    }
}

impl fmt::Display for UltWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.preperiod, self.period)
    }
}

impl fmt::Debug for UltWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Anything a predictor can be run against: a finite word (bounded
/// horizon) or an eventually periodic word (unbounded).
pub trait SymbolSource {
    fn alphabet_size(&self) -> usize;
    /// `None` means every position is evaluable.
    fn horizon(&self) -> Option<usize>;
    fn at(&self, i: usize) -> Symbol;

    fn prefix(&self, len: usize) -> Word {
        let mut symbols = Vec::with_capacity(len);
        for i in 0..len {
            symbols.push(self.at(i));
        }
        Word { n: self.alphabet_size(), symbols }
    }

    /// The length-`len` block starting at `start`.
    fn block(&self, start: usize, len: usize) -> Word {
        let mut symbols = Vec::with_capacity(len);
        for i in start..start + len {
            symbols.push(self.at(i));
        }
        Word { n: self.alphabet_size(), symbols }
    }

    fn require_horizon(&self, needed: usize) -> Result<()> {
        match self.horizon() {
            Some(h) if h < needed => Err(Error::HorizonTooSmall { needed, available: h }),
            _ => Ok(()),
        }
    }
}

impl SymbolSource for Word {
    fn alphabet_size(&self) -> usize {
        self.n
    }
    fn horizon(&self) -> Option<usize> {
        Some(self.len())
    }
    fn at(&self, i: usize) -> Symbol {
        Word::at(self, i)
    }
}

impl SymbolSource for UltWord {
    fn alphabet_size(&self) -> usize {
        self.n
    }
    fn horizon(&self) -> Option<usize> {
        None
    }
    fn at(&self, i: usize) -> Symbol {
        UltWord::at(self, i)
    }
}

/// A total, deterministic map from finite words to symbols.
///
/// Three backings: a finite table with a depth bound (answers beyond the
/// bound are `0` and flagged), an arbitrary pure rule, and a finite-memory
/// form whose answer depends only on the last `window` symbols (left-padded
/// with `0`) and the position modulo `phase`.  Only the finite-memory form
/// admits exact infinite-horizon checking.
#[derive(Clone)]
pub struct Predictor {
    n: usize,
    kind: PredictorKind,
}

type RuleFn = dyn Fn(&[Symbol]) -> Symbol + Send + Sync;

#[derive(Clone)]
enum PredictorKind {
    Table {
        depth: usize,
        /// One entry per word of length < depth, indexed by
        /// `offset(len) + rank(word)`.
        values: Arc<Vec<Symbol>>,
    },
    Rule(Arc<RuleFn>),
    FiniteMemory {
        window: usize,
        phase: usize,
        /// Indexed by `state_rank * phase + len % phase`.
        values: Arc<Vec<Symbol>>,
    },
}

/// Number of words over `n` symbols of length strictly below `depth`.
pub(crate) fn words_below(n: usize, depth: usize) -> u128 {
    let mut total = 0u128;
    let mut level = 1u128;
    for _ in 0..depth {
        total += level;
        level *= n as u128;
    }
    total
}

impl Predictor {
    /// The predictor that always answers `s`.
    pub fn constant(n: usize, s: Symbol) -> Result<Self> {
        check_alphabet(n)?;
        if s as usize >= n {
            return Err(Error::SymbolOutOfRange { symbol: s, alphabet: n });
        }
        Ok(Predictor {
            n,
            kind: PredictorKind::FiniteMemory { window: 0, phase: 1, values: Arc::new(vec![s]) },
        })
    }

    /// Table predictor answering every word of length < `depth` from the
    /// given map; longer words get `0` with the out-of-depth flag set.
    pub fn from_table(n: usize, depth: usize, entries: &[(Word, Symbol)]) -> Result<Self> {
        check_alphabet(n)?;
        let total = words_below(n, depth);
        let mut values = vec![None; total as usize];
        for (w, s) in entries {
            if w.n != n {
                return Err(Error::AlphabetMismatch { left: w.n, right: n });
            }
            if *s as usize >= n {
                return Err(Error::SymbolOutOfRange { symbol: *s, alphabet: n });
            }
            if w.len() < depth {
                values[table_index(n, w.symbols())] = Some(*s);
            }
        }
        let missing = values.iter().filter(|v| v.is_none()).count();
        if missing > 0 {
            return Err(Error::IncompleteTable { missing });
        }
        Ok(Predictor {
            n,
            kind: PredictorKind::Table {
                depth,
                values: Arc::new(values.into_iter().map(Option::unwrap).collect()),
            },
        })
    }

    /// Table predictor filled from a rule; the canonical way to freeze a
    /// rule predictor to a given depth.
    pub fn table_from_fn(
        n: usize,
        depth: usize,
        mut f: impl FnMut(&Word) -> Symbol,
    ) -> Result<Self> {
        check_alphabet(n)?;
        let total = words_below(n, depth);
        let mut values = Vec::with_capacity(total as usize);
        for len in 0..depth {
            let count = (n as u64).pow(len as u32);
            for r in 0..count {
                values.push(f(&Word::from_rank(n, len, r)));
            }
        }
        Ok(Predictor { n, kind: PredictorKind::Table { depth, values: Arc::new(values) } })
    }

    /// Table predictor with index `index` in the lexicographic enumeration
    /// of all tables of the given depth (most significant entry first).
    pub fn table_from_index(n: usize, depth: usize, index: u64) -> Result<Self> {
        let total = words_below(n, depth) as u32;
        let mut values = vec![0; total as usize];
        let mut idx = index;
        for i in (0..total as usize).rev() {
            values[i] = (idx % n as u64) as Symbol;
            idx /= n as u64;
        }
        check_alphabet(n)?;
        Ok(Predictor { n, kind: PredictorKind::Table { depth, values: Arc::new(values) } })
    }

    pub fn from_rule(
        n: usize,
        rule: impl Fn(&[Symbol]) -> Symbol + Send + Sync + 'static,
    ) -> Result<Self> {
        check_alphabet(n)?;
        Ok(Predictor { n, kind: PredictorKind::Rule(Arc::new(rule)) })
    }

    /// Finite-memory predictor: `values[state * phase + len % phase]` where
    /// `state` ranks the last `window` symbols, left-padded with `0`.
    pub fn finite_memory(n: usize, window: usize, phase: usize, values: Vec<Symbol>) -> Result<Self> {
        check_alphabet(n)?;
        if phase == 0 {
            return Err(Error::Parse { what: "finite-memory predictor", detail: "phase 0".to_owned() });
        }
        let states = (n as u128).pow(window as u32) * phase as u128;
        if values.len() as u128 != states {
            return Err(Error::IncompleteTable {
                missing: (states as usize).saturating_sub(values.len()),
            });
        }
        for &s in &values {
            if s as usize >= n {
                return Err(Error::SymbolOutOfRange { symbol: s, alphabet: n });
            }
        }
        Ok(Predictor { n, kind: PredictorKind::FiniteMemory { window, phase, values: Arc::new(values) } })
    }

    /// Predicts the next symbol of the first member extending the input;
    /// answers `0` off every member and past `depth`.  Hits every member
    /// at every position beyond their pairwise separation (up to `depth`).
    pub fn follower(n: usize, members: &[UltWord], depth: usize) -> Result<Self> {
        check_alphabet(n)?;
        for m in members {
            if m.alphabet_size() != n {
                return Err(Error::AlphabetMismatch { left: m.alphabet_size(), right: n });
            }
        }
        let mut map: BTreeMap<Vec<Symbol>, Symbol> = BTreeMap::new();
        for m in members {
            for len in 0..depth {
                map.entry(m.prefix(len).symbols.clone()).or_insert_with(|| m.at(len));
            }
        }
        Predictor::from_rule(n, move |w| map.get(w).copied().unwrap_or(0))
    }

    pub fn alphabet_size(&self) -> usize {
        self.n
    }

    pub fn is_finite_memory(&self) -> bool {
        matches!(self.kind, PredictorKind::FiniteMemory { .. })
    }

    pub(crate) fn finite_memory_shape(&self) -> Option<(usize, usize)> {
        match &self.kind {
            PredictorKind::FiniteMemory { window, phase, .. } => Some((*window, *phase)),
            _ => None,
        }
    }

    pub fn predict(&self, w: &[Symbol]) -> Symbol {
        self.predict_flagged(w).0
    }

    /// Returns the prediction plus whether a table answered out of depth.
    pub fn predict_flagged(&self, w: &[Symbol]) -> (Symbol, bool) {
        match &self.kind {
            PredictorKind::Table { depth, values } => {
                if w.len() < *depth {
                    (values[table_index(self.n, w)], false)
                } else {
                    (0, true)
                }
            }
            PredictorKind::Rule(f) => (f(w), false),
            PredictorKind::FiniteMemory { window, phase, values } => {
                let mut state = 0usize;
                for i in 0..*window {
                    let s = if i + w.len() >= *window { w[w.len() + i - *window] } else { 0 };
                    state = state * self.n + s as usize;
                }
                (values[state * phase + w.len() % phase], false)
            }
        }
    }

    /// Exports any predictor as a table of the requested depth.
    pub fn to_table(&self, depth: usize) -> Result<Predictor> {
        Predictor::table_from_fn(self.n, depth, |w| self.predict(w.symbols()))
    }

    /// Table entries as `(word, symbol)` pairs in (length, rank) order.
    /// Empty for non-table predictors.
    pub fn table_entries(&self) -> Vec<(Word, Symbol)> {
        match &self.kind {
            PredictorKind::Table { depth, values } => {
                let mut out = Vec::with_capacity(values.len());
                let mut idx = 0;
                for len in 0..*depth {
                    for r in 0..(self.n as u64).pow(len as u32) {
                        out.push((Word::from_rank(self.n, len, r), values[idx]));
                        idx += 1;
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }

    pub fn table_depth(&self) -> Option<usize> {
        match &self.kind {
            PredictorKind::Table { depth, .. } => Some(*depth),
            _ => None,
        }
    }
}

fn table_index(n: usize, w: &[Symbol]) -> usize {
    // offset of length block + rank within it
    let mut offset = 0usize;
    let mut level = 1usize;
    for _ in 0..w.len() {
        offset += level;
        level *= n;
    }
    let mut r = 0usize;
    for &s in w {
        r = r * n + s as usize;
    }
    offset + r
}

impl fmt::Debug for Predictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PredictorKind::Table { depth, .. } => {
                write!(f, "Predictor::Table(n={}, depth={depth})", self.n)
            }
            PredictorKind::Rule(_) => write!(f, "Predictor::Rule(n={})", self.n),
            PredictorKind::FiniteMemory { window, phase, .. } => {
                write!(f, "Predictor::FiniteMemory(n={}, w={window}, p={phase})", self.n)
            }
        }
    }
}
