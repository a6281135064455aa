//! Seeded, platform-independent sampling for randomized harnesses.
//!
//! Every randomized mode in this crate takes an explicit seed and must
//! reproduce byte-identical results across runs and platforms, so the
//! generator is a fixed splitmix64 rather than an external RNG whose
//! stream is not pinned across versions.

use alloc::vec::Vec;

use crate::word::{Predictor, Symbol, UltWord, Word};

/// splitmix64; passes through the full 2^64 state space.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // rejection sampling keeps the distribution exact
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    pub fn symbol(&mut self, n: usize) -> Symbol {
        self.below(n as u64) as Symbol
    }

    pub fn word(&mut self, n: usize, len: usize) -> Word {
        let symbols: Vec<Symbol> = (0..len).map(|_| self.symbol(n)).collect();
        Word::new(n, symbols).expect("sampled symbols are in range")
    }

    /// Preperiod length in `[0, max_pre]`, period length in `[1, max_per]`.
    pub fn ultword(&mut self, n: usize, max_pre: usize, max_per: usize) -> UltWord {
        let pre_len = self.below(max_pre as u64 + 1) as usize;
        let per_len = 1 + self.below(max_per as u64) as usize;
        let pre = self.word(n, pre_len);
        let per = self.word(n, per_len);
        UltWord::new(pre, per).expect("period is nonempty")
    }

    pub fn table_predictor(&mut self, n: usize, depth: usize) -> Predictor {
        Predictor::table_from_fn(n, depth, |_| self.symbol(n))
            .expect("sampled table is total")
    }
}

/// Stateless PRF bit keyed by `(seed, tags…, word)`.  Used to realize
/// seeded randomized predictor families lazily over huge index spaces.
pub fn prf_bit(seed: u64, tags: &[u64], word: &[Symbol]) -> u8 {
    let mut h = seed ^ 0x6a09e667f3bcc908;
    let mut mix = |v: u64| {
        h ^= v.wrapping_add(0x9e3779b97f4a7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
        h = h.wrapping_mul(0xff51afd7ed558ccd);
        h ^= h >> 33;
    };
    for &t in tags {
        mix(t);
    }
    mix(word.len() as u64);
    let mut acc = 0u64;
    for (i, &s) in word.iter().enumerate() {
        acc = acc.wrapping_mul(31).wrapping_add(s as u64 + 1);
        if i % 8 == 7 {
            mix(acc);
            acc = 0;
        }
    }
    mix(acc);
    (h & 1) as u8
}
