//! Window and block checking semantics, exact infinite-horizon checking
//! for finite-memory predictors, and the two basic evader constructions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::word::{lcm, Predictor, Symbol, SymbolSource, UltWord, Word};

/// Outcome of a window or block check over a finite range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitReport {
    pub verdict: bool,
    /// On a false verdict: the least violating window start
    /// (for block checks, the least violating block index).
    pub witness: Option<usize>,
    pub checked_horizon: usize,
    /// Set when a table predictor was consulted at or beyond its depth.
    pub out_of_depth: bool,
}

fn check_alphabets(pi: &Predictor, x: &impl SymbolSource) -> Result<()> {
    if pi.alphabet_size() != x.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            left: pi.alphabet_size(),
            right: x.alphabet_size(),
        });
    }
    Ok(())
}

/// Computes `pi(x↾i) == x(i)` for `i` in `[0, h)`.
fn hit_vector(pi: &Predictor, x: &impl SymbolSource, h: usize) -> (Vec<bool>, bool) {
    let mut hits = Vec::with_capacity(h);
    let mut flagged = false;
    let mut prefix: Vec<Symbol> = Vec::with_capacity(h);
    for i in 0..h {
        let (guess, oob) = pi.predict_flagged(&prefix);
        flagged |= oob;
        hits.push(guess == x.at(i));
        prefix.push(x.at(i));
    }
    (hits, flagged)
}

/// True iff every window `[a, a+k)` with `m ≤ a` and `a+k ≤ h` contains a
/// position where `pi` guesses `x` correctly.
pub fn check_constant(
    pi: &Predictor,
    x: &impl SymbolSource,
    k: usize,
    m: usize,
    h: usize,
) -> Result<HitReport> {
    check_alphabets(pi, x)?;
    if k == 0 || m + k > h {
        return Err(Error::HorizonTooSmall { needed: m + k.max(1), available: h });
    }
    x.require_horizon(h)?;
    let (hits, out_of_depth) = hit_vector(pi, x, h);
    let mut witness = None;
    for a in m..=h - k {
        if !hits[a..a + k].iter().any(|&b| b) {
            witness = Some(a);
            break;
        }
    }
    Ok(HitReport { verdict: witness.is_none(), witness, checked_horizon: h, out_of_depth })
}

/// True iff every aligned block `[mk, (m+1)k)` with `m ≥ m0` and
/// `(m+1)k ≤ h` contains a correct guess.  The witness is a block index.
pub fn check_weak(
    pi: &Predictor,
    x: &impl SymbolSource,
    k: usize,
    m0: usize,
    h: usize,
) -> Result<HitReport> {
    check_alphabets(pi, x)?;
    if k == 0 || (m0 + 1) * k > h {
        return Err(Error::HorizonTooSmall { needed: (m0 + 1) * k.max(1), available: h });
    }
    x.require_horizon(h)?;
    let (hits, out_of_depth) = hit_vector(pi, x, h);
    let mut witness = None;
    let mut m = m0;
    while (m + 1) * k <= h {
        if !hits[m * k..(m + 1) * k].iter().any(|&b| b) {
            witness = Some(m);
            break;
        }
        m += 1;
    }
    Ok(HitReport { verdict: witness.is_none(), witness, checked_horizon: h, out_of_depth })
}

/// Decides the genuine infinite statement for a finite-memory predictor on
/// an eventually periodic word: beyond `|preperiod| + window` the hit
/// pattern repeats with period `lcm(|period|, phase)`, so one period of
/// windows decides everything.  Returns the verdict and, when true, the
/// least start from which every window contains a hit.
pub fn check_constant_exact(
    pi: &Predictor,
    x: &UltWord,
    k: usize,
) -> Result<(bool, Option<usize>)> {
    check_alphabets(pi, x)?;
    let (window, phase) = pi.finite_memory_shape().ok_or(Error::NotFiniteMemory)?;
    if k == 0 {
        return Err(Error::HorizonTooSmall { needed: 1, available: 0 });
    }
    let stable = x.preperiod().len() + window;
    let cycle = lcm(x.period().len(), phase);
    let h = stable + cycle + k;
    let (hits, _) = hit_vector(pi, x, h);
    let window_ok = |a: usize| hits[a..a + k].iter().any(|&b| b);
    // A miss-window starting in the stable region recurs forever.
    for a in stable..stable + cycle {
        if !window_ok(a) {
            return Ok((false, None));
        }
    }
    let mut onset = 0;
    for a in (0..stable).rev() {
        if !window_ok(a) {
            onset = a + 1;
            break;
        }
    }
    Ok((true, Some(onset)))
}

/// The word that dodges `pi` at every position: `x(i)` is the least symbol
/// different from `pi(x↾i)`.
pub fn diagonal_evader(pi: &Predictor, h: usize) -> Word {
    let n = pi.alphabet_size();
    let mut symbols: Vec<Symbol> = Vec::with_capacity(h);
    for _ in 0..h {
        let guess = pi.predict(&symbols);
        symbols.push(if guess == 0 { 1 } else { 0 });
    }
    Word::new(n, symbols).expect("avoiding symbol exists for n ≥ 2")
}

/// Schedules the binary predictors round-robin over length-`k` blocks:
/// block `t` is built to miss `pi[t mod |pi|]` at all `k` positions, so no
/// member predicts the result k-constantly anywhere on `[0, h)`.
pub fn round_robin_evader(predictors: &[Predictor], k: usize, h: usize) -> Result<Word> {
    for pi in predictors {
        if pi.alphabet_size() != 2 {
            return Err(Error::AlphabetMismatch { left: pi.alphabet_size(), right: 2 });
        }
    }
    if predictors.is_empty() || k == 0 || !h.is_multiple_of(k) {
        return Err(Error::HorizonTooSmall { needed: k.max(1), available: h });
    }
    let mut symbols: Vec<Symbol> = Vec::with_capacity(h);
    for t in 0..h / k {
        let pi = &predictors[t % predictors.len()];
        for _ in 0..k {
            let guess = pi.predict(&symbols);
            symbols.push(1 - guess);
        }
    }
    Word::new(2, symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn const0(n: usize) -> Predictor {
        Predictor::constant(n, 0).unwrap()
    }

    #[test]
    fn constant_predictor_on_constant_word() {
        let x = Word::parse(2, "0000").unwrap();
        let r = check_constant(&const0(2), &x, 1, 0, 4).unwrap();
        assert!(r.verdict);
        assert_eq!(r.witness, None);
    }

    #[test]
    fn all_positions_miss() {
        let x = Word::parse(2, "1111").unwrap();
        let r = check_constant(&const0(2), &x, 2, 0, 4).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.witness, Some(0));
    }

    #[test]
    fn alternating_word_every_window_hits() {
        let x = UltWord::parse(2, "(01)").unwrap();
        // every length-2 window contains an even position where x is 0
        let r = check_constant(&const0(2), &x, 2, 0, 6).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn horizon_errors() {
        let x = Word::parse(2, "00").unwrap();
        assert!(matches!(
            check_constant(&const0(2), &x, 3, 0, 2),
            Err(Error::HorizonTooSmall { .. })
        ));
        assert!(matches!(
            check_constant(&const0(2), &x, 1, 0, 5),
            Err(Error::HorizonTooSmall { .. })
        ));
        let y = Word::parse(3, "00").unwrap();
        assert!(matches!(
            check_constant(&const0(2), &y, 1, 0, 2),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn out_of_depth_accesses_are_flagged() {
        let pi = Predictor::table_from_index(2, 2, 0).unwrap();
        let x = Word::parse(2, "0000").unwrap();
        let shallow = check_constant(&pi, &x, 1, 0, 2).unwrap();
        assert!(!shallow.out_of_depth);
        let deep = check_constant(&pi, &x, 1, 0, 4).unwrap();
        assert!(deep.out_of_depth, "prefixes of length >= 2 exceed the table");
        assert!(deep.verdict, "the total extension still answers 0");
    }

    #[test]
    fn weak_blocks() {
        let x = Word::parse(2, "0101").unwrap();
        let r = check_weak(&const0(2), &x, 2, 0, 4).unwrap();
        assert!(r.verdict, "position 2m always hits");

        let y = Word::parse(2, "0000").unwrap();
        let pi1 = Predictor::constant(2, 1).unwrap();
        let r = check_weak(&pi1, &y, 2, 0, 4).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.witness, Some(0));
    }

    #[test]
    fn exact_alternating() {
        let x = UltWord::parse(2, "(01)").unwrap();
        assert_eq!(check_constant_exact(&const0(2), &x, 2).unwrap(), (true, Some(0)));
    }

    #[test]
    fn exact_never_hits() {
        let x = UltWord::parse(2, "(1)").unwrap();
        assert_eq!(check_constant_exact(&const0(2), &x, 3).unwrap(), (false, None));
    }

    #[test]
    fn exact_misses_only_on_preperiod() {
        let x = UltWord::parse(2, "1111(0)").unwrap();
        assert_eq!(check_constant_exact(&const0(2), &x, 1).unwrap(), (true, Some(4)));
    }

    #[test]
    fn exact_rejects_table_kind() {
        let pi = Predictor::table_from_index(2, 2, 0).unwrap();
        let x = UltWord::parse(2, "(0)").unwrap();
        assert_eq!(check_constant_exact(&pi, &x, 1).unwrap_err(), Error::NotFiniteMemory);
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(diagonal_evader(&const0(2), 4), Word::parse(2, "1111").unwrap());
        assert_eq!(diagonal_evader(&const0(3), 3), Word::parse(3, "111").unwrap());
        let copy_last = Predictor::finite_memory(2, 1, 1, vec![0, 1]).unwrap();
        assert_eq!(diagonal_evader(&copy_last, 3), Word::parse(2, "101").unwrap());
    }

    #[test]
    fn diagonal_rejected_everywhere() {
        let copy_last = Predictor::finite_memory(2, 1, 1, vec![0, 1]).unwrap();
        let h = 8;
        let x = diagonal_evader(&copy_last, h);
        for k in 1..=h {
            for m in 0..=h - k {
                let r = check_constant(&copy_last, &x, k, m, h).unwrap();
                assert!(!r.verdict);
                assert_eq!(r.witness, Some(m));
            }
        }
    }

    #[test]
    fn round_robin_alternating_pair() {
        let p = [const0(2), Predictor::constant(2, 1).unwrap()];
        assert_eq!(round_robin_evader(&p, 1, 4).unwrap(), Word::parse(2, "1010").unwrap());
    }

    #[test]
    fn round_robin_singleton_is_diagonal() {
        let p = [const0(2)];
        assert_eq!(round_robin_evader(&p, 2, 4).unwrap(), Word::parse(2, "1111").unwrap());
    }

    #[test]
    fn round_robin_blocks_all_miss() {
        // three small table predictors
        let preds: Vec<Predictor> = [3u64, 57, 101]
            .iter()
            .map(|&i| Predictor::table_from_index(2, 4, i).unwrap())
            .collect();
        let k = 2;
        let h = 12;
        let x = round_robin_evader(&preds, k, h).unwrap();
        for (s, pi) in preds.iter().enumerate() {
            // scheduled blocks are complete misses
            let mut t = s;
            while (t + 1) * k <= h {
                for i in t * k..(t + 1) * k {
                    assert_ne!(pi.predict(x.prefix(i).symbols()), x.at(i));
                }
                t += preds.len();
            }
            // hence no member k-constantly predicts x from any start
            for m in 0..=h - k {
                assert!(!check_constant(pi, &x, k, m, h).unwrap().verdict);
            }
        }
    }
}
