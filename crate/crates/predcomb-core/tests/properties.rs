//! Property tests for the checking semantics, the evaders, word
//! equality, and the poset order laws.

use proptest::prelude::*;

use predcomb_core::sampling::Rng;
use predcomb_core::{
    check_constant, check_constant_exact, check_weak, common_extension, diagonal_evader, extends,
    round_robin_evader, validate_condition, PkCondition, Predictor, UltWord, Word,
};

fn ultword_strategy(n: usize) -> impl Strategy<Value = UltWord> {
    (
        prop::collection::vec(0..n as u8, 0..=5),
        prop::collection::vec(0..n as u8, 1..=5),
    )
        .prop_map(move |(pre, per)| {
            UltWord::new(Word::new(n, pre).unwrap(), Word::new(n, per).unwrap()).unwrap()
        })
}

fn table_predictor_strategy(n: usize, depth: usize) -> impl Strategy<Value = Predictor> {
    let count = match n {
        2 => 2u64.pow(((1 << depth) - 1) as u32),
        _ => 81,
    };
    (0..count).prop_map(move |i| Predictor::table_from_index(n, depth, i).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// A hit inside every k-window gives a hit inside every longer window.
    #[test]
    fn window_monotone_in_k(
        pi in table_predictor_strategy(2, 4),
        x in ultword_strategy(2),
        k in 1usize..4,
        extra in 0usize..3,
        m in 0usize..4,
    ) {
        let h = 16;
        let small = check_constant(&pi, &x, k, m, h).unwrap();
        let large = check_constant(&pi, &x, k + extra, m, h).unwrap();
        if small.verdict {
            prop_assert!(large.verdict);
        }
    }

    /// Blocks are windows, so constant prediction from m implies weak
    /// prediction from ⌈m/k⌉.
    #[test]
    fn strong_implies_weak(
        pi in table_predictor_strategy(2, 4),
        x in ultword_strategy(2),
        k in 1usize..4,
        m in 0usize..5,
    ) {
        let h = 20;
        let strong = check_constant(&pi, &x, k, m, h).unwrap();
        if strong.verdict {
            let weak = check_weak(&pi, &x, k, m.div_ceil(k), h).unwrap();
            prop_assert!(weak.verdict);
        }
    }

    /// The exact infinite-horizon decision matches finite checking: a true
    /// verdict with onset m holds at every horizon, m is minimal, and a
    /// false verdict shows a violation beyond any start within one cycle.
    #[test]
    fn exact_matches_finite_horizons(
        table in prop::collection::vec(0u8..2, 8),
        phase in 1usize..3,
        x in ultword_strategy(2),
        k in 1usize..4,
    ) {
        let window = if table.len() / phase >= 4 { 2 } else { 1 };
        let values = table[..(1 << window) * phase].to_vec();
        let pi = Predictor::finite_memory(2, window, phase, values).unwrap();
        let (verdict, onset) = check_constant_exact(&pi, &x, k).unwrap();
        let cycle = x.preperiod().len() + window
            + [x.period().len(), phase].iter().product::<usize>()
            + k;
        let h = 2 * cycle + k;
        match (verdict, onset) {
            (true, Some(m)) => {
                prop_assert!(check_constant(&pi, &x, k, m, h).unwrap().verdict);
                if m > 0 {
                    prop_assert!(!check_constant(&pi, &x, k, m - 1, h).unwrap().verdict);
                }
            }
            (false, None) => {
                // some window beyond any fixed start misses
                for m in [0, k, cycle] {
                    prop_assert!(!check_constant(&pi, &x, k, m, h).unwrap().verdict);
                }
            }
            other => prop_assert!(false, "inconsistent exact answer {other:?}"),
        }
    }

    /// The diagonal evader misses everywhere, for every window length and
    /// every start.
    #[test]
    fn diagonal_evader_always_rejected(
        pi in table_predictor_strategy(2, 5),
        k in 1usize..4,
    ) {
        let h = 12;
        let x = diagonal_evader(&pi, h);
        for m in 0..=h - k {
            let r = check_constant(&pi, &x, k, m, h).unwrap();
            prop_assert!(!r.verdict);
            prop_assert_eq!(r.witness, Some(m));
        }
    }

    /// Round-robin scheduling makes every designated block a complete
    /// miss for its predictor.
    #[test]
    fn round_robin_blocks_are_all_miss(
        indices in prop::collection::vec(0u64..128, 1..4),
        k in 1usize..4,
    ) {
        let predictors: Vec<Predictor> = indices
            .iter()
            .map(|&i| Predictor::table_from_index(2, 3, i).unwrap())
            .collect();
        let blocks = 2 * predictors.len();
        let h = blocks * k;
        let x = round_robin_evader(&predictors, k, h).unwrap();
        for (s, pi) in predictors.iter().enumerate() {
            let mut t = s;
            while (t + 1) * k <= h {
                for i in t * k..(t + 1) * k {
                    prop_assert_ne!(pi.predict(x.prefix(i).symbols()), x.at(i));
                }
                t += predictors.len();
            }
        }
    }

    /// Structural equality of normal forms coincides with agreement up to
    /// |pre₁| + |pre₂| + lcm(|per₁|, |per₂|).
    #[test]
    fn ultword_equality_matches_lcm_bound(
        a in ultword_strategy(2),
        b in ultword_strategy(2),
    ) {
        let bound = a.equality_bound(&b);
        let agree = (0..bound).all(|i| a.at(i) == b.at(i));
        prop_assert_eq!(agree, a == b);
        prop_assert_eq!(a.first_difference(&b).is_none(), a == b);
    }
}

fn random_condition(rng: &mut Rng, k: usize, ell: usize) -> PkCondition {
    let mut sigma = std::collections::BTreeMap::new();
    for len in 0..=ell {
        for r in 0..1u64 << len {
            sigma.insert(Word::from_rank(2, len, r), rng.symbol(2));
        }
    }
    let mut members = Vec::new();
    let count = rng.below(3) as usize;
    let mut used = std::collections::BTreeSet::new();
    for _ in 0..count {
        let p = rng.word(2, ell);
        if !used.insert(p.clone()) {
            continue;
        }
        let next = sigma[&p];
        let mut pre = p.symbols().to_vec();
        pre.push(next);
        for _ in 0..rng.below(4) {
            pre.push(rng.symbol(2));
        }
        let per_len = 1 + rng.below(3) as usize;
        let per = rng.word(2, per_len);
        members.push(UltWord::new(Word::new(2, pre).unwrap(), per).unwrap());
    }
    PkCondition::new(k, ell, sigma, members)
}

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Word>();
    assert_send_sync::<UltWord>();
    assert_send_sync::<Predictor>();
    assert_send_sync::<predcomb_core::BinPredictorFamily>();
    assert_send_sync::<predcomb_core::GFamily>();
    assert_send_sync::<predcomb_core::PrefixTree>();
    assert_send_sync::<predcomb_core::BlockMap>();
    assert_send_sync::<PkCondition>();
}

#[test]
fn extends_is_reflexive_and_transitive_on_samples() {
    let mut rng = Rng::new(2024);
    let mut checked = 0;
    while checked < 200 {
        let k = 1 + rng.below(3) as usize;
        let ell = rng.below(3) as usize;
        let p0 = random_condition(&mut rng, k, ell);
        if !validate_condition(&p0).valid {
            continue;
        }
        assert!(extends(&p0, &p0).unwrap().holds, "reflexivity");

        // grow twice by joining fresh same-bucket conditions
        let q1 = match grow(&mut rng, &p0) {
            Some(q) => q,
            None => continue,
        };
        let q2 = match grow(&mut rng, &q1) {
            Some(q) => q,
            None => continue,
        };
        assert!(extends(&q1, &p0).unwrap().holds);
        assert!(extends(&q2, &q1).unwrap().holds);
        assert!(extends(&q2, &p0).unwrap().holds, "transitivity");
        checked += 1;
    }
}

fn grow(rng: &mut Rng, p: &PkCondition) -> Option<PkCondition> {
    let mut other = random_condition(rng, p.k, p.ell);
    other.sigma = p.sigma.clone();
    // re-anchor sampled members to the shared table
    other.members.retain(|f| {
        p.sigma.get(&f.prefix(p.ell)) == Some(&f.at(p.ell))
            && !p.members.iter().any(|g| g.prefix(p.ell) == f.prefix(p.ell))
    });
    other.members.dedup_by(|a, b| a.prefix(p.ell) == b.prefix(p.ell));
    if !validate_condition(&other).valid {
        return None;
    }
    common_extension(&[p.clone(), other]).ok()
}
