//! Direct exhaustive confirmation that the sharpness witness has no
//! common extension at the minimal admissible level: every total table
//! there either breaks validity or misses a window for some member.

use std::collections::BTreeMap;

use predcomb_core::{
    extends, sharpness_witness, validate_condition, EnumBudget, PkCondition, UltWord, Word,
};

fn all_tables(level: usize) -> impl Iterator<Item = BTreeMap<Word, u8>> {
    let dom: Vec<Word> = (0..=level)
        .flat_map(|len| (0..1u64 << len).map(move |r| Word::from_rank(2, len, r)))
        .collect();
    let bits = dom.len();
    (0..1u64 << bits).map(move |mask| {
        dom.iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), ((mask >> i) & 1) as u8))
            .collect()
    })
}

#[test]
fn no_table_extends_all_witness_conditions_at_the_forced_level() {
    let budget = EnumBudget::default();
    for k in 1..=2usize {
        let w = sharpness_witness(k, 0, &budget).unwrap();
        let m = w.forced_level;
        let members: Vec<UltWord> =
            w.conditions.iter().map(|c| c.members[0].clone()).collect();
        let mut admissible = 0u64;
        for tau in all_tables(m) {
            let q = PkCondition::new(k, m, tau, members.clone());
            if !validate_condition(&q).valid {
                continue;
            }
            admissible += 1;
            let extends_all =
                w.conditions.iter().all(|p| extends(&q, p).unwrap().holds);
            assert!(!extends_all, "k={k}: a common extension exists at level {m}");
        }
        assert!(admissible > 0, "k={k}: the enumeration must reach valid candidates");
    }
}

#[test]
fn dropping_any_condition_admits_a_table_at_the_same_level() {
    // the converse at the same exhaustive scale: without one pattern, a
    // common extension exists already at the forced level
    let budget = EnumBudget::default();
    for k in 1..=2usize {
        let w = sharpness_witness(k, 0, &budget).unwrap();
        let m = w.forced_level;
        for drop in 0..w.conditions.len() {
            let rest: Vec<&PkCondition> = w
                .conditions
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, c)| c)
                .collect();
            let members: Vec<UltWord> = rest.iter().map(|c| c.members[0].clone()).collect();
            let found = all_tables(m).any(|tau| {
                let q = PkCondition::new(k, m, tau, members.clone());
                validate_condition(&q).valid
                    && rest.iter().all(|p| extends(&q, p).unwrap().holds)
            });
            assert!(found, "k={k} drop={drop}: no extension found at level {m}");
        }
    }
}
