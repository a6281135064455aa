//! Narrative end-to-end traces in JSON, for reading rather than parsing.

use serde::Serialize;

use crate::formats::{condition_to_json, ConditionJson};
use predcomb_core::forcing::PkCondition;
use predcomb_core::sampling::Rng;
use predcomb_core::{
    common_extension, extends, psi_explain, round_robin_evader, verify_main_theorem,
    BinPredictorFamily, Result, UltWord,
};

#[derive(Debug, Clone, Serialize)]
pub struct WindowTrace {
    pub start: usize,
    /// First position inside the window where ψ guesses correctly.
    pub hit_at: usize,
    /// The halving level that produced the hit decision.
    pub level: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Thm1Demo {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "H")]
    pub h: usize,
    pub m0: usize,
    pub seed: u64,
    pub word: String,
    pub prefix: String,
    pub windows: Vec<WindowTrace>,
    pub summary: String,
}

/// Picks a seeded word, builds its encoding-tracking family, runs the
/// halving predictor, and traces the first hit of every window.
pub fn demo_thm1(n: usize, k: usize, h: usize, m0: usize, seed: u64) -> Result<Thm1Demo> {
    let mut rng = Rng::new(seed);
    let y = rng.ultword(n, 6, 8);
    let fam = BinPredictorFamily::tracking(y.clone(), k)?;
    let report = verify_main_theorem(&y, &fam, m0, h)?;
    let start = (m0 + 1) * k;
    let mut windows = Vec::new();
    let mut a = start;
    while a + k <= h - k {
        let mut hit_at = a;
        let mut level = 0;
        for i in a..a + k {
            let d = psi_explain(&fam, &y.prefix(i))?;
            if d.chosen == y.at(i) {
                hit_at = i;
                level = d.level;
                break;
            }
        }
        windows.push(WindowTrace { start: a, hit_at, level });
        a += 1;
    }
    let summary = if report.verdict {
        format!("all windows hit from position {start}")
    } else {
        format!("window {:?} missed", report.witness)
    };
    Ok(Thm1Demo {
        n,
        k,
        h,
        m0,
        seed,
        word: y.to_string(),
        prefix: y.prefix(h).to_string(),
        windows,
        summary,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockTrace {
    pub block: usize,
    pub predictor: usize,
    pub all_miss: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvaderDemo {
    pub k: usize,
    pub predictors: usize,
    #[serde(rename = "H")]
    pub h: usize,
    pub seed: u64,
    pub word: String,
    pub blocks: Vec<BlockTrace>,
    pub summary: String,
}

/// Builds the round-robin evader against seeded predictors and traces the
/// per-block all-miss schedule.
pub fn demo_evader(k: usize, predictors: usize, h: usize, seed: u64) -> Result<EvaderDemo> {
    let mut rng = Rng::new(seed);
    let pool: Vec<_> = (0..predictors).map(|_| rng.table_predictor(2, 5)).collect();
    let h = (h / k) * k;
    let x = round_robin_evader(&pool, k, h)?;
    let mut blocks = Vec::new();
    let mut schedule_ok = true;
    for t in 0..h / k {
        let s = t % pool.len();
        let all_miss =
            (t * k..(t + 1) * k).all(|i| pool[s].predict(x.prefix(i).symbols()) != x.at(i));
        schedule_ok &= all_miss;
        blocks.push(BlockTrace { block: t, predictor: s, all_miss });
    }
    let summary = if schedule_ok {
        format!("{predictors} interleaved all-miss block schedules over {} blocks", h / k)
    } else {
        "schedule violated".to_string()
    };
    Ok(EvaderDemo { k, predictors, h, seed, word: x.to_string(), blocks, summary })
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberWindows {
    pub member: String,
    /// `(window start, position hit)` pairs over the new levels.
    pub hits: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionDemo {
    pub k: usize,
    pub inputs: Vec<ConditionJson>,
    pub extension: ConditionJson,
    pub members: Vec<MemberWindows>,
    pub summary: String,
}

/// The worked three-condition common extension: one bucket at level 0,
/// three reals separating at level 3, every window between hit.
pub fn demo_extension(k: usize) -> Result<ExtensionDemo> {
    let sigma = PkCondition::uniform_table(0, 0);
    let words = ["000(0)", "001(0)", "010(0)"];
    let conditions: Vec<PkCondition> = words
        .iter()
        .map(|w| Ok(PkCondition::new(k, 0, sigma.clone(), vec![UltWord::parse(2, w)?])))
        .collect::<Result<_>>()?;
    let q = common_extension(&conditions)?;
    let mut members = Vec::new();
    for p in &conditions {
        let f = &p.members[0];
        let mut hits = Vec::new();
        let mut a = p.ell + 1;
        while a + k <= q.ell {
            let hit = (a..a + k)
                .find(|&i| q.sigma.get(&f.prefix(i)) == Some(&f.at(i)))
                .expect("extension was verified");
            hits.push((a, hit));
            a += 1;
        }
        assert!(extends(&q, p)?.holds);
        members.push(MemberWindows { member: f.to_string(), hits });
    }
    let summary = format!(
        "common extension at level {} hits all {} members in every window",
        q.ell,
        members.len()
    );
    Ok(ExtensionDemo {
        k,
        inputs: conditions.iter().map(condition_to_json).collect(),
        extension: condition_to_json(&q),
        members,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm1_demo_reaches_conclusion() {
        let d = demo_thm1(3, 2, 60, 1, 2).unwrap();
        assert_eq!(d.summary, "all windows hit from position 4");
        assert!(!d.windows.is_empty());
        for w in &d.windows {
            assert!(w.hit_at < w.start + 2);
        }
    }

    #[test]
    fn evader_demo_schedules() {
        let d = demo_evader(2, 3, 24, 7).unwrap();
        assert!(d.blocks.iter().all(|b| b.all_miss));
        assert_eq!(d.blocks.len(), 12);
        assert_eq!(d.summary, "3 interleaved all-miss block schedules over 12 blocks");
    }

    #[test]
    fn extension_demo_matches_worked_example() {
        let d = demo_extension(2).unwrap();
        assert_eq!(d.extension.ell, 3);
        // each member is hit somewhere in the window [1, 3)
        for m in &d.members {
            assert_eq!(m.hits.len(), 1);
            assert_eq!(m.hits[0].0, 1);
        }
    }
}
