//! Acceptance suite: every headline guarantee, run end to end at its
//! stated scale and time budget, one pass/fail line per criterion.
//!
//! Run with `cargo test -p predcomb-cli --test acceptance -- --nocapture`
//! to see the lines as they complete.

use std::time::{Duration, Instant};

use predcomb_cli::suites;
use predcomb_core::oracles::{
    exhaustive_cover_number, greedy_cover_bound, max_coverable_subset_size,
};
use predcomb_core::trees::max_coverable_size;
use predcomb_core::EnumBudget;

struct Outcome {
    name: &'static str,
    passed: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
}

fn run(
    name: &'static str,
    limit_secs: u64,
    body: impl FnOnce() -> Result<(bool, String), predcomb_core::Error>,
) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Outcome { name, passed, elapsed: start.elapsed(), limit: Duration::from_secs(limit_secs), detail }
}

fn suite_outcome(report: &suites::SuiteReport) -> (bool, String) {
    let failed: Vec<&str> = report
        .assertions
        .iter()
        .filter(|a| !a.passed)
        .map(|a| a.name.as_str())
        .collect();
    if failed.is_empty() {
        (true, format!("{} assertions", report.assertions.len()))
    } else {
        (false, failed.join("; "))
    }
}

#[test]
fn acceptance() {
    let budget = EnumBudget::default();
    let mut outcomes = Vec::new();

    outcomes.push(run("1 claim bound", 60, || {
        let report = suites::suite_claim(7, 1000, &budget)?;
        Ok(suite_outcome(&report))
    }));

    outcomes.push(run("2 main theorem harness", 120, || {
        let report = suites::suite_main_theorem(3, 2, 60, 1, 200, 1)?;
        Ok(suite_outcome(&report))
    }));

    outcomes.push(run("3 halving predictor exactness", 120, || {
        let report = suites::suite_halving(&budget)?;
        let (ok, detail) = suite_outcome(&report);
        let k2 = report.parameters.get("trees_k2").copied().unwrap_or(0);
        let k3 = report.parameters.get("trees_k3").copied().unwrap_or(0);
        Ok((ok, format!("{detail}; trees k=2: {k2}, k=3: {k3}")))
    }));

    outcomes.push(run("4 per-window counts", 60, || {
        let cases = [(2usize, 1usize, 1usize), (2, 2, 3), (2, 3, 7), (3, 2, 5)];
        let mut bad = Vec::new();
        for (n, k, want) in cases {
            let got = max_coverable_size(n, k, &budget)?;
            if got != want {
                bad.push(format!("({n},{k})={got}, want {want}"));
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { "4 values".into() } else { bad.join("; ") }))
    }));

    outcomes.push(run("5 linkedness", 120, || {
        let report = suites::suite_linked(500, 11)?;
        Ok(suite_outcome(&report))
    }));

    outcomes.push(run("6 sharpness", 60, || {
        let report = suites::suite_sharpness(&budget)?;
        Ok(suite_outcome(&report))
    }));

    outcomes.push(run("7 evasion", 60, || {
        let report = suites::suite_evasion(500, 13, &budget)?;
        Ok(suite_outcome(&report))
    }));

    outcomes.push(run("8 finite cover table", 120, || {
        let mut bad = Vec::new();
        for (len, k, want) in [(2usize, 1usize, 4usize), (2, 2, 2)] {
            let got = exhaustive_cover_number(2, len, k, &budget)?;
            if got != want {
                bad.push(format!("cover(2,{len},{k})={got}, want {want}"));
            }
        }
        let mut values = Vec::new();
        for len in 1..=3usize {
            let mut prev = None;
            for k in 1..=len {
                let v = exhaustive_cover_number(2, len, k, &budget)?;
                let lower =
                    (1usize << len).div_ceil(max_coverable_subset_size(2, len, k, &budget)?);
                let upper = greedy_cover_bound(2, len, k, &budget)?;
                if !(lower <= v && v <= upper) {
                    bad.push(format!("sandwich broken at L={len} k={k}: {lower},{v},{upper}"));
                }
                if let Some(p) = prev {
                    if v > p {
                        bad.push(format!("not non-increasing at L={len} k={k}"));
                    }
                }
                prev = Some(v);
                values.push(format!("L{len}k{k}={v}"));
            }
        }
        Ok((bad.is_empty(), if bad.is_empty() { values.join(" ") } else { bad.join("; ") }))
    }));

    let mut all_ok = true;
    for o in &outcomes {
        let within = o.elapsed <= o.limit;
        let status = if o.passed && within { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} ({:.2?} of {:?} budget) — {}",
            o.name, o.elapsed, o.limit, o.detail
        );
        all_ok &= o.passed && within;
    }
    assert!(all_ok, "some acceptance criterion failed");
}
