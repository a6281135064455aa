//! Quantitative tables over parameter grids.  Rows that would blow the
//! budget are marked, not fatal.

use serde::Serialize;

use predcomb_core::forcing::{bucket_count, bucket_key, PkCondition};
use predcomb_core::oracles::exhaustive_cover_number;
use predcomb_core::trees::max_coverable_size;
use predcomb_core::{EnumBudget, Result, Word};

#[derive(Debug, Clone, Serialize)]
pub struct MaxCoverRow {
    pub n: usize,
    pub k: usize,
    pub value: Option<usize>,
    pub note: String,
}

pub fn table_maxcover(n: usize, ks: &[usize], budget: &EnumBudget) -> Vec<MaxCoverRow> {
    ks.iter()
        .map(|&k| match max_coverable_size(n, k, budget) {
            Ok(v) => MaxCoverRow { n, k, value: Some(v), note: String::new() },
            Err(e) => MaxCoverRow { n, k, value: None, note: format!("{e}") },
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverRow {
    pub n: usize,
    #[serde(rename = "L")]
    pub len: usize,
    pub k: usize,
    pub value: Option<usize>,
    pub note: String,
}

pub fn table_cover(n: usize, len: usize, ks: &[usize], budget: &EnumBudget) -> Vec<CoverRow> {
    ks.iter()
        .map(|&k| match exhaustive_cover_number(n, len, k, budget) {
            Ok(v) => CoverRow { n, len, k, value: Some(v), note: String::new() },
            Err(e) => CoverRow { n, len, k, value: None, note: format!("{e}") },
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketRow {
    pub ell: usize,
    /// Closed-form count of distinct `(ℓ, σ)` keys.
    pub formula: String,
    /// Count by materializing every table and deduplicating keys;
    /// omitted where enumeration is out of budget.
    pub enumerated: Option<u64>,
    pub note: String,
}

pub fn table_buckets(ells: &[usize], budget: &EnumBudget) -> Result<Vec<BucketRow>> {
    let mut rows = Vec::with_capacity(ells.len());
    for &ell in ells {
        let formula = bucket_count(ell);
        let dom_bits = (1u128 << (ell + 1)) - 1;
        let row = if dom_bits <= 22 && budget.admit(formula).is_ok() {
            let mut keys = std::collections::BTreeSet::new();
            for tbl in 0..formula as u64 {
                let mut sigma = std::collections::BTreeMap::new();
                let mut bit = 0;
                for len in 0..=ell {
                    for r in 0..1u64 << len {
                        sigma.insert(Word::from_rank(2, len, r), ((tbl >> bit) & 1) as u8);
                        bit += 1;
                    }
                }
                keys.insert(bucket_key(&PkCondition::new(2, ell, sigma, Vec::new())));
            }
            BucketRow {
                ell,
                formula: formula.to_string(),
                enumerated: Some(keys.len() as u64),
                note: String::new(),
            }
        } else {
            BucketRow {
                ell,
                formula: formula.to_string(),
                enumerated: None,
                note: "enumeration out of budget".to_string(),
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Field-for-field CSV rendering of a serialized table.
pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| serde_json::to_value(r).expect("table rows serialize"))
        .collect();
    let mut out = String::new();
    let Some(first) = values.first() else {
        return Ok(out);
    };
    let obj = first.as_object().expect("table rows are objects");
    let headers: Vec<&String> = obj.keys().collect();
    out.push_str(&headers.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
    out.push('\n');
    for v in &values {
        let obj = v.as_object().expect("table rows are objects");
        let cells: Vec<String> = headers
            .iter()
            .map(|h| match &obj[h.as_str()] {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxcover_values() {
        let budget = EnumBudget::default();
        let rows = table_maxcover(2, &[1, 2, 3], &budget);
        assert_eq!(
            rows.iter().map(|r| r.value.unwrap()).collect::<Vec<_>>(),
            vec![1, 3, 7]
        );
        let rows = table_maxcover(3, &[2], &budget);
        assert_eq!(rows[0].value, Some(5));
    }

    #[test]
    fn cover_values() {
        let budget = EnumBudget::default();
        let rows = table_cover(2, 2, &[1, 2], &budget);
        assert_eq!(
            rows.iter().map(|r| r.value.unwrap()).collect::<Vec<_>>(),
            vec![4, 2]
        );
    }

    #[test]
    fn bucket_rows_match_formula() {
        let budget = EnumBudget::default();
        let rows = table_buckets(&[0, 1, 2, 3], &budget).unwrap();
        let counts: Vec<u64> = rows.iter().map(|r| r.enumerated.unwrap()).collect();
        assert_eq!(counts, vec![2, 8, 128, 32768]);
        for r in &rows {
            assert_eq!(r.formula, r.enumerated.unwrap().to_string());
        }
        let total: u64 = counts.iter().sum();
        assert_eq!(total, 2 + 8 + 128 + 32768);
    }

    #[test]
    fn csv_mirrors_fields() {
        let budget = EnumBudget::default();
        let rows = table_maxcover(2, &[1, 2], &budget);
        let csv = rows_to_csv(&rows).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,k,value,note"));
        assert_eq!(lines.next(), Some("2,1,1,"));
        assert_eq!(lines.next(), Some("2,2,3,"));
    }
}
