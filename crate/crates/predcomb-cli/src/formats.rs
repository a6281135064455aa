//! JSON forms of the core data types.
//!
//! Words travel as digit strings (`"0121"`), eventually periodic words as
//! `pre(period)`, predictor tables as prefix→symbol maps, encoder families
//! as bit strings per component, trees as their maximal words, and poset
//! conditions as `(k, ell, sigma, F)` objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use predcomb_core::forcing::SharpnessWitness;
use predcomb_core::oracles::{FragmentMiss, WindowCertificate};
use predcomb_core::trees::{BlockTree, PrefixTree};
use predcomb_core::{Error, GFamily, PkCondition, Predictor, Result, UltWord, Word};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictorTableJson {
    pub n: usize,
    pub depth: usize,
    pub table: BTreeMap<String, String>,
}

pub fn predictor_to_json(pi: &Predictor) -> Result<PredictorTableJson> {
    let depth = pi.table_depth().ok_or(Error::NotFiniteMemory)?;
    let mut table = BTreeMap::new();
    for (w, s) in pi.table_entries() {
        table.insert(w.to_string(), s.to_string());
    }
    Ok(PredictorTableJson { n: pi.alphabet_size(), depth, table })
}

pub fn predictor_from_json(j: &PredictorTableJson) -> Result<Predictor> {
    let mut entries = Vec::with_capacity(j.table.len());
    for (prefix, symbol) in &j.table {
        let w = Word::parse(j.n, prefix)?;
        let s: u8 = symbol.parse().map_err(|_| Error::Parse {
            what: "predictor table value",
            detail: symbol.clone(),
        })?;
        entries.push((w, s));
    }
    Predictor::from_table(j.n, j.depth, &entries)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GFamilyJson {
    pub n: usize,
    pub k: usize,
    /// One bit string of length `n^k` per component, inputs in
    /// lexicographic order.
    pub tables: Vec<String>,
}

pub fn g_family_to_json(g: &GFamily) -> GFamilyJson {
    let tables = (0..g.window())
        .map(|i| g.table_bits(i).iter().map(|b| char::from(b'0' + b)).collect())
        .collect();
    GFamilyJson { n: g.alphabet_size(), k: g.window(), tables }
}

pub fn g_family_from_json(j: &GFamilyJson) -> Result<GFamily> {
    let rows: Vec<Vec<u8>> = j
        .tables
        .iter()
        .map(|row| {
            row.chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(Error::Parse {
                        what: "encoder table bit",
                        detail: other.to_string(),
                    }),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    GFamily::from_table_bits(j.n, j.k, &rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrefixTreeJson {
    pub n: usize,
    pub words: Vec<String>,
}

pub fn prefix_tree_to_json(t: &PrefixTree) -> PrefixTreeJson {
    PrefixTreeJson {
        n: t.alphabet_size(),
        words: t.leaves().map(|w| w.to_string()).collect(),
    }
}

pub fn prefix_tree_from_json(j: &PrefixTreeJson) -> Result<PrefixTree> {
    let words: Vec<Word> =
        j.words.iter().map(|s| Word::parse(j.n, s)).collect::<Result<_>>()?;
    PrefixTree::from_words(&words)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockTreeJson {
    pub n: usize,
    pub words: Vec<String>,
    pub marks: Vec<usize>,
    pub bounds: Vec<usize>,
}

pub fn block_tree_to_json(t: &BlockTree) -> BlockTreeJson {
    let base = prefix_tree_to_json(&t.tree);
    BlockTreeJson { n: base.n, words: base.words, marks: t.marks.clone(), bounds: t.bounds.clone() }
}

pub fn block_tree_from_json(j: &BlockTreeJson) -> Result<BlockTree> {
    let tree = prefix_tree_from_json(&PrefixTreeJson { n: j.n, words: j.words.clone() })?;
    BlockTree::new(tree, j.marks.clone(), j.bounds.clone())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionJson {
    pub k: usize,
    pub ell: usize,
    pub sigma: BTreeMap<String, u8>,
    #[serde(rename = "F")]
    pub members: Vec<String>,
}

pub fn condition_to_json(p: &PkCondition) -> ConditionJson {
    ConditionJson {
        k: p.k,
        ell: p.ell,
        sigma: p.sigma.iter().map(|(w, &v)| (w.to_string(), v)).collect(),
        members: p.members.iter().map(|f| f.to_string()).collect(),
    }
}

pub fn condition_from_json(j: &ConditionJson) -> Result<PkCondition> {
    let mut sigma = BTreeMap::new();
    for (prefix, &v) in &j.sigma {
        sigma.insert(Word::parse(2, prefix)?, v);
    }
    let members: Vec<UltWord> =
        j.members.iter().map(|s| UltWord::parse(2, s)).collect::<Result<_>>()?;
    Ok(PkCondition::new(j.k, j.ell, sigma, members))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub k: usize,
    pub max_hit_count: usize,
    /// `(fragment, missed patterns)` pairs over the window tree.
    pub fragments: Vec<(u64, Vec<String>)>,
}

pub fn certificate_to_json(c: &WindowCertificate) -> CertificateJson {
    CertificateJson {
        k: c.k,
        max_hit_count: c.max_hit_count,
        fragments: c
            .fragments
            .iter()
            .map(|FragmentMiss { fragment, missed }| {
                (*fragment, missed.iter().map(|w| w.to_string()).collect())
            })
            .collect(),
    }
}

/// Common shape for oracle reports and certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReportJson {
    pub claim: String,
    pub parameters: BTreeMap<String, u64>,
    pub mode: String,
    pub seed: Option<u64>,
    pub counts: BTreeMap<String, u64>,
    pub witnesses: Vec<serde_json::Value>,
}

pub fn a_set_report_to_json(
    r: &predcomb_core::oracles::ASetBoundReport,
) -> OracleReportJson {
    OracleReportJson {
        claim: "every level-k extension set stays below 2^k".to_string(),
        parameters: [
            ("n".to_string(), r.n as u64),
            ("k".to_string(), r.k as u64),
            ("depth".to_string(), r.depth as u64),
        ]
        .into_iter()
        .collect(),
        mode: r.mode.clone(),
        seed: r.seed,
        counts: [
            ("families".to_string(), r.families_checked),
            ("prefixes".to_string(), r.prefixes_checked),
            ("max_observed".to_string(), r.max_observed as u64),
        ]
        .into_iter()
        .collect(),
        witnesses: Vec::new(),
    }
}

pub fn certificate_to_oracle_json(c: &WindowCertificate) -> OracleReportJson {
    OracleReportJson {
        claim: "no predictor fragment hits every window pattern".to_string(),
        parameters: [("k".to_string(), c.k as u64)].into_iter().collect(),
        mode: "exhaustive".to_string(),
        seed: None,
        counts: [
            ("fragments".to_string(), c.fragments.len() as u64),
            ("max_hit_count".to_string(), c.max_hit_count as u64),
        ]
        .into_iter()
        .collect(),
        witnesses: c
            .fragments
            .iter()
            .map(|f| {
                serde_json::json!({
                    "fragment": f.fragment,
                    "missed": f.missed.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessJson {
    pub k: usize,
    pub forced_level: usize,
    pub conditions: Vec<ConditionJson>,
    pub certificate: CertificateJson,
}

pub fn sharpness_to_json(w: &SharpnessWitness) -> SharpnessJson {
    SharpnessJson {
        k: w.certificate.k,
        forced_level: w.forced_level,
        conditions: w.conditions.iter().map(condition_to_json).collect(),
        certificate: certificate_to_json(&w.certificate),
    }
}
