//! File formats: candidate pools, rankings, audit reports, sweep results.
//!
//! All files are UTF-8. Candidate files are CSV with header
//! `id,attribute,score` or a JSON array of objects with the same keys,
//! chosen by file extension. Rankings are CSV with header
//! `rank,id,attribute,score`. Sweep results are CSV with header
//! `experiment,f,k,trial,value` (the mean rows carry `mean` in the trial
//! column), plus a `manifest.json`.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::metrics::FairnessReport;
use crate::model::{Candidate, CandidatePool, RankEntry, Ranking};
use crate::sim::{ExperimentResult, Manifest, ScenarioConfig};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, detail: impl ToString) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        detail: detail.to_string(),
    }
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

#[derive(Debug, Deserialize)]
struct CandidateRow {
    id: String,
    attribute: String,
    score: f64,
}

/// Reads a candidate pool from CSV (default) or JSON (`.json`). The
/// attribute domain is the order of first appearance; the query tag is the
/// file stem.
pub fn read_pool(path: impl AsRef<Path>) -> Result<CandidatePool> {
    let path = path.as_ref();
    let query_id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("pool")
        .to_string();
    let rows: Vec<CandidateRow> = if has_extension(path, "json") {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        serde_json::from_str(&text).map_err(|e| parse_err(path, e))?
    } else {
        let mut reader = csv::Reader::from_path(path).map_err(|e| parse_err(path, e))?;
        reader
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(path, e))?
    };
    let candidates = rows
        .into_iter()
        .map(|r| Candidate::new(r.id, r.attribute, r.score))
        .collect();
    CandidatePool::from_candidates(query_id, candidates)
}

/// Serializes a ranking as `rank,id,attribute,score` rows.
pub fn ranking_to_csv_string(ranking: &Ranking) -> String {
    let mut out = String::from("rank,id,attribute,score\n");
    for (i, e) in ranking.entries().iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", i + 1, e.id, e.attribute, e.score));
    }
    out
}

pub fn write_ranking(path: impl AsRef<Path>, ranking: &Ranking) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, ranking_to_csv_string(ranking)).map_err(|e| io_err(path, e))
}

#[derive(Debug, Deserialize)]
struct RankingRow {
    rank: usize,
    id: String,
    attribute: String,
    score: f64,
}

/// Reads and validates a ranking file; the rank column must run 1..n.
pub fn read_ranking(path: impl AsRef<Path>) -> Result<Ranking> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| parse_err(path, e))?;
    let mut entries = Vec::new();
    for (i, row) in reader.deserialize::<RankingRow>().enumerate() {
        let row = row.map_err(|e| parse_err(path, e))?;
        if row.rank != i + 1 {
            return Err(parse_err(
                path,
                format!("rank column must be sequential; found {} at line {}", row.rank, i + 2),
            ));
        }
        entries.push(RankEntry {
            id: crate::model::CandidateId::new(row.id),
            attribute: crate::model::AttributeValue::new(row.attribute),
            score: row.score,
        });
    }
    Ranking::from_entries(entries)
}

/// JSON report: the array of per-k audits.
pub fn write_reports_json(path: impl AsRef<Path>, reports: &[FairnessReport]) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(reports)
        .map_err(|e| parse_err(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Flat CSV report: one row per candidate verdict and one per group verdict.
pub fn reports_to_csv_string(reports: &[FairnessReport]) -> String {
    let mut out = String::from(
        "kind,k,id,attribute,benefited,individually_unfair,favored,rank_difference,\
         count_reference_topk,count_platform_topk,unfair,group_favored,skew\n",
    );
    for report in reports {
        for v in &report.candidates {
            out.push_str(&format!(
                "candidate,{},{},{},{},{},{},{},,,,,\n",
                report.k,
                v.id,
                v.attribute,
                v.benefited,
                v.individually_unfair,
                v.favored,
                v.rank_difference.map_or(String::new(), |d| d.to_string()),
            ));
        }
        for g in &report.groups {
            out.push_str(&format!(
                "group,{},,{},,,,,{},{},{},{},{}\n",
                report.k,
                g.attribute,
                g.count_reference_topk,
                g.count_platform_topk,
                g.unfair,
                g.favored,
                g.skew,
            ));
        }
    }
    out
}

pub fn write_reports_csv(path: impl AsRef<Path>, reports: &[FairnessReport]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, reports_to_csv_string(reports)).map_err(|e| io_err(path, e))
}

/// Reads a sweep config from TOML (default) or JSON (`.json`).
pub fn read_scenario_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let config: ScenarioConfig = if has_extension(path, "json") {
        serde_json::from_str(&text).map_err(|e| parse_err(path, e))?
    } else {
        toml::from_str(&text).map_err(|e| parse_err(path, e))?
    };
    config.validate()?;
    Ok(config)
}

/// Serializes result rows in stable order: experiment, f, k, trial, with the
/// per-cell mean rows labelled `mean`.
pub fn results_to_csv_string(result: &ExperimentResult) -> String {
    let mut out = String::from("experiment,f,k,trial,value\n");
    for row in result.sorted_rows() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.experiment,
            row.f,
            row.k.map_or(String::new(), |k| k.to_string()),
            row.trial.map_or_else(|| "mean".to_string(), |t| t.to_string()),
            row.value,
        ));
    }
    out
}

pub fn write_results_csv(path: impl AsRef<Path>, result: &ExperimentResult) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, results_to_csv_string(result)).map_err(|e| io_err(path, e))
}

pub fn manifest_to_json_string(manifest: &Manifest) -> String {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    text
}

pub fn write_manifest(path: impl AsRef<Path>, manifest: &Manifest) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, manifest_to_json_string(manifest)).map_err(|e| io_err(path, e))
}
