//! Per-document content statistics and result summaries, plus the CSV
//! aggregation command over saved reports.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::extract::AcronymTable;
use crate::preprocess::SentenceStream;
use crate::report::{EntryReport, RunReport};

/// Size measures of one processed document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContentStats {
    /// Characters of the text that entered sentence splitting.
    pub character_count: usize,
    /// Whitespace tokens minus stopword tokens.
    pub word_count: usize,
    pub sentence_count: usize,
    /// Occurrences that survived the exclusion filters.
    pub acronym_occurrence_count: usize,
    pub unique_acronym_count: usize,
}

impl ContentStats {
    pub fn zero() -> Self {
        Self {
            character_count: 0,
            word_count: 0,
            sentence_count: 0,
            acronym_occurrence_count: 0,
            unique_acronym_count: 0,
        }
    }
}

/// Extraction effectiveness of one run over one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSummary {
    pub mode: String,
    pub total_acronyms: usize,
    pub expansions_found: usize,
    pub percent_found: f64,
    /// True when there were no acronyms at all (percent is reported as 0).
    pub empty: bool,
}

/// Count characters, non-stopword words, sentences, and filtered acronym
/// occurrences for one document.
pub fn content_stats(
    text: &str,
    stream: &SentenceStream,
    table: &AcronymTable,
    stopwords: &HashSet<String>,
) -> ContentStats {
    ContentStats {
        character_count: text.chars().count(),
        word_count: count_content_words(text, stopwords),
        sentence_count: stream.sentences.len(),
        acronym_occurrence_count: table.entries.values().map(|e| e.occurrences.len()).sum(),
        unique_acronym_count: table.entries.len(),
    }
}

fn count_content_words(text: &str, stopwords: &HashSet<String>) -> usize {
    text.split_whitespace()
        .filter(|token| {
            let normalized: String = token
                .trim_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase();
            !stopwords.contains(&normalized)
        })
        .count()
}

/// Summarize report entries: total non-excluded keys, keys with at least
/// one expansion, and the exact fraction found.
pub fn result_summary(mode: &str, entries: &[EntryReport]) -> ResultSummary {
    let total = entries.len();
    let found = entries.iter().filter(|e| !e.expansions.is_empty()).count();
    let (percent, empty) = if total == 0 {
        (0.0, true)
    } else {
        (found as f64 / total as f64, false)
    };
    ResultSummary {
        mode: mode.to_string(),
        total_acronyms: total,
        expansions_found: found,
        percent_found: percent,
        empty,
    }
}

#[derive(Debug, Default)]
struct Aggregate {
    reports: usize,
    documents: usize,
    total_acronyms: usize,
    expansions_found: usize,
    character_count: usize,
    word_count: usize,
    sentence_count: usize,
    acronym_occurrence_count: usize,
    unique_acronym_count: usize,
}

/// Aggregate saved reports into a CSV with one row per (domain, mode); the
/// domain of a report is the name of the directory holding it.
pub fn write_stats_csv(report_paths: &[std::path::PathBuf], out: &Path) -> Result<(), String> {
    let mut groups: BTreeMap<(String, String), Aggregate> = BTreeMap::new();
    for path in report_paths {
        let raw = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let report: RunReport =
            serde_json::from_str(&raw).map_err(|e| format!("{}: {e}", path.display()))?;
        let domain = path
            .parent()
            .and_then(|p| p.file_name())
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| ".".to_string());
        let agg = groups.entry((domain, report.mode.clone())).or_default();
        agg.reports += 1;
        for doc in &report.documents {
            agg.documents += 1;
            agg.total_acronyms += doc.summary.total_acronyms;
            agg.expansions_found += doc.summary.expansions_found;
            agg.character_count += doc.content_stats.character_count;
            agg.word_count += doc.content_stats.word_count;
            agg.sentence_count += doc.content_stats.sentence_count;
            agg.acronym_occurrence_count += doc.content_stats.acronym_occurrence_count;
            agg.unique_acronym_count += doc.content_stats.unique_acronym_count;
        }
    }

    let mut writer = csv::Writer::from_path(out).map_err(|e| e.to_string())?;
    writer
        .write_record([
            "domain",
            "mode",
            "reports",
            "documents",
            "total_acronyms",
            "expansions_found",
            "percent_found",
            "avg_character_count",
            "avg_word_count",
            "avg_sentence_count",
            "avg_acronym_occurrence_count",
            "avg_unique_acronym_count",
        ])
        .map_err(|e| e.to_string())?;
    for ((domain, mode), agg) in &groups {
        let docs = agg.documents.max(1) as f64;
        let percent = if agg.total_acronyms == 0 {
            0.0
        } else {
            agg.expansions_found as f64 / agg.total_acronyms as f64
        };
        writer
            .write_record([
                domain.clone(),
                mode.clone(),
                agg.reports.to_string(),
                agg.documents.to_string(),
                agg.total_acronyms.to_string(),
                agg.expansions_found.to_string(),
                format!("{percent:.4}"),
                format!("{:.1}", agg.character_count as f64 / docs),
                format!("{:.1}", agg.word_count as f64 / docs),
                format!("{:.1}", agg.sentence_count as f64 / docs),
                format!("{:.1}", agg.acronym_occurrence_count as f64 / docs),
                format!("{:.1}", agg.unique_acronym_count as f64 / docs),
            ])
            .map_err(|e| e.to_string())?;
    }
    writer.flush().map_err(|e| e.to_string())?;
    Ok(())
}
