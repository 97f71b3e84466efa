//! Machine-readable run reports: schema version 1.
//!
//! Reports are deterministic (struct fields serialize in declaration order,
//! entry lists preserve extraction order, no timestamps) and are written via
//! temp-file-then-rename.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::{ContentStats, ResultSummary};
use crate::extract::{ExpansionRecord, Method};

pub const SCHEMA_VERSION: &str = "1";

/// One acronym key and everything resolved for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub canonical: String,
    pub occurrences: usize,
    pub expansions: Vec<ExpansionRecord>,
    /// Present only when nothing resolved the key.
    pub context: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionReport {
    pub canonical: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentReport {
    pub source_id: String,
    pub entries: Vec<EntryReport>,
    pub exclusions: Vec<ExclusionReport>,
    pub content_stats: ContentStats,
    pub summary: ResultSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub documents: usize,
    pub total_acronyms: usize,
    pub expansions_found: usize,
    pub percent_found: f64,
    pub avg_character_count: f64,
    pub avg_word_count: f64,
    pub avg_sentence_count: f64,
    pub avg_acronym_occurrence_count: f64,
    pub avg_unique_acronym_count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: String,
    pub mode: String,
    pub documents: Vec<DocumentReport>,
    pub corpus: CorpusSummary,
}

impl RunReport {
    pub fn new(mode: &str, documents: Vec<DocumentReport>) -> Self {
        let corpus = corpus_summary(&documents);
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            mode: mode.to_string(),
            documents,
            corpus,
        }
    }
}

fn corpus_summary(documents: &[DocumentReport]) -> CorpusSummary {
    let n = documents.len();
    let divisor = n.max(1) as f64;
    let total: usize = documents.iter().map(|d| d.summary.total_acronyms).sum();
    let found: usize = documents.iter().map(|d| d.summary.expansions_found).sum();
    let sum = |f: fn(&ContentStats) -> usize| -> f64 {
        documents.iter().map(|d| f(&d.content_stats)).sum::<usize>() as f64 / divisor
    };
    CorpusSummary {
        documents: n,
        total_acronyms: total,
        expansions_found: found,
        percent_found: if total == 0 {
            0.0
        } else {
            found as f64 / total as f64
        },
        avg_character_count: sum(|s| s.character_count),
        avg_word_count: sum(|s| s.word_count),
        avg_sentence_count: sum(|s| s.sentence_count),
        avg_acronym_occurrence_count: sum(|s| s.acronym_occurrence_count),
        avg_unique_acronym_count: sum(|s| s.unique_acronym_count),
    }
}

/// Check the structural invariants the schema promises.
pub fn validate_report(report: &RunReport) -> Result<(), String> {
    for doc in &report.documents {
        let mut seen = std::collections::HashSet::new();
        for entry in &doc.entries {
            if !seen.insert(entry.canonical.as_str()) {
                return Err(format!(
                    "{}: duplicate entry for {}",
                    doc.source_id, entry.canonical
                ));
            }
            if !entry.expansions.is_empty() && entry.context.is_some() {
                return Err(format!(
                    "{}: {} has both expansions and a context",
                    doc.source_id, entry.canonical
                ));
            }
        }
        let recomputed = crate::analytics::result_summary(&doc.summary.mode, &doc.entries);
        if recomputed != doc.summary {
            return Err(format!(
                "{}: stored summary disagrees with recomputation",
                doc.source_id
            ));
        }
        if !(0.0..=1.0).contains(&doc.summary.percent_found) {
            return Err(format!("{}: percent out of range", doc.source_id));
        }
    }
    Ok(())
}

/// Serialize the report as pretty JSON and write it atomically
/// (temp file in the target directory, then rename).
pub fn write_report(report: &RunReport, path: &Path) -> io::Result<()> {
    let mut body = serde_json::to_string_pretty(report)?;
    body.push('\n');
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp_path = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp_path, body)?;
    std::fs::rename(&tmp_path, path)?;
    Ok(())
}

/// Convert a run's per-key expansion method into the report wire name.
pub fn method_name(method: Method) -> &'static str {
    match method {
        Method::RegexForward => "regex-forward",
        Method::RegexBackward => "regex-backward",
        Method::Llm => "llm",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::result_summary;

    fn sample_report() -> RunReport {
        let entries = vec![EntryReport {
            canonical: "LLM".into(),
            occurrences: 2,
            expansions: vec![ExpansionRecord {
                text: "large language model".into(),
                method: Method::RegexBackward,
            }],
            context: None,
        }];
        let summary = result_summary("regex", &entries);
        RunReport::new(
            "regex",
            vec![DocumentReport {
                source_id: "doc1".into(),
                entries,
                exclusions: vec![ExclusionReport {
                    canonical: "XVII".into(),
                    reason: "roman".into(),
                }],
                content_stats: ContentStats {
                    character_count: 100,
                    word_count: 20,
                    sentence_count: 3,
                    acronym_occurrence_count: 2,
                    unique_acronym_count: 1,
                },
                summary,
            }],
        )
    }

    #[test]
    fn writing_twice_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let report = sample_report();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        write_report(&report, &a).unwrap();
        write_report(&report, &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    #[test]
    fn empty_report_is_valid_json_with_empty_entries() {
        let report = RunReport::new(
            "regex",
            vec![DocumentReport {
                source_id: "empty".into(),
                entries: Vec::new(),
                exclusions: Vec::new(),
                content_stats: ContentStats::zero(),
                summary: result_summary("regex", &[]),
            }],
        );
        assert!(validate_report(&report).is_ok());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.json");
        write_report(&report, &path).unwrap();
        let parsed: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed["documents"][0]["entries"].as_array().unwrap().len(), 0);
        assert_eq!(parsed["schema_version"], "1");
    }

    #[test]
    fn validation_catches_broken_invariants() {
        let mut report = sample_report();
        assert!(validate_report(&report).is_ok());
        report.documents[0].entries[0].context = Some("(context) x".into());
        assert!(validate_report(&report).is_err());

        let mut report = sample_report();
        report.documents[0].summary.expansions_found = 99;
        assert!(validate_report(&report).is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let report = sample_report();
        let json = serde_json::to_string(&report).unwrap();
        let back: RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
