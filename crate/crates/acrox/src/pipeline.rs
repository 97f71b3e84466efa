//! End-to-end orchestration of the five run modes.
//!
//! - `regex`: page parsing and sentence splitting only, then pattern
//!   extraction on the raw sentences.
//! - `regex-pre`: full ingest normalization and region removal before
//!   extraction.
//! - `llm`: the raw text is chunked and sent directly to the model with a
//!   discovery prompt.
//! - `llm-pre`: the same over preprocessed text.
//! - `combined`: the full pipeline; the extraction table is refined by the
//!   model.

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::Command;

use thiserror::Error;

use crate::analytics::{content_stats, result_summary, ContentStats};
use crate::extract::{
    build_table, AcronymTable, ExclusionReason, ExpansionRecord, Method,
};
use crate::ingest::{assemble_raw, parse_pages, CleanText};
use crate::llm::{
    LiveTransport, LlmConfig, RecordingTransport, ReplayTransport, Resolver, SystemClock,
    Transport, DEFAULT_CHUNK_SIZE,
};
use crate::preprocess::{correct_spelling, preprocess_document, split_sentences, SentenceStream};
use crate::report::{
    validate_report, write_report, DocumentReport, EntryReport, ExclusionReport, RunReport,
};
use crate::stopwords::{default_stopwords, load_stopwords};

/// Character budget per request in the direct-extraction modes.
pub const TEXT_CHUNK_CHARS: usize = 12_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RunMode {
    Regex,
    RegexPre,
    Llm,
    LlmPre,
    Combined,
}

impl RunMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunMode::Regex => "regex",
            RunMode::RegexPre => "regex-pre",
            RunMode::Llm => "llm",
            RunMode::LlmPre => "llm-pre",
            RunMode::Combined => "combined",
        }
    }

    pub fn needs_llm(&self) -> bool {
        matches!(self, RunMode::Llm | RunMode::LlmPre | RunMode::Combined)
    }

    /// Whether the cleanup and region-removal steps run.
    pub fn preprocesses(&self) -> bool {
        matches!(self, RunMode::RegexPre | RunMode::LlmPre | RunMode::Combined)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureMode {
    Record,
    Replay,
}

#[derive(Debug, Clone)]
pub struct FixtureConfig {
    pub path: PathBuf,
    pub mode: FixtureMode,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: RunMode,
    pub inputs: Vec<PathBuf>,
    pub out: PathBuf,
    pub stopword_threshold: f64,
    pub chunk_size: usize,
    pub llm: Option<LlmConfig>,
    pub converter: Option<String>,
    pub fixture: Option<FixtureConfig>,
    pub stopwords_path: Option<PathBuf>,
    pub dictionary_path: Option<PathBuf>,
    pub spellcheck: bool,
}

impl RunConfig {
    pub fn new(mode: RunMode, inputs: Vec<PathBuf>, out: PathBuf) -> Self {
        Self {
            mode,
            inputs,
            out,
            stopword_threshold: crate::extract::DEFAULT_STOPWORD_THRESHOLD,
            chunk_size: DEFAULT_CHUNK_SIZE,
            llm: None,
            converter: None,
            fixture: None,
            stopwords_path: None,
            dictionary_path: None,
            spellcheck: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("input: {0}")]
    Input(String),
    #[error("output: {0}")]
    Output(String),
    #[error("llm unavailable: {0}")]
    LlmUnavailable(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl RunError {
    /// Process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) | RunError::Output(_) => 2,
            RunError::LlmUnavailable(_) => 3,
            RunError::Invariant(_) => 4,
        }
    }
}

/// Execute a run and write its report atomically to `config.out`.
pub fn run(config: &RunConfig) -> Result<RunReport, RunError> {
    run_with_transport(config, None)
}

/// [`run`] with a caller-supplied transport in place of the live endpoint;
/// recording still wraps the override when the fixture is in record mode.
pub fn run_with_transport(
    config: &RunConfig,
    transport_override: Option<Box<dyn Transport>>,
) -> Result<RunReport, RunError> {
    validate_config(config, transport_override.is_some())?;

    let stopwords = match &config.stopwords_path {
        Some(path) => load_stopwords(path)
            .map_err(|e| RunError::Input(format!("stopwords {}: {e}", path.display())))?,
        None => default_stopwords().clone(),
    };
    let dictionary: Option<HashSet<String>> = match (&config.dictionary_path, config.spellcheck) {
        (Some(path), true) => Some(
            load_stopwords(path)
                .map_err(|e| RunError::Input(format!("dictionary {}: {e}", path.display())))?,
        ),
        _ => None,
    };

    let llm_config = config.llm.clone().unwrap_or_default();
    let transport = if config.mode.needs_llm() {
        Some(build_transport(config, transport_override)?)
    } else {
        None
    };
    let clock = SystemClock::new();
    let resolver = transport
        .as_ref()
        .map(|t| Resolver::new(&llm_config, t.as_ref(), &clock));

    let mut documents = Vec::with_capacity(config.inputs.len());
    let mut warnings = Vec::new();
    for input in &config.inputs {
        let raw = read_input(config, input)?;
        let source_id = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| input.display().to_string());
        let (doc, mut doc_warnings) = process_document(
            config,
            resolver.as_ref(),
            &stopwords,
            dictionary.as_ref(),
            &source_id,
            &raw,
        )?;
        documents.push(doc);
        warnings.append(&mut doc_warnings);
    }

    let report = RunReport::new(config.mode.as_str(), documents);
    validate_report(&report).map_err(RunError::Invariant)?;
    write_report(&report, &config.out)
        .map_err(|e| RunError::Output(format!("{}: {e}", config.out.display())))?;
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    Ok(report)
}

fn validate_config(config: &RunConfig, has_override: bool) -> Result<(), RunError> {
    if config.inputs.is_empty() {
        return Err(RunError::Input("no input files given".into()));
    }
    if !(0.0..=1.0).contains(&config.stopword_threshold) {
        return Err(RunError::Input(
            "stopword threshold must be within [0, 1]".into(),
        ));
    }
    if !(1..=crate::llm::MAX_CHUNK_SIZE).contains(&config.chunk_size) {
        return Err(RunError::Input(format!(
            "chunk size must be within 1..={}",
            crate::llm::MAX_CHUNK_SIZE
        )));
    }
    if config.spellcheck && config.dictionary_path.is_none() {
        return Err(RunError::Input(
            "spellcheck requires a dictionary file".into(),
        ));
    }
    if let Some(llm) = &config.llm {
        llm.validate()
            .map_err(|e| RunError::Input(format!("llm config: {e}")))?;
    }
    if config.mode.needs_llm() && !has_override {
        let replaying = config
            .fixture
            .as_ref()
            .is_some_and(|f| f.mode == FixtureMode::Replay);
        if !replaying {
            let llm = config.llm.as_ref().ok_or_else(|| {
                RunError::LlmUnavailable("no endpoint configured and no replay fixture".into())
            })?;
            if llm.endpoint.is_empty() {
                return Err(RunError::LlmUnavailable(
                    "no endpoint configured and no replay fixture".into(),
                ));
            }
            if std::env::var(&llm.api_key_env).is_err() {
                return Err(RunError::LlmUnavailable(format!(
                    "api key environment variable {} is not set",
                    llm.api_key_env
                )));
            }
        }
    }
    Ok(())
}

fn build_transport(
    config: &RunConfig,
    transport_override: Option<Box<dyn Transport>>,
) -> Result<Box<dyn Transport>, RunError> {
    let base: Box<dyn Transport> = match (&config.fixture, transport_override) {
        (_, Some(t)) => t,
        (Some(f), None) if f.mode == FixtureMode::Replay => Box::new(
            ReplayTransport::load(&f.path)
                .map_err(|e| RunError::Input(format!("fixture: {e}")))?,
        ),
        _ => Box::new(LiveTransport::new(config.llm.clone().unwrap_or_default())),
    };
    Ok(match &config.fixture {
        Some(f) if f.mode == FixtureMode::Record => {
            Box::new(RecordingTransport::new(base, f.path.clone()))
        }
        _ => base,
    })
}

fn read_input(config: &RunConfig, input: &PathBuf) -> Result<String, RunError> {
    match &config.converter {
        Some(template) => convert_input(template, input),
        None => std::fs::read_to_string(input)
            .map_err(|e| RunError::Input(format!("{}: {e}", input.display()))),
    }
}

/// Run the converter command template; "{}" stands for the input path (it is
/// appended when absent) and stdout must be the page-delimited text.
fn convert_input(template: &str, input: &PathBuf) -> Result<String, RunError> {
    let mut parts = template.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| RunError::Input("empty converter command".into()))?;
    let mut args: Vec<String> = parts.map(str::to_string).collect();
    let path = input.display().to_string();
    let mut substituted = false;
    for arg in &mut args {
        if arg.contains("{}") {
            *arg = arg.replace("{}", &path);
            substituted = true;
        }
    }
    if !substituted {
        args.push(path);
    }
    let output = Command::new(program)
        .args(&args)
        .output()
        .map_err(|e| RunError::Input(format!("converter {program}: {e}")))?;
    if !output.status.success() {
        return Err(RunError::Input(format!(
            "converter exited with {}",
            output.status
        )));
    }
    String::from_utf8(output.stdout)
        .map_err(|e| RunError::Input(format!("converter output not UTF-8: {e}")))
}

struct PipelineProducts {
    text: String,
    stream: SentenceStream,
    table: AcronymTable,
}

fn prepare(
    config: &RunConfig,
    dictionary: Option<&HashSet<String>>,
    stopwords: &HashSet<String>,
    source_id: &str,
    raw: &str,
) -> Result<PipelineProducts, RunError> {
    let doc = parse_pages(raw, source_id)
        .map_err(|e| RunError::Input(format!("{source_id}: {e}")))?;
    let clean: CleanText = if config.mode.preprocesses() {
        preprocess_document(&doc)
    } else {
        assemble_raw(&doc)
    };
    let mut stream = split_sentences(&clean);
    if config.mode.preprocesses() && config.spellcheck {
        if let Some(dict) = dictionary {
            stream = correct_spelling(&stream, dict);
        }
    }
    let table = match config.mode {
        RunMode::Llm | RunMode::LlmPre => AcronymTable::default(),
        _ => build_table(&stream, stopwords, config.stopword_threshold),
    };
    Ok(PipelineProducts {
        text: clean.text,
        stream,
        table,
    })
}

fn process_document(
    config: &RunConfig,
    resolver: Option<&Resolver>,
    stopwords: &HashSet<String>,
    dictionary: Option<&HashSet<String>>,
    source_id: &str,
    raw: &str,
) -> Result<(DocumentReport, Vec<String>), RunError> {
    let products = prepare(config, dictionary, stopwords, source_id, raw)?;
    let mut warnings = Vec::new();

    let (entries, stats) = match config.mode {
        RunMode::Regex | RunMode::RegexPre => {
            let entries = entries_from_table(&products.table);
            let stats = content_stats(&products.text, &products.stream, &products.table, stopwords);
            (entries, stats)
        }
        RunMode::Llm | RunMode::LlmPre => {
            let resolver = resolver.expect("llm modes carry a resolver");
            let outcome = resolver.resolve_text(&products.text, TEXT_CHUNK_CHARS);
            warnings.extend(outcome.warnings.iter().cloned());
            let entries: Vec<EntryReport> = outcome
                .resolved
                .iter()
                .map(|(key, value)| EntryReport {
                    canonical: key.clone(),
                    occurrences: 0,
                    expansions: vec![ExpansionRecord {
                        text: value.clone(),
                        method: Method::Llm,
                    }],
                    context: None,
                })
                .collect();
            // No occurrence scan happens in the direct modes; both acronym
            // counts are the number of keys the model returned.
            let stats = ContentStats {
                acronym_occurrence_count: entries.len(),
                unique_acronym_count: entries.len(),
                ..content_stats(&products.text, &products.stream, &products.table, stopwords)
            };
            (entries, stats)
        }
        RunMode::Combined => {
            let resolver = resolver.expect("combined mode carries a resolver");
            let outcome = resolver.resolve_all(&products.table, config.chunk_size);
            warnings.extend(outcome.warnings.iter().cloned());
            let mut entries = entries_from_table(&products.table);
            for entry in &mut entries {
                if let Some(llm_value) = outcome.resolved.get(&entry.canonical) {
                    if !entry.expansions.iter().any(|e| e.text == *llm_value) {
                        entry.expansions.push(ExpansionRecord {
                            text: llm_value.clone(),
                            method: Method::Llm,
                        });
                    }
                    entry.context = None;
                }
            }
            let stats = content_stats(&products.text, &products.stream, &products.table, stopwords);
            (entries, stats)
        }
    };

    let summary = result_summary(config.mode.as_str(), &entries);
    let exclusions = products
        .table
        .exclusions
        .iter()
        .map(|x| ExclusionReport {
            canonical: x.canonical.clone(),
            reason: reason_name(x.reason).to_string(),
        })
        .collect();
    Ok((
        DocumentReport {
            source_id: source_id.to_string(),
            entries,
            exclusions,
            content_stats: stats,
            summary,
        },
        warnings,
    ))
}

fn entries_from_table(table: &AcronymTable) -> Vec<EntryReport> {
    table
        .entries
        .values()
        .map(|entry| EntryReport {
            canonical: entry.canonical.clone(),
            occurrences: entry.occurrences.len(),
            expansions: entry.expansions.clone(),
            context: entry.context.clone(),
        })
        .collect()
}

pub fn reason_name(reason: ExclusionReason) -> &'static str {
    match reason {
        ExclusionReason::Roman => "roman",
        ExclusionReason::Chromosome => "chromosome",
        ExclusionReason::Gene => "gene",
        ExclusionReason::TooLong => "too_long",
        ExclusionReason::DigitPrefixed => "digit_prefixed",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_doc(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let path = dir.path().join(name);
        let mut file = std::fs::File::create(&path).unwrap();
        file.write_all(body.as_bytes()).unwrap();
        path
    }

    #[test]
    fn regex_mode_extracts_backward_pairs() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_doc(
            &dir,
            "doc.txt",
            "Researchers trained a large language model (LLM) on text.",
        );
        let out = dir.path().join("report.json");
        let config = RunConfig::new(RunMode::Regex, vec![input], out.clone());
        let report = run(&config).unwrap();
        let entry = &report.documents[0].entries[0];
        assert_eq!(entry.canonical, "LLM");
        assert_eq!(entry.expansions[0].text, "large language model");
        assert_eq!(entry.expansions[0].method, Method::RegexBackward);
        assert!(out.exists());
    }

    #[test]
    fn llm_mode_without_endpoint_or_fixture_is_unavailable() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_doc(&dir, "doc.txt", "TCP was used.");
        let out = dir.path().join("report.json");
        let config = RunConfig::new(RunMode::Llm, vec![input], out.clone());
        let err = run(&config).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(!out.exists(), "no partial output on failure");
    }

    #[test]
    fn unreadable_input_maps_to_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig::new(
            RunMode::Regex,
            vec![dir.path().join("missing.txt")],
            dir.path().join("report.json"),
        );
        let err = run(&config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn invalid_threshold_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_doc(&dir, "doc.txt", "text");
        let mut config = RunConfig::new(RunMode::Regex, vec![input], dir.path().join("r.json"));
        config.stopword_threshold = 1.5;
        assert_eq!(run(&config).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn preprocessing_strips_headings_that_regex_mode_keeps() {
        let dir = tempfile::tempdir().unwrap();
        let body = "RESULTS AND DISCUSSION\nThe TCP stack held up well under load tests.";
        let input = write_doc(&dir, "doc.txt", body);

        let config = RunConfig::new(
            RunMode::Regex,
            vec![input.clone()],
            dir.path().join("raw.json"),
        );
        let raw_report = run(&config).unwrap();
        let raw_keys: Vec<&str> = raw_report.documents[0]
            .entries
            .iter()
            .map(|e| e.canonical.as_str())
            .collect();
        assert!(raw_keys.contains(&"RESULTS"));

        let config = RunConfig::new(RunMode::RegexPre, vec![input], dir.path().join("pre.json"));
        let pre_report = run(&config).unwrap();
        let pre_keys: Vec<&str> = pre_report.documents[0]
            .entries
            .iter()
            .map(|e| e.canonical.as_str())
            .collect();
        assert_eq!(pre_keys, vec!["TCP"]);
    }
}
