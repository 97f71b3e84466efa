//! Acronym-expansion pair extraction for scientific documents.
//!
//! The pipeline turns page-delimited extracted text into a report of
//! acronym-expansion pairs in five stages:
//!
//! 1. [`ingest`] — page parsing, header/footer removal, ligature and
//!    hyphenation repair, whitespace normalization;
//! 2. [`preprocess`] — reference/front-matter/equation/heading removal and
//!    sentence segmentation (case and punctuation preserved);
//! 3. [`extract`] — acronym identification, candidate filtering, forward and
//!    backward parenthetical pattern matching with validation and
//!    refinement, context capture;
//! 4. [`llm`] — chunked delegation of the extraction table to a
//!    chat-completion endpoint with rate limiting, bounded concurrency, and
//!    record/replay transports for deterministic offline runs;
//! 5. [`report`] / [`analytics`] — machine-readable reports and corpus
//!    statistics.
//!
//! [`pipeline::run`] orchestrates the five run modes (`regex`, `regex-pre`,
//! `llm`, `llm-pre`, `combined`) end to end; the `acrox` binary is a thin
//! CLI over it.

pub mod analytics;
pub mod extract;
pub mod ingest;
pub mod llm;
pub mod pipeline;
pub mod preprocess;
pub mod report;
pub mod stopwords;

pub use extract::{build_table, AcronymTable};
pub use ingest::{clean_document, parse_pages, CleanText, RawDocument};
pub use pipeline::{run, RunConfig, RunMode};
pub use preprocess::{split_sentences, SentenceStream};
pub use report::RunReport;
