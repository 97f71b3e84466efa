//! Stopword list handling.
//!
//! A default list of ~150 common English function words ships with the
//! binary; callers may substitute their own list (one lowercase token per
//! line) for both expansion validation and word statistics.

use std::collections::HashSet;
use std::io;
use std::path::Path;
use std::sync::LazyLock;

static DEFAULT_LIST: &str = include_str!("stopwords.txt");

static DEFAULT_SET: LazyLock<HashSet<String>> = LazyLock::new(|| parse_list(DEFAULT_LIST));

/// The stopword set bundled with the binary.
pub fn default_stopwords() -> &'static HashSet<String> {
    &DEFAULT_SET
}

/// Load a stopword file: one token per line, UTF-8. Tokens are lowercased
/// and blank lines are skipped.
pub fn load_stopwords(path: &Path) -> io::Result<HashSet<String>> {
    Ok(parse_list(&std::fs::read_to_string(path)?))
}

fn parse_list(raw: &str) -> HashSet<String> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.to_lowercase())
        .collect()
}

/// Read a plain word-per-line file without lowercasing (used for the
/// sentence-splitting abbreviation guard list).
pub fn load_lines(path: &Path) -> io::Result<Vec<String>> {
    Ok(std::fs::read_to_string(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}
