//! Region removal and sentence segmentation.
//!
//! Removes document regions that pollute acronym detection (references,
//! front matter, equation-like lines, uppercase headings) and segments the
//! surviving text into sentences while preserving case and punctuation.
//! Stopwords are deliberately kept: expansion validation downstream depends
//! on them.

use std::collections::HashSet;

use crate::extract::matches_identification_pattern;
use crate::ingest::{clean_document, CleanText, RawDocument};

/// One segmented sentence with its byte span into the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub index: usize,
    pub text: String,
    pub span: (usize, usize),
}

/// The ordered sentence sequence used for extraction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SentenceStream {
    pub sentences: Vec<Sentence>,
}

/// Abbreviation tokens whose trailing period never ends a sentence.
pub const DEFAULT_ABBREVIATIONS: [&str; 8] =
    ["e.g.", "i.e.", "et al.", "Fig.", "Eq.", "vs.", "Dr.", "cf."];

/// True when the trimmed line equals one of `names` (case-insensitively)
/// after an optional leading section number or Roman numeral label.
fn is_heading(line: &str, names: &[&str]) -> bool {
    let trimmed = line.trim();
    let rest = strip_section_label(trimmed);
    names.iter().any(|n| rest.eq_ignore_ascii_case(n))
}

fn strip_section_label(line: &str) -> &str {
    let Some((label, rest)) = line.split_once(char::is_whitespace) else {
        return line;
    };
    let label = label.trim_end_matches(['.', ')']);
    if label.is_empty() {
        return line;
    }
    let numeric = label.chars().all(|c| c.is_ascii_digit() || c == '.');
    let roman = label
        .chars()
        .all(|c| "IVXLCDMivxlcdm".contains(c));
    if numeric || roman {
        rest.trim_start()
    } else {
        line
    }
}

/// Truncate at the last line reading "References" or "Bibliography".
pub fn strip_references(clean: &CleanText) -> CleanText {
    let mut cut = None;
    for (offset, line) in clean.lines_with_offsets() {
        if is_heading(line, &["references", "bibliography"]) {
            cut = Some(offset);
        }
    }
    match cut {
        Some(offset) => clean.remove_ranges(&[(offset, clean.text.len())]),
        None => clean.clone(),
    }
}

/// When the first page carries both an "Abstract" line and a later
/// "Introduction" line, drop everything up to and including the
/// Introduction heading.
pub fn strip_front_matter(clean: &CleanText) -> CleanText {
    let Some(&(_, first_page_end)) = clean.page_spans.first() else {
        return clean.clone();
    };
    let mut abstract_offset = None;
    let mut intro_end = None;
    for (offset, line) in clean.lines_with_offsets() {
        if offset >= first_page_end {
            break;
        }
        match abstract_offset {
            None => {
                if is_heading(line, &["abstract"]) {
                    abstract_offset = Some(offset);
                }
            }
            Some(_) => {
                if is_heading(line, &["introduction"]) {
                    intro_end = Some(offset + line.len());
                    break;
                }
            }
        }
    }
    match (abstract_offset, intro_end) {
        (Some(_), Some(end)) => {
            let cut = (end + 1).min(clean.text.len());
            clean.remove_ranges(&[(0, cut)])
        }
        _ => clean.clone(),
    }
}

const ALLOWED_PUNCTUATION: [char; 9] = ['.', ',', ';', ':', '(', ')', '-', '\'', '"'];

/// Drop lines whose non-space characters are more than 30% symbols outside
/// ASCII letters, digits, and common punctuation (equation debris).
pub fn strip_math_lines(clean: &CleanText) -> CleanText {
    drop_lines(clean, |line| {
        let non_space: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
        if non_space.is_empty() {
            return false;
        }
        let exotic = non_space
            .iter()
            .filter(|c| !c.is_ascii_alphanumeric() && !ALLOWED_PUNCTUATION.contains(c))
            .count();
        exotic as f64 / non_space.len() as f64 > 0.30
    })
}

/// Drop multi-word all-uppercase lines with no sentence-final punctuation
/// (section headings). Single-word lines survive so isolated acronym
/// mentions are kept.
pub fn strip_uppercase_headings(clean: &CleanText) -> CleanText {
    drop_lines(clean, |line| {
        let words = line.split_whitespace().count();
        if words < 2 {
            return false;
        }
        let mut has_alpha = false;
        for c in line.chars().filter(|c| c.is_alphabetic()) {
            has_alpha = true;
            if !c.is_uppercase() {
                return false;
            }
        }
        has_alpha && !line.trim_end().ends_with(['.', '!', '?'])
    })
}

fn drop_lines(clean: &CleanText, mut should_drop: impl FnMut(&str) -> bool) -> CleanText {
    let mut removed = Vec::new();
    let len = clean.text.len();
    for (offset, line) in clean.lines_with_offsets() {
        if should_drop(line) {
            let end = (offset + line.len() + 1).min(len);
            removed.push((offset, end));
        }
    }
    clean.remove_ranges(&removed)
}

/// The full preprocessing stack: ingest normalization, then reference,
/// front-matter, equation, and heading removal.
///
/// Idempotent: wrap joining runs before the line filters, so a line whose
/// continuation starts lowercase has already absorbed it by the time the
/// filters look; dropped lines therefore never leave a dangling wrap behind,
/// and a second application is a no-op.
pub fn preprocess_document(doc: &RawDocument) -> CleanText {
    let cleaned = clean_document(doc);
    strip_uppercase_headings(&strip_math_lines(&strip_front_matter(&strip_references(
        &cleaned,
    ))))
}

/// Segment text into sentences at '.', '!', '?' followed by whitespace and
/// an uppercase letter (or end of text), guarding initials, known
/// abbreviation tokens, and dotted acronyms.
pub fn split_sentences(clean: &CleanText) -> SentenceStream {
    let defaults: Vec<String> = DEFAULT_ABBREVIATIONS.iter().map(|s| s.to_string()).collect();
    split_sentences_with(clean, &defaults)
}

/// [`split_sentences`] with a caller-provided abbreviation guard list; each
/// entry should include its trailing period (e.g. "Fig.").
pub fn split_sentences_with(clean: &CleanText, abbreviations: &[String]) -> SentenceStream {
    let text = &clean.text;
    let mut sentences = Vec::new();
    let mut start: Option<usize> = None;
    let push = |sentences: &mut Vec<Sentence>, s: usize, e: usize| {
        let body = text[s..e].trim_end();
        if body.is_empty() {
            return;
        }
        sentences.push(Sentence {
            index: sentences.len(),
            text: body.to_string(),
            span: (s, s + body.len()),
        });
    };
    for (i, c) in text.char_indices() {
        if start.is_none() && !c.is_whitespace() {
            start = Some(i);
        }
        if matches!(c, '.' | '!' | '?') {
            if let Some(s) = start {
                if is_sentence_boundary(text, i, c, abbreviations) {
                    push(&mut sentences, s, i + c.len_utf8());
                    start = None;
                }
            }
        }
    }
    if let Some(s) = start {
        push(&mut sentences, s, text.len());
    }
    SentenceStream { sentences }
}

fn is_sentence_boundary(text: &str, punct_idx: usize, punct: char, abbreviations: &[String]) -> bool {
    let after = &text[punct_idx + punct.len_utf8()..];
    let followed_ok = if after.is_empty() {
        true
    } else {
        let mut chars = after.chars();
        let first = chars.next().unwrap();
        first.is_whitespace()
            && after
                .trim_start()
                .chars()
                .next()
                .is_some_and(char::is_uppercase)
    };
    if !followed_ok {
        return false;
    }
    if punct != '.' {
        return true;
    }

    let before = &text[..punct_idx];
    let token_start = before
        .rfind(char::is_whitespace)
        .map(|p| p + 1)
        .unwrap_or(0);
    let token = &before[token_start..];

    // Single uppercase letter: an initial, as in "J. K. Rowling".
    if token.chars().count() == 1 && token.chars().all(|c| c.is_uppercase()) {
        return false;
    }
    if is_dotted_acronym(token) {
        return false;
    }
    let with_period = &text[..punct_idx + 1];
    for abbr in abbreviations {
        if with_period.ends_with(abbr.as_str()) {
            let head = with_period.len() - abbr.len();
            let preceded_ok = head == 0
                || with_period[..head]
                    .chars()
                    .next_back()
                    .is_some_and(|c| !c.is_alphanumeric());
            if preceded_ok {
                return false;
            }
        }
    }
    true
}

fn is_dotted_acronym(token: &str) -> bool {
    let parts: Vec<&str> = token.split('.').collect();
    parts.len() >= 2
        && parts
            .iter()
            .all(|p| p.len() == 1 && p.chars().all(|c| c.is_ascii_uppercase()))
}

/// Conservative spelling correction over a sentence stream. A token is
/// replaced only when it is all-lowercase, absent from the dictionary,
/// exactly one dictionary word lies at edit distance 1, and it is not
/// acronym-shaped. Spans keep pointing at the uncorrected source text.
pub fn correct_spelling(stream: &SentenceStream, dictionary: &HashSet<String>) -> SentenceStream {
    SentenceStream {
        sentences: stream
            .sentences
            .iter()
            .map(|s| Sentence {
                index: s.index,
                span: s.span,
                text: correct_text(&s.text, dictionary),
            })
            .collect(),
    }
}

fn correct_text(text: &str, dictionary: &HashSet<String>) -> String {
    let mut out = String::with_capacity(text.len());
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        if !word.is_empty() {
            out.push_str(&correct_word(word, dictionary));
            word.clear();
        }
    };
    for c in text.chars() {
        if c.is_alphabetic() {
            word.push(c);
        } else {
            flush(&mut word, &mut out);
            out.push(c);
        }
    }
    flush(&mut word, &mut out);
    out
}

fn correct_word(word: &str, dictionary: &HashSet<String>) -> String {
    let eligible = word.chars().all(|c| c.is_ascii_lowercase())
        && !dictionary.contains(word)
        && !matches_identification_pattern(word);
    if !eligible {
        return word.to_string();
    }
    match unique_neighbor(word, dictionary) {
        Some(fix) => fix,
        None => word.to_string(),
    }
}

/// The single dictionary word at edit distance 1, if exactly one exists.
/// Distance counts deletion, substitution, insertion (over a-z), and
/// adjacent transposition as one edit each.
fn unique_neighbor(word: &str, dictionary: &HashSet<String>) -> Option<String> {
    let chars: Vec<char> = word.chars().collect();
    let mut found: Option<String> = None;
    let mut check = |candidate: String| -> bool {
        if candidate != word && dictionary.contains(&candidate) {
            match &found {
                Some(existing) if *existing != candidate => return true,
                _ => found = Some(candidate),
            }
        }
        false
    };
    for i in 0..chars.len() {
        let mut deleted: String = chars[..i].iter().collect();
        deleted.extend(&chars[i + 1..]);
        if check(deleted) {
            return None;
        }
        for sub in 'a'..='z' {
            if sub == chars[i] {
                continue;
            }
            let mut candidate: String = chars[..i].iter().collect();
            candidate.push(sub);
            candidate.extend(&chars[i + 1..]);
            if check(candidate) {
                return None;
            }
        }
    }
    for i in 0..=chars.len() {
        for ins in 'a'..='z' {
            let mut candidate: String = chars[..i].iter().collect();
            candidate.push(ins);
            candidate.extend(&chars[i..]);
            if check(candidate) {
                return None;
            }
        }
    }
    for i in 0..chars.len().saturating_sub(1) {
        let mut swapped = chars.clone();
        swapped.swap(i, i + 1);
        if check(swapped.into_iter().collect()) {
            return None;
        }
    }
    found
}
