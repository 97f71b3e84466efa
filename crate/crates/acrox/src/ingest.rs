//! Page-delimited text ingestion.
//!
//! Converts extracted document text (pages separated by form feeds) into a
//! normalized character stream: repeated headers and footers are stripped,
//! typographic ligatures expanded, line-break hyphenation repaired, and
//! whitespace normalized. Byte spans locating each original page are kept so
//! later stages can reason about page boundaries.

use thiserror::Error;

const PAGE_SEPARATOR: char = '\u{000C}';

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("empty document")]
    EmptyDocument,
}

/// A document as extracted from its source: ordered pages of ordered lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub source_id: String,
    pub pages: Vec<Vec<String>>,
}

impl RawDocument {
    /// Inverse of [`parse_pages`]: joins lines with newlines and pages with
    /// form feeds.
    pub fn to_delimited_text(&self) -> String {
        self.pages
            .iter()
            .map(|lines| lines.join("\n"))
            .collect::<Vec<_>>()
            .join(&PAGE_SEPARATOR.to_string())
    }
}

/// Normalized text plus byte spans locating each original page.
///
/// Spans are ascending, non-overlapping, and jointly cover the text; the
/// separator following a page belongs to that page's span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanText {
    pub text: String,
    pub page_spans: Vec<(usize, usize)>,
}

impl CleanText {
    /// Iterate lines paired with the byte offset of each line start.
    pub fn lines_with_offsets(&self) -> impl Iterator<Item = (usize, &str)> {
        let mut offset = 0;
        self.text.split('\n').map(move |line| {
            let start = offset;
            offset += line.len() + 1;
            (start, line)
        })
    }

    /// Rebuild the text with the given byte ranges removed, shifting and
    /// clipping page spans to match. Ranges must be sorted and disjoint.
    pub(crate) fn remove_ranges(&self, removed: &[(usize, usize)]) -> CleanText {
        if removed.is_empty() {
            return self.clone();
        }
        let mut text = String::with_capacity(self.text.len());
        let mut cursor = 0;
        for &(start, end) in removed {
            text.push_str(&self.text[cursor..start]);
            cursor = end;
        }
        text.push_str(&self.text[cursor..]);

        let shift = |pos: usize| -> usize {
            let mut cut = 0;
            for &(start, end) in removed {
                if end <= pos {
                    cut += end - start;
                } else if start < pos {
                    cut += pos - start;
                }
            }
            pos - cut
        };
        let page_spans = self
            .page_spans
            .iter()
            .map(|&(s, e)| (shift(s), shift(e)))
            .collect();
        CleanText { text, page_spans }
    }
}

/// Split form-feed-delimited text into pages of lines. A trailing empty page
/// produced by a final form feed is dropped.
pub fn parse_pages(raw: &str, source_id: &str) -> Result<RawDocument, IngestError> {
    if raw.is_empty() {
        return Err(IngestError::EmptyDocument);
    }
    let mut pages: Vec<Vec<String>> = raw.split(PAGE_SEPARATOR).map(split_page_lines).collect();
    if pages.len() > 1 && pages.last().is_some_and(Vec::is_empty) {
        pages.pop();
    }
    Ok(RawDocument {
        source_id: source_id.to_string(),
        pages,
    })
}

fn split_page_lines(page: &str) -> Vec<String> {
    if page.is_empty() {
        return Vec::new();
    }
    page.split('\n')
        .map(|line| line.strip_suffix('\r').unwrap_or(line).to_string())
        .collect()
}

/// Remove a first (respectively last) line from every page where its
/// digit-normalized form equals the digit-normalized first (respectively
/// last) line of at least half of all other pages. Single-page documents are
/// returned unchanged.
pub fn strip_headers_footers(doc: &RawDocument) -> RawDocument {
    if doc.pages.len() < 2 {
        return doc.clone();
    }
    let firsts: Vec<Option<String>> = doc
        .pages
        .iter()
        .map(|p| p.first().map(|l| normalize_digits(l)))
        .collect();
    let lasts: Vec<Option<String>> = doc
        .pages
        .iter()
        .map(|p| p.last().map(|l| normalize_digits(l)))
        .collect();

    let pages = doc
        .pages
        .iter()
        .enumerate()
        .map(|(i, page)| {
            let mut start = 0;
            let mut end = page.len();
            if shared_by_half_of_others(&firsts, i) && start < end {
                start += 1;
            }
            if shared_by_half_of_others(&lasts, i) && start < end {
                end -= 1;
            }
            page[start..end].to_vec()
        })
        .collect();
    RawDocument {
        source_id: doc.source_id.clone(),
        pages,
    }
}

fn shared_by_half_of_others(norms: &[Option<String>], i: usize) -> bool {
    let Some(mine) = norms[i].as_deref() else {
        return false;
    };
    let others = norms.len() - 1;
    let same = norms
        .iter()
        .enumerate()
        .filter(|&(j, n)| j != i && n.as_deref() == Some(mine))
        .count();
    2 * same >= others
}

fn normalize_digits(line: &str) -> String {
    line.chars()
        .map(|c| if c.is_ascii_digit() { '#' } else { c })
        .collect()
}

const LIGATURES: [(char, &str); 7] = [
    ('\u{FB00}', "ff"),
    ('\u{FB01}', "fi"),
    ('\u{FB02}', "fl"),
    ('\u{FB03}', "ffi"),
    ('\u{FB04}', "ffl"),
    ('\u{FB05}', "ft"),
    ('\u{FB06}', "st"),
];

/// Expand the seven standard Latin ligature codepoints; everything else is
/// passed through unchanged.
pub fn replace_ligatures(text: &str) -> String {
    if !text.chars().any(|c| ('\u{FB00}'..='\u{FB06}').contains(&c)) {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len() + 8);
    for c in text.chars() {
        match LIGATURES.iter().find(|(lig, _)| *lig == c) {
            Some((_, replacement)) => out.push_str(replacement),
            None => out.push(c),
        }
    }
    out
}

/// Repair line-break artifacts:
///
/// - a hyphen immediately before a line break is removed together with the
///   break when the continuation starts with a lowercase letter (a word was
///   split), and kept with the break removed otherwise (protecting
///   hyphenated acronyms such as "LC-MS" split across lines);
/// - a plain line break followed by a lowercase letter is a paragraph wrap
///   and becomes a single space; other line breaks keep the line structure.
pub fn repair_hyphenation(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '-' && chars.get(i + 1) == Some(&'\n') {
            if !chars.get(i + 2).is_some_and(|n| n.is_lowercase()) {
                out.push('-');
            }
            i += 2;
            continue;
        }
        if c == '\n' && chars.get(i + 1).is_some_and(|n| n.is_lowercase()) {
            out.push(' ');
            i += 1;
            continue;
        }
        out.push(c);
        i += 1;
    }
    out
}

/// Turn tabs into spaces, collapse space runs, and trim each line.
pub fn normalize_whitespace(text: &str) -> String {
    text.split('\n')
        .map(normalize_line)
        .collect::<Vec<_>>()
        .join("\n")
}

fn normalize_line(line: &str) -> String {
    let mut out = String::with_capacity(line.len());
    let mut pending_space = false;
    for c in line.chars() {
        if c == ' ' || c == '\t' {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

/// Full ingest normalization: header/footer removal, then per page ligature
/// expansion, whitespace normalization, and hyphenation repair.
///
/// Whitespace runs before hyphenation repair so trailing spaces can never
/// mask a hyphen-break site; the composed stack is idempotent.
pub fn clean_document(doc: &RawDocument) -> CleanText {
    let stripped = strip_headers_footers(doc);
    let pages: Vec<String> = stripped
        .pages
        .iter()
        .map(|lines| {
            let text = lines.join("\n");
            repair_hyphenation(&normalize_whitespace(&replace_ligatures(&text)))
        })
        .collect();
    assemble(&pages)
}

/// Minimal assembly for the no-preprocessing modes: pages joined as-is, no
/// normalization beyond page structure.
pub fn assemble_raw(doc: &RawDocument) -> CleanText {
    let pages: Vec<String> = doc.pages.iter().map(|lines| lines.join("\n")).collect();
    assemble(&pages)
}

fn assemble(pages: &[String]) -> CleanText {
    let mut text = String::new();
    let mut page_spans = Vec::with_capacity(pages.len());
    for (i, page) in pages.iter().enumerate() {
        let start = text.len();
        text.push_str(page);
        if i + 1 != pages.len() {
            text.push('\n');
        }
        page_spans.push((start, text.len()));
    }
    CleanText { text, page_spans }
}
