//! Acronym identification and expansion extraction.
//!
//! Candidates are found with an uppercase-anchored identification pattern,
//! screened against Roman-numeral / chromosome-formula / gene-sequence /
//! length / digit-prefix filters, and resolved through two parenthetical
//! patterns: forward ("ACRONYM (expansion)") with stopword validation, and
//! backward ("expansion (ACRONYM)") with first/last-letter anchoring and a
//! suffix refinement step. Acronyms no pattern resolves get a two-sentence
//! context so a language model can finish the job.

use std::collections::{HashMap, HashSet};
use std::sync::LazyLock;

use indexmap::IndexMap;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::preprocess::SentenceStream;

/// Default ceiling on the fraction of stopwords tolerated in a forward
/// expansion.
pub const DEFAULT_STOPWORD_THRESHOLD: f64 = 1.0 / 3.0;

static IDENTIFICATION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b[A-Z][A-Za-z-]*[A-Z]s?\b").unwrap());

/// One sighting of a candidate acronym.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcronymOccurrence {
    pub surface: String,
    pub canonical: String,
    pub sentence_index: usize,
    /// Character (not byte) offset of the match within its sentence.
    pub char_offset: usize,
}

/// Why a candidate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    Roman,
    Chromosome,
    Gene,
    TooLong,
    DigitPrefixed,
}

/// How an expansion was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "regex-forward")]
    RegexForward,
    #[serde(rename = "regex-backward")]
    RegexBackward,
    #[serde(rename = "llm")]
    Llm,
}

/// Per-acronym outcome of pattern extraction.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    Expanded { expansion: String, method: Method },
    Contextual { context: String },
    Excluded { reason: ExclusionReason },
}

/// A validated expansion and the route that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    pub text: String,
    pub method: Method,
}

/// Everything known about one canonical acronym in a document.
#[derive(Debug, Clone, PartialEq)]
pub struct AcronymEntry {
    pub canonical: String,
    pub occurrences: Vec<AcronymOccurrence>,
    pub expansions: Vec<ExpansionRecord>,
    pub context: Option<String>,
}

/// A rejected candidate and the filter that rejected it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusionRecord {
    pub canonical: String,
    pub reason: ExclusionReason,
}

/// Insertion-ordered table of canonical acronyms plus the exclusion log.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AcronymTable {
    pub entries: IndexMap<String, AcronymEntry>,
    pub exclusions: Vec<ExclusionRecord>,
}

/// True when the whole token matches the identification pattern.
pub fn matches_identification_pattern(token: &str) -> bool {
    IDENTIFICATION
        .find(token)
        .is_some_and(|m| m.start() == 0 && m.end() == token.len())
}

/// Surface form with one trailing plural 's' removed when the preceding
/// character is uppercase ("LPARs" keys as "LPAR").
pub fn canonical_form(surface: &str) -> String {
    let chars: Vec<char> = surface.chars().collect();
    if chars.len() >= 2
        && chars[chars.len() - 1] == 's'
        && chars[chars.len() - 2].is_ascii_uppercase()
    {
        chars[..chars.len() - 1].iter().collect()
    } else {
        surface.to_string()
    }
}

/// Every non-overlapping, leftmost-longest match of the identification
/// pattern in a sentence.
pub fn scan_acronyms(sentence: &str, sentence_index: usize) -> Vec<AcronymOccurrence> {
    IDENTIFICATION
        .find_iter(sentence)
        .map(|m| AcronymOccurrence {
            surface: m.as_str().to_string(),
            canonical: canonical_form(m.as_str()),
            sentence_index,
            char_offset: sentence[..m.start()].chars().count(),
        })
        .collect()
}

/// Roman numerals one through thirty.
pub const ROMAN_NUMERALS: [&str; 30] = [
    "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII", "XIII", "XIV", "XV",
    "XVI", "XVII", "XVIII", "XIX", "XX", "XXI", "XXII", "XXIII", "XXIV", "XXV", "XXVI", "XXVII",
    "XXVIII", "XXIX", "XXX",
];

/// Chromosome formulas common in biology and chemistry manuscripts.
pub const CHROMOSOME_FORMULAS: [&str; 11] = [
    "XX", "XY", "XO", "ZO", "XXYY", "ZW", "ZWW", "XXX", "XXXX", "XXXXX", "YYYYY",
];

const GENE_ALPHABET: [char; 5] = ['A', 'T', 'C', 'G', 'U'];
const MAX_ACRONYM_LEN: usize = 10;
const MIN_GENE_LEN: usize = 6;

/// Screen a scanned occurrence; `None` means keep.
pub fn filter_candidates(occ: &AcronymOccurrence, sentence: &str) -> Option<ExclusionReason> {
    let canonical = occ.canonical.as_str();
    if ROMAN_NUMERALS.contains(&canonical) {
        return Some(ExclusionReason::Roman);
    }
    if CHROMOSOME_FORMULAS.contains(&canonical) {
        return Some(ExclusionReason::Chromosome);
    }
    let len = canonical.chars().count();
    if len >= MIN_GENE_LEN && canonical.chars().all(|c| GENE_ALPHABET.contains(&c)) {
        return Some(ExclusionReason::Gene);
    }
    if len > MAX_ACRONYM_LEN {
        return Some(ExclusionReason::TooLong);
    }
    if digit_prefixed(sentence, occ.char_offset) {
        return Some(ExclusionReason::DigitPrefixed);
    }
    None
}

/// True when the occurrence is immediately preceded by a decimal digit,
/// allowing one intervening hyphen ("12-ACG").
fn digit_prefixed(sentence: &str, char_offset: usize) -> bool {
    let mut before = sentence.chars().take(char_offset).collect::<Vec<char>>();
    match before.pop() {
        Some(c) if c.is_ascii_digit() => true,
        Some('-') => before.pop().is_some_and(|c| c.is_ascii_digit()),
        _ => false,
    }
}

fn forward_regex(acronym: &str) -> Regex {
    // Word class extended with apostrophes so possessive expansions such as
    // "IBM's UNIX" are capturable.
    Regex::new(&format!(
        r"\b{}\b\s*\(((?:\b[a-zA-Z][\w']*(?:-[\w']+)*\b\s*)+)\)",
        regex::escape(acronym)
    ))
    .expect("forward pattern must compile")
}

/// Expansion from "ACRONYM (expansion)" when the parenthesized group is one
/// or more letter-initial words (interior hyphens and apostrophes allowed).
pub fn match_forward(sentence: &str, acronym: &str) -> Option<String> {
    match_forward_with(&forward_regex(acronym), sentence)
}

fn match_forward_with(re: &Regex, sentence: &str) -> Option<String> {
    re.captures(sentence).map(|c| c[1].trim().to_string())
}

fn backward_regex(acronym: &str) -> Option<Regex> {
    let canonical = canonical_form(acronym);
    let first = canonical.chars().next()?;
    let last = canonical.chars().next_back()?;
    if !first.is_ascii_alphabetic() || !last.is_ascii_alphabetic() {
        return None;
    }
    // First/last-letter anchors match case-insensitively; the phrase is
    // letters, spaces, and hyphens only.
    let pattern = format!(
        r"(?:^|\s)((?:\b[{}{}][a-zA-Z\s-]*[{}{}][a-zA-Z\s-]*)+)\s*\(\b{}\b\)",
        first.to_ascii_lowercase(),
        first.to_ascii_uppercase(),
        last.to_ascii_lowercase(),
        last.to_ascii_uppercase(),
        regex::escape(acronym),
    );
    Some(Regex::new(&pattern).expect("backward pattern must compile"))
}

/// Expansion from "expansion (ACRONYM)": the phrase directly before the
/// parenthesized acronym, starting with its first letter and containing its
/// last letter (both case-insensitively).
pub fn match_backward(sentence: &str, acronym: &str) -> Option<String> {
    match_backward_with(backward_regex(acronym).as_ref()?, sentence)
}

fn match_backward_with(re: &Regex, sentence: &str) -> Option<String> {
    re.captures(sentence).map(|c| c[1].trim().to_string())
}

/// True when the stopword fraction of the expansion's tokens stays at or
/// below `threshold`. Empty expansions fail.
pub fn stopword_ratio_ok(expansion: &str, stopwords: &HashSet<String>, threshold: f64) -> bool {
    let tokens: Vec<&str> = expansion.split_whitespace().collect();
    if tokens.is_empty() {
        return false;
    }
    let stop = tokens
        .iter()
        .filter(|t| stopwords.contains(&t.to_lowercase()))
        .count();
    stop as f64 / tokens.len() as f64 <= threshold
}

/// Trim an over-long backward expansion: when its word count exceeds the
/// acronym's character count, keep the longest word-boundary suffix that
/// starts with the acronym's first letter (case-insensitively) and fits in
/// that many words; when no suffix qualifies, keep the original.
pub fn refine_expansion(acronym: &str, expansion: &str) -> String {
    let words: Vec<&str> = expansion.split_whitespace().collect();
    let limit = acronym.chars().count();
    if words.len() <= limit {
        return expansion.to_string();
    }
    let Some(first) = acronym.chars().next() else {
        return expansion.to_string();
    };
    for i in 0..words.len() {
        let starts = words[i]
            .chars()
            .next()
            .is_some_and(|c| c.eq_ignore_ascii_case(&first));
        if starts && words.len() - i <= limit {
            return words[i..].join(" ");
        }
    }
    expansion.to_string()
}

/// "(context) " plus the preceding sentence (when one exists) and the
/// containing sentence; the following sentence is never included.
pub fn capture_context(stream: &SentenceStream, occ: &AcronymOccurrence) -> String {
    let current = &stream.sentences[occ.sentence_index].text;
    match occ
        .sentence_index
        .checked_sub(1)
        .map(|p| &stream.sentences[p].text)
    {
        Some(previous) => format!("(context) {previous} {current}"),
        None => format!("(context) {current}"),
    }
}

fn acceptable_expansion(expansion: &str, occ: &AcronymOccurrence) -> bool {
    !expansion.is_empty()
        && !expansion.contains(['(', ')'])
        && expansion != occ.canonical
        && expansion != occ.surface
}

/// Scan, filter, and resolve every sentence into an [`AcronymTable`]: all
/// distinct validated expansions are preserved per canonical key, acronyms
/// nothing resolved get the context of their first occurrence, and rejected
/// candidates are logged with reasons.
pub fn build_table(
    stream: &SentenceStream,
    stopwords: &HashSet<String>,
    threshold: f64,
) -> AcronymTable {
    let mut entries: IndexMap<String, AcronymEntry> = IndexMap::new();
    let mut exclusions: Vec<ExclusionRecord> = Vec::new();
    let mut excluded_seen: HashSet<(String, ExclusionReason)> = HashSet::new();
    let mut forward_cache: HashMap<String, Regex> = HashMap::new();
    let mut backward_cache: HashMap<String, Option<Regex>> = HashMap::new();

    for sentence in &stream.sentences {
        for occ in scan_acronyms(&sentence.text, sentence.index) {
            if let Some(reason) = filter_candidates(&occ, &sentence.text) {
                if excluded_seen.insert((occ.canonical.clone(), reason)) {
                    exclusions.push(ExclusionRecord {
                        canonical: occ.canonical,
                        reason,
                    });
                }
                continue;
            }

            let mut resolved: Option<ExpansionRecord> = None;
            let forward = forward_cache
                .entry(occ.surface.clone())
                .or_insert_with(|| forward_regex(&occ.surface));
            if let Some(expansion) = match_forward_with(forward, &sentence.text) {
                if stopword_ratio_ok(&expansion, stopwords, threshold)
                    && acceptable_expansion(&expansion, &occ)
                {
                    resolved = Some(ExpansionRecord {
                        text: expansion,
                        method: Method::RegexForward,
                    });
                }
            }
            if resolved.is_none() {
                let backward = backward_cache
                    .entry(occ.surface.clone())
                    .or_insert_with(|| backward_regex(&occ.surface));
                if let Some(re) = backward {
                    if let Some(raw) = match_backward_with(re, &sentence.text) {
                        let refined = refine_expansion(&occ.canonical, &raw);
                        if acceptable_expansion(&refined, &occ) {
                            resolved = Some(ExpansionRecord {
                                text: refined,
                                method: Method::RegexBackward,
                            });
                        }
                    }
                }
            }

            let entry = entries
                .entry(occ.canonical.clone())
                .or_insert_with(|| AcronymEntry {
                    canonical: occ.canonical.clone(),
                    occurrences: Vec::new(),
                    expansions: Vec::new(),
                    context: None,
                });
            entry.occurrences.push(occ);
            if let Some(record) = resolved {
                if !entry.expansions.iter().any(|e| e.text == record.text) {
                    entry.expansions.push(record);
                }
            }
        }
    }

    for entry in entries.values_mut() {
        if entry.expansions.is_empty() {
            entry.context = Some(capture_context(stream, &entry.occurrences[0]));
        }
    }

    AcronymTable {
        entries,
        exclusions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::Sentence;
    use crate::stopwords::default_stopwords;

    fn occurrence(surface: &str, sentence: &str) -> AcronymOccurrence {
        let occs = scan_acronyms(sentence, 0);
        occs.into_iter()
            .find(|o| o.surface == surface)
            .unwrap_or_else(|| panic!("{surface:?} not scanned in {sentence:?}"))
    }

    fn stream_of(texts: &[&str]) -> SentenceStream {
        SentenceStream {
            sentences: texts
                .iter()
                .enumerate()
                .map(|(i, t)| Sentence {
                    index: i,
                    text: t.to_string(),
                    span: (0, 0),
                })
                .collect(),
        }
    }

    #[test]
    fn scans_hyphenated_and_plural_acronyms() {
        let occs = scan_acronyms("using LPARs, LC-MS, and GNCS-INdAM", 0);
        let surfaces: Vec<&str> = occs.iter().map(|o| o.surface.as_str()).collect();
        assert_eq!(surfaces, vec!["LPARs", "LC-MS", "GNCS-INdAM"]);
        assert_eq!(occs[0].canonical, "LPAR");
    }

    #[test]
    fn lowercase_and_digit_starts_are_not_identified() {
        let occs = scan_acronyms("eLisp (Emacs Lisp) and 2FA (two-factor authentication)", 0);
        assert!(occs.is_empty(), "unexpected matches: {occs:?}");
    }

    #[test]
    fn empty_and_single_letter_inputs_yield_nothing() {
        assert!(scan_acronyms("", 0).is_empty());
        assert!(scan_acronyms("A single letter", 0).is_empty());
    }

    #[test]
    fn char_offsets_are_recorded() {
        let occs = scan_acronyms("see NASA fly", 0);
        assert_eq!(occs[0].char_offset, 4);
    }

    #[test]
    fn roman_numerals_are_excluded() {
        let occ = occurrence("XVII", "chapter XVII begins");
        assert_eq!(
            filter_candidates(&occ, "chapter XVII begins"),
            Some(ExclusionReason::Roman)
        );
    }

    #[test]
    fn gene_sequences_are_excluded() {
        let occ = occurrence("ATCGGU", "sequence ATCGGU found");
        assert_eq!(
            filter_candidates(&occ, "sequence ATCGGU found"),
            Some(ExclusionReason::Gene)
        );
    }

    #[test]
    fn digit_prefixed_candidates_are_excluded() {
        let sentence = "compound 12-ACG reacted";
        let occ = occurrence("ACG", sentence);
        assert_eq!(
            filter_candidates(&occ, sentence),
            Some(ExclusionReason::DigitPrefixed)
        );
        // Whitespace between digit and acronym does not trigger the filter.
        let spaced = "batch 12 ACG reacted";
        let occ = occurrence("ACG", spaced);
        assert_eq!(filter_candidates(&occ, spaced), None);
    }

    #[test]
    fn ordinary_acronyms_pass_filters() {
        for (surface, sentence) in [
            ("NASA", "NASA launched"),
            ("TCP", "TCP transport"),
            ("Cryo-EM", "imaging with Cryo-EM today"),
        ] {
            let occ = occurrence(surface, sentence);
            assert_eq!(filter_candidates(&occ, sentence), None, "{surface}");
        }
    }

    const AIX_SENTENCE: &str =
        "using AIX (IBM's UNIX) and PHYP (IBM's hypervisor for POWER systems) in production";

    #[test]
    fn forward_pattern_extracts_parenthesized_expansions() {
        assert_eq!(
            match_forward(AIX_SENTENCE, "AIX").as_deref(),
            Some("IBM's UNIX")
        );
        assert_eq!(
            match_forward(AIX_SENTENCE, "PHYP").as_deref(),
            Some("IBM's hypervisor for POWER systems")
        );
        assert_eq!(match_forward("TCP was used.", "TCP"), None);
    }

    #[test]
    fn stopword_ratio_validation() {
        let stopwords = default_stopwords();
        let threshold = DEFAULT_STOPWORD_THRESHOLD;
        // 3 of 6 tokens are stopwords: rejected.
        assert!(!stopword_ratio_ok(
            "which is usually used in practice",
            stopwords,
            threshold
        ));
        assert!(stopword_ratio_ok(
            "two-factor authentication",
            stopwords,
            threshold
        ));
        // 2 of 4 tokens, counted by hand against the shipped list.
        assert!(!stopword_ratio_ok("state of the art", stopwords, threshold));
        assert!(!stopword_ratio_ok("", stopwords, threshold));
    }

    #[test]
    fn backward_pattern_extracts_preceding_phrase() {
        assert_eq!(
            match_backward("a large language model (LLM) was used", "LLM").as_deref(),
            Some("large language model")
        );
        assert_eq!(
            match_backward("carbon samples secondary chemical shifts (SCS)", "SCS").as_deref(),
            Some("samples secondary chemical shifts")
        );
        assert_eq!(match_backward("no parenthetical here", "XYZ"), None);
    }

    #[test]
    fn backward_pattern_matches_at_sentence_start() {
        assert_eq!(
            match_backward("Virtual private network (VPN) tunnels are common.", "VPN").as_deref(),
            Some("Virtual private network")
        );
    }

    #[test]
    fn refinement_keeps_short_expansions() {
        assert_eq!(
            refine_expansion("LLM", "large language model"),
            "large language model"
        );
    }

    #[test]
    fn refinement_trims_to_longest_qualifying_suffix() {
        assert_eq!(
            refine_expansion("SCS", "samples secondary chemical shifts"),
            "secondary chemical shifts"
        );
    }

    #[test]
    fn refinement_agrees_with_suffix_enumeration_oracle() {
        // Brute-force oracle: enumerate every word-boundary suffix and apply
        // the stated rule directly.
        fn oracle(acronym: &str, expansion: &str) -> String {
            let words: Vec<&str> = expansion.split_whitespace().collect();
            let limit = acronym.chars().count();
            if words.len() <= limit {
                return expansion.to_string();
            }
            let first = acronym.chars().next().unwrap();
            let mut qualifying: Vec<Vec<&str>> = Vec::new();
            for i in 0..words.len() {
                let suffix = words[i..].to_vec();
                let starts = suffix[0]
                    .chars()
                    .next()
                    .is_some_and(|c| c.eq_ignore_ascii_case(&first));
                if starts && suffix.len() <= limit {
                    qualifying.push(suffix);
                }
            }
            match qualifying.iter().max_by_key(|s| s.len()) {
                Some(best) => best.join(" "),
                None => expansion.to_string(),
            }
        }
        for (acronym, expansion) in [
            ("SCS", "samples secondary chemical shifts"),
            ("AB", "apple banana apple branch cider"),
            ("LLM", "large language model"),
            ("KQZF", "kinetic model uses a kernel quantum zeta factor"),
            ("RAS", "Redundant Acronym Syndrome"),
            ("XY", "xenon yield"),
        ] {
            assert_eq!(
                refine_expansion(acronym, expansion),
                oracle(acronym, expansion),
                "disagreement for {acronym}"
            );
        }
        // No suffix of length <= 2 starts with 'a'; the original survives.
        assert_eq!(
            refine_expansion("AB", "apple banana apple branch cider"),
            "apple banana apple branch cider"
        );
    }

    #[test]
    fn refinement_output_is_a_suffix_of_its_input() {
        for (acronym, expansion) in [
            ("SCS", "samples secondary chemical shifts"),
            ("AB", "alpha beta gamma"),
            ("QRS", "quick red squirrel runs south"),
        ] {
            let out = refine_expansion(acronym, expansion);
            let words: Vec<&str> = expansion.split_whitespace().collect();
            let out_words: Vec<&str> = out.split_whitespace().collect();
            assert!(out_words.len() <= words.len().max(acronym.chars().count()));
            assert_eq!(&words[words.len() - out_words.len()..], &out_words[..]);
        }
    }

    #[test]
    fn context_includes_preceding_sentence_only() {
        let stream = stream_of(&[
            "Models vary.",
            "BERT stands for Bidirectional Encoder Representations from Transformers.",
            "Later text is irrelevant.",
        ]);
        let occ = AcronymOccurrence {
            surface: "BERT".into(),
            canonical: "BERT".into(),
            sentence_index: 1,
            char_offset: 0,
        };
        let context = capture_context(&stream, &occ);
        assert_eq!(
            context,
            "(context) Models vary. BERT stands for Bidirectional Encoder Representations from Transformers."
        );
        assert!(!context.contains("irrelevant"));

        let first = AcronymOccurrence {
            sentence_index: 0,
            ..occ
        };
        assert_eq!(capture_context(&stream, &first), "(context) Models vary.");
    }

    #[test]
    fn table_preserves_multiple_expansions_per_key() {
        let stream = stream_of(&[
            "Research on a large language model (LLM) accelerated.",
            "Later, LLM (low-level machine) entered the lexicon.",
        ]);
        let table = build_table(&stream, default_stopwords(), DEFAULT_STOPWORD_THRESHOLD);
        let entry = &table.entries["LLM"];
        let texts: Vec<&str> = entry.expansions.iter().map(|e| e.text.as_str()).collect();
        assert_eq!(texts, vec!["large language model", "low-level machine"]);
        assert_eq!(entry.expansions[0].method, Method::RegexBackward);
        assert_eq!(entry.expansions[1].method, Method::RegexForward);
        assert!(entry.context.is_none());
    }

    #[test]
    fn unresolved_keys_get_first_occurrence_context() {
        let stream = stream_of(&["TCP was fast."]);
        let table = build_table(&stream, default_stopwords(), DEFAULT_STOPWORD_THRESHOLD);
        let entry = &table.entries["TCP"];
        assert!(entry.expansions.is_empty());
        assert_eq!(entry.context.as_deref(), Some("(context) TCP was fast."));
    }

    #[test]
    fn excluded_candidates_are_logged_not_tabled() {
        let stream = stream_of(&["Only XVII appears here."]);
        let table = build_table(&stream, default_stopwords(), DEFAULT_STOPWORD_THRESHOLD);
        assert!(table.entries.is_empty());
        assert_eq!(
            table.exclusions,
            vec![ExclusionRecord {
                canonical: "XVII".into(),
                reason: ExclusionReason::Roman,
            }]
        );
    }

    #[test]
    fn stopword_rejected_forward_match_leaves_context() {
        let stream = stream_of(&["we applied LC-MS (which is usually used in practice) today"]);
        let table = build_table(&stream, default_stopwords(), DEFAULT_STOPWORD_THRESHOLD);
        let entry = &table.entries["LC-MS"];
        assert!(entry.expansions.is_empty());
        assert!(entry.context.as_deref().unwrap().starts_with("(context) "));
    }

    #[test]
    fn table_is_deterministic() {
        let stream = stream_of(&[
            "using AIX (IBM's UNIX) and PHYP (IBM's hypervisor for POWER systems)",
            "a large language model (LLM) was used",
            "TCP was fast.",
        ]);
        let a = build_table(&stream, default_stopwords(), DEFAULT_STOPWORD_THRESHOLD);
        let b = build_table(&stream, default_stopwords(), DEFAULT_STOPWORD_THRESHOLD);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn expanded_resolutions_satisfy_invariants() {
        let stream = stream_of(&[
            "using AIX (IBM's UNIX) and PHYP (IBM's hypervisor for POWER systems)",
            "a large language model (LLM) was used",
            "carbon samples secondary chemical shifts (SCS) were measured",
        ]);
        let table = build_table(&stream, default_stopwords(), DEFAULT_STOPWORD_THRESHOLD);
        for entry in table.entries.values() {
            assert!(
                entry.expansions.is_empty() || entry.context.is_none(),
                "{}: a key never has both expansions and a context",
                entry.canonical
            );
            for exp in &entry.expansions {
                assert!(!exp.text.is_empty());
                assert!(!exp.text.contains(['(', ')']));
                assert_ne!(exp.text, entry.canonical);
                if exp.method == Method::RegexBackward {
                    let first = entry.canonical.chars().next().unwrap();
                    let last = entry.canonical.chars().next_back().unwrap();
                    assert!(exp
                        .text
                        .chars()
                        .next()
                        .is_some_and(|c| c.eq_ignore_ascii_case(&first)));
                    assert!(exp
                        .text
                        .to_ascii_lowercase()
                        .contains(last.to_ascii_lowercase()));
                }
            }
        }
    }
}
