use serde_json::Value;

use crate::extract::AcronymTable;

/// Default number of table entries per request.
pub const DEFAULT_CHUNK_SIZE: usize = 15;
/// Hard ceiling on entries per request.
pub const MAX_CHUNK_SIZE: usize = 20;

/// One batch of (acronym, value) entries plus its serialized dictionary
/// block; the value is either an expansion or a "(context)"-prefixed
/// context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptChunk {
    pub entries: Vec<(String, String)>,
    pub serialized: String,
}

impl PromptChunk {
    pub fn new(entries: Vec<(String, String)>) -> Self {
        let serialized = serialize_entries(&entries);
        Self {
            entries,
            serialized,
        }
    }

    /// Parse a serialized dictionary block back into entries. Inverse of the
    /// serialization used by [`PromptChunk::new`].
    pub fn parse_serialized(block: &str) -> Option<Vec<(String, String)>> {
        let value: Value = serde_json::from_str(block).ok()?;
        let object = value.as_object()?;
        let mut entries = Vec::with_capacity(object.len());
        for (key, value) in object {
            entries.push((key.clone(), value.as_str()?.to_string()));
        }
        Some(entries)
    }
}

fn serialize_entries(entries: &[(String, String)]) -> String {
    let mut out = String::from("{\n");
    for (i, (key, value)) in entries.iter().enumerate() {
        let comma = if i + 1 == entries.len() { "" } else { "," };
        out.push_str(&format!(
            "    {}: {}{}\n",
            serde_json::to_string(key).expect("string serializes"),
            serde_json::to_string(value).expect("string serializes"),
            comma
        ));
    }
    out.push('}');
    out
}

/// Partition table entries, in table order, into consecutive chunks of at
/// most `max_entries` (clamped to [`MAX_CHUNK_SIZE`]). The value sent for a
/// key is its first expansion, or its context when nothing resolved.
pub fn chunk_table(table: &AcronymTable, max_entries: usize) -> Vec<PromptChunk> {
    assert!(max_entries >= 1, "chunk size must be at least 1");
    let cap = max_entries.min(MAX_CHUNK_SIZE);
    let pairs: Vec<(String, String)> = table
        .entries
        .values()
        .map(|entry| {
            let value = entry
                .expansions
                .first()
                .map(|e| e.text.clone())
                .or_else(|| entry.context.clone())
                .unwrap_or_default();
            (entry.canonical.clone(), value)
        })
        .collect();
    pairs
        .chunks(cap)
        .map(|chunk| PromptChunk::new(chunk.to_vec()))
        .collect()
}

/// Split free text into chunks of at most `max_chars` characters, breaking
/// on line boundaries where possible. Used by the direct-extraction modes.
pub fn chunk_text(text: &str, max_chars: usize) -> Vec<String> {
    assert!(max_chars >= 1);
    let mut chunks = Vec::new();
    let mut current = String::new();
    for line in text.split_inclusive('\n') {
        if !current.is_empty() && current.chars().count() + line.chars().count() > max_chars {
            chunks.push(std::mem::take(&mut current));
        }
        if line.chars().count() > max_chars {
            // A single oversized line is split at character boundaries.
            let chars: Vec<char> = line.chars().collect();
            for piece in chars.chunks(max_chars) {
                chunks.push(piece.iter().collect());
            }
            continue;
        }
        current.push_str(line);
    }
    if !current.is_empty() {
        chunks.push(current);
    }
    chunks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{build_table, AcronymEntry, AcronymTable};
    use crate::preprocess::{Sentence, SentenceStream};
    use crate::stopwords::default_stopwords;

    fn table_with_keys(n: usize) -> AcronymTable {
        let mut table = AcronymTable::default();
        for i in 0..n {
            let key = format!("KEY{i}");
            table.entries.insert(
                key.clone(),
                AcronymEntry {
                    canonical: key,
                    occurrences: Vec::new(),
                    expansions: Vec::new(),
                    context: Some(format!("(context) sentence {i}.")),
                },
            );
        }
        table
    }

    #[test]
    fn partitions_in_table_order() {
        let sizes: Vec<usize> = chunk_table(&table_with_keys(33), 15)
            .iter()
            .map(|c| c.entries.len())
            .collect();
        assert_eq!(sizes, vec![15, 15, 3]);

        let sizes: Vec<usize> = chunk_table(&table_with_keys(15), 15)
            .iter()
            .map(|c| c.entries.len())
            .collect();
        assert_eq!(sizes, vec![15]);

        assert!(chunk_table(&table_with_keys(0), 15).is_empty());
    }

    #[test]
    fn oversized_requests_are_clamped_to_the_hard_cap() {
        let chunks = chunk_table(&table_with_keys(45), 50);
        assert!(chunks.iter().all(|c| c.entries.len() <= MAX_CHUNK_SIZE));
    }

    #[test]
    fn serialized_form_round_trips() {
        let entries = vec![
            ("LLM".to_string(), "large language model".to_string()),
            (
                "BERT".to_string(),
                "(context) BERT stands for \"something\".".to_string(),
            ),
        ];
        let chunk = PromptChunk::new(entries.clone());
        assert_eq!(PromptChunk::parse_serialized(&chunk.serialized), Some(entries));
    }

    #[test]
    fn expansion_entries_send_their_first_expansion() {
        let stream = SentenceStream {
            sentences: vec![Sentence {
                index: 0,
                text: "a large language model (LLM) was used".into(),
                span: (0, 0),
            }],
        };
        let table = build_table(&stream, default_stopwords(), 1.0 / 3.0);
        let chunks = chunk_table(&table, 15);
        assert_eq!(
            chunks[0].entries,
            vec![("LLM".to_string(), "large language model".to_string())]
        );
    }

    #[test]
    fn text_chunks_respect_the_character_budget() {
        let text = "line one\nline two\nline three\n";
        let chunks = chunk_text(text, 12);
        assert!(chunks.iter().all(|c| c.chars().count() <= 12));
        assert_eq!(chunks.concat(), text);
        let oversized = "x".repeat(30);
        let chunks = chunk_text(&oversized, 12);
        assert_eq!(chunks.concat(), oversized);
    }
}
