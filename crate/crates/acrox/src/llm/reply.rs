use std::collections::HashSet;

use serde_json::Value;
use thiserror::Error;

use super::chunk::PromptChunk;

/// The reply was not a JSON object of string pairs; the request should be
/// re-sent (up to the retry budget).
#[derive(Debug, Error, PartialEq, Eq)]
#[error("unparseable reply: {0}")]
pub struct RetryableParseError(pub String);

/// A parsed reply reconciled against its request chunk.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChunkReply {
    /// Requested keys the model answered, in chunk order.
    pub resolved: Vec<(String, String)>,
    /// Requested keys the model ignored or left empty.
    pub unresolved: Vec<String>,
    pub warnings: Vec<String>,
}

/// Parse a reply for a refinement chunk: strip optional markdown code
/// fences, require a single JSON object of string pairs, drop keys that were
/// never requested (with a warning), and record requested keys the model
/// skipped as unresolved.
pub fn parse_reply(reply: &str, chunk: &PromptChunk) -> Result<ChunkReply, RetryableParseError> {
    let pairs = parse_string_object(reply)?;
    let requested: HashSet<&str> = chunk.entries.iter().map(|(k, _)| k.as_str()).collect();

    let mut out = ChunkReply::default();
    for (key, _) in &pairs {
        if !requested.contains(key.as_str()) {
            out.warnings
                .push(format!("reply contained unrequested key {key:?}; dropped"));
        }
    }
    for (key, _) in &chunk.entries {
        match pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.trim())
        {
            Some(value) if !value.is_empty() => {
                out.resolved.push((key.clone(), value.to_string()));
            }
            _ => out.unresolved.push(key.clone()),
        }
    }
    Ok(out)
}

/// Parse a discovery-mode reply: every string pair is accepted as a found
/// acronym-expansion pair.
pub fn parse_discovery_reply(reply: &str) -> Result<Vec<(String, String)>, RetryableParseError> {
    Ok(parse_string_object(reply)?
        .into_iter()
        .filter(|(_, v)| !v.trim().is_empty())
        .collect())
}

fn parse_string_object(reply: &str) -> Result<Vec<(String, String)>, RetryableParseError> {
    let body = strip_code_fences(reply);
    let value: Value = serde_json::from_str(body)
        .map_err(|e| RetryableParseError(format!("not JSON: {e}")))?;
    let object = value
        .as_object()
        .ok_or_else(|| RetryableParseError("reply is not a JSON object".into()))?;
    let mut pairs = Vec::with_capacity(object.len());
    for (key, value) in object {
        let text = value
            .as_str()
            .ok_or_else(|| RetryableParseError(format!("value for {key:?} is not a string")))?;
        pairs.push((key.clone(), text.to_string()));
    }
    Ok(pairs)
}

fn strip_code_fences(reply: &str) -> &str {
    let trimmed = reply.trim();
    let Some(rest) = trimmed.strip_prefix("```") else {
        return trimmed;
    };
    let rest = match rest.split_once('\n') {
        Some((_lang, body)) => body,
        None => return trimmed,
    };
    rest.trim_end()
        .strip_suffix("```")
        .map(str::trim_end)
        .unwrap_or(rest)
}
