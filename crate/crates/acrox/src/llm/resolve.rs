use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use indexmap::IndexMap;

use super::chunk::{chunk_table, chunk_text};
use super::config::LlmConfig;
use super::prompt::{render_discovery_prompt, render_prompt};
use super::rate::{Clock, RateGate};
use super::reply::{parse_discovery_reply, parse_reply};
use super::transport::Transport;
use crate::extract::AcronymTable;

/// Merged result of a resolution run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolveOutcome {
    /// Acronym to the expansion the model settled on, in table order.
    pub resolved: IndexMap<String, String>,
    /// Acronyms the model dropped or that failed after retries, with their
    /// last known context.
    pub unresolved: IndexMap<String, Option<String>>,
    pub warnings: Vec<String>,
}

/// Dispatches prompts over a transport with bounded concurrency, a sliding
/// rate window, and a retry budget for transport failures and unparseable
/// replies; results merge in request order regardless of completion order.
pub struct Resolver<'a> {
    config: &'a LlmConfig,
    transport: &'a dyn Transport,
    clock: &'a dyn Clock,
    gate: Mutex<RateGate>,
}

#[derive(Debug, Clone)]
enum DispatchFailure {
    Transport(String),
    Unparseable,
    NoAttempt,
}

impl std::fmt::Display for DispatchFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DispatchFailure::Transport(e) => write!(f, "transport error: {e}"),
            DispatchFailure::Unparseable => write!(f, "reply never parsed"),
            DispatchFailure::NoAttempt => write!(f, "no attempt made"),
        }
    }
}

impl<'a> Resolver<'a> {
    pub fn new(config: &'a LlmConfig, transport: &'a dyn Transport, clock: &'a dyn Clock) -> Self {
        Self {
            config,
            transport,
            clock,
            gate: Mutex::new(RateGate::new(config.requests_per_minute)),
        }
    }

    /// Refine an extraction table: every entry is sent (chunked), replies
    /// merge in table order, and entries the model ignored surface as
    /// unresolved with their last known context.
    pub fn resolve_all(&self, table: &AcronymTable, chunk_size: usize) -> ResolveOutcome {
        let chunks = chunk_table(table, chunk_size);
        let mut outcome = ResolveOutcome::default();
        if chunks.is_empty() {
            return outcome;
        }
        let prompts: Vec<String> = chunks.iter().map(render_prompt).collect();
        let replies = self.dispatch(&prompts, |i, reply| parse_reply(reply, &chunks[i]).is_ok());

        let context_of = |key: &str| -> Option<String> {
            table.entries.get(key).and_then(|e| e.context.clone())
        };
        for (chunk, reply) in chunks.iter().zip(replies) {
            match reply {
                Ok(text) => {
                    let parsed = parse_reply(&text, chunk).expect("validated during dispatch");
                    for (key, value) in parsed.resolved {
                        outcome.resolved.insert(key, value);
                    }
                    for key in parsed.unresolved {
                        let context = context_of(&key);
                        outcome.unresolved.insert(key, context);
                    }
                    outcome.warnings.extend(parsed.warnings);
                }
                Err(failure) => {
                    for (key, _) in &chunk.entries {
                        outcome.unresolved.insert(key.clone(), context_of(key));
                    }
                    outcome
                        .warnings
                        .push(format!("chunk failed after retries: {failure}"));
                }
            }
        }
        outcome
    }

    /// Direct extraction over raw text: each chunk is sent with the
    /// discovery prompt and every returned pair is accepted (first reply
    /// wins on duplicate keys).
    pub fn resolve_text(&self, text: &str, max_chars: usize) -> ResolveOutcome {
        let chunks = chunk_text(text, max_chars);
        let mut outcome = ResolveOutcome::default();
        if chunks.is_empty() {
            return outcome;
        }
        let prompts: Vec<String> = chunks
            .iter()
            .map(|c| render_discovery_prompt(c))
            .collect();
        let replies = self.dispatch(&prompts, |_, reply| parse_discovery_reply(reply).is_ok());
        for reply in replies {
            match reply {
                Ok(text) => {
                    for (key, value) in
                        parse_discovery_reply(&text).expect("validated during dispatch")
                    {
                        outcome.resolved.entry(key).or_insert(value);
                    }
                }
                Err(failure) => outcome
                    .warnings
                    .push(format!("text chunk failed after retries: {failure}")),
            }
        }
        outcome
    }

    fn dispatch<F>(&self, prompts: &[String], reply_ok: F) -> Vec<Result<String, DispatchFailure>>
    where
        F: Fn(usize, &str) -> bool + Sync,
    {
        let results: Vec<Mutex<Option<Result<String, DispatchFailure>>>> =
            prompts.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        let workers = self.config.max_concurrency.max(1).min(prompts.len());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let index = next.fetch_add(1, Ordering::SeqCst);
                    if index >= prompts.len() {
                        break;
                    }
                    let result = self.send_with_retries(index, &prompts[index], &reply_ok);
                    *results[index].lock().unwrap() = Some(result);
                });
            }
        });
        results
            .into_iter()
            .map(|slot| slot.into_inner().unwrap().expect("worker filled slot"))
            .collect()
    }

    fn send_with_retries<F>(
        &self,
        index: usize,
        prompt: &str,
        reply_ok: &F,
    ) -> Result<String, DispatchFailure>
    where
        F: Fn(usize, &str) -> bool + Sync,
    {
        let attempts = self.config.max_retries as u64 + 1;
        let mut failure = DispatchFailure::NoAttempt;
        for _ in 0..attempts {
            self.acquire_permit();
            match self.transport.send(prompt) {
                Ok(reply) if reply_ok(index, &reply) => return Ok(reply),
                Ok(_) => failure = DispatchFailure::Unparseable,
                Err(e) => failure = DispatchFailure::Transport(e.to_string()),
            }
        }
        Err(failure)
    }

    fn acquire_permit(&self) {
        loop {
            let wait = {
                let mut gate = self.gate.lock().unwrap();
                match gate.try_acquire(self.clock.now()) {
                    Ok(()) => return,
                    Err(wait) => wait,
                }
            };
            self.clock.sleep(wait);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::AcronymEntry;
    use crate::llm::rate::VirtualClock;
    use crate::llm::transport::{prompt_hash, TransportError};
    use std::collections::HashMap;
    use std::sync::atomic::AtomicU32;

    fn contextual_table(keys: &[&str]) -> AcronymTable {
        let mut table = AcronymTable::default();
        for key in keys {
            table.entries.insert(
                key.to_string(),
                AcronymEntry {
                    canonical: key.to_string(),
                    occurrences: Vec::new(),
                    expansions: Vec::new(),
                    context: Some(format!("(context) {key} was used.")),
                },
            );
        }
        table
    }

    struct CountingTransport {
        calls: AtomicU32,
        replies: HashMap<String, String>,
        fail: bool,
    }

    impl CountingTransport {
        fn scripted(table: &AcronymTable, chunk_size: usize, answer: &dyn Fn(&str) -> Option<String>) -> Self {
            let mut replies = HashMap::new();
            for chunk in chunk_table(table, chunk_size) {
                let prompt = render_prompt(&chunk);
                let mut object = serde_json::Map::new();
                for (key, _) in &chunk.entries {
                    if let Some(expansion) = answer(key) {
                        object.insert(key.clone(), serde_json::Value::String(expansion));
                    }
                }
                replies.insert(
                    prompt_hash(&prompt),
                    serde_json::to_string(&serde_json::Value::Object(object)).unwrap(),
                );
            }
            Self {
                calls: AtomicU32::new(0),
                replies,
                fail: false,
            }
        }

        fn failing() -> Self {
            Self {
                calls: AtomicU32::new(0),
                replies: HashMap::new(),
                fail: true,
            }
        }
    }

    impl Transport for CountingTransport {
        fn send(&self, prompt: &str) -> Result<String, TransportError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            if self.fail {
                return Err(TransportError::Http("connection refused".into()));
            }
            let hash = prompt_hash(prompt);
            self.replies
                .get(&hash)
                .cloned()
                .ok_or(TransportError::FixtureMiss(hash))
        }
    }

    #[test]
    fn empty_table_makes_zero_transport_calls() {
        let table = AcronymTable::default();
        let config = LlmConfig::default();
        let clock = VirtualClock::new();
        let transport = CountingTransport::failing();
        let resolver = Resolver::new(&config, &transport, &clock);
        let outcome = resolver.resolve_all(&table, 15);
        assert!(outcome.resolved.is_empty());
        assert_eq!(transport.calls.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn replay_resolution_is_deterministic() {
        let table = contextual_table(&["AAA", "BBB", "CCC"]);
        let answer = |key: &str| Some(format!("{} expanded", key.to_lowercase()));
        let transport = CountingTransport::scripted(&table, 2, &answer);
        let config = LlmConfig::default();
        let clock = VirtualClock::new();
        let resolver = Resolver::new(&config, &transport, &clock);
        let first = resolver.resolve_all(&table, 2);
        let second = resolver.resolve_all(&table, 2);
        assert_eq!(first, second);
        assert_eq!(
            first.resolved.get("AAA").map(String::as_str),
            Some("aaa expanded")
        );
        assert_eq!(first.resolved.len(), 3);
    }

    #[test]
    fn keys_the_model_skips_are_unresolved_with_context() {
        let table = contextual_table(&["AAA", "QZKP"]);
        let answer = |key: &str| (key != "QZKP").then(|| format!("{key} resolved"));
        let transport = CountingTransport::scripted(&table, 15, &answer);
        let config = LlmConfig {
            max_retries: 0,
            ..LlmConfig::default()
        };
        let clock = VirtualClock::new();
        let resolver = Resolver::new(&config, &transport, &clock);
        let outcome = resolver.resolve_all(&table, 15);
        assert_eq!(
            outcome.unresolved.get("QZKP"),
            Some(&Some("(context) QZKP was used.".to_string()))
        );
    }

    #[test]
    fn replay_fixture_yields_the_exact_golden_map() {
        use crate::llm::transport::{FixtureRecord, ReplayTransport};

        let table = contextual_table(&["AAA", "BBB", "CCC"]);
        let dir = tempfile::tempdir().unwrap();
        let fixture = dir.path().join("fixture.jsonl");
        // Hand-written fixture: one reply per chunk prompt, keyed by hash.
        let mut lines = Vec::new();
        for chunk in chunk_table(&table, 2) {
            let mut object = serde_json::Map::new();
            for (key, _) in &chunk.entries {
                object.insert(key.clone(), format!("golden {key}").into());
            }
            lines.push(
                serde_json::to_string(&FixtureRecord {
                    prompt_hash: prompt_hash(&render_prompt(&chunk)),
                    reply: serde_json::Value::Object(object).to_string(),
                })
                .unwrap(),
            );
        }
        std::fs::write(&fixture, lines.join("\n")).unwrap();

        let transport = ReplayTransport::load(&fixture).unwrap();
        let config = LlmConfig::default();
        let clock = VirtualClock::new();
        let resolver = Resolver::new(&config, &transport, &clock);
        let first = resolver.resolve_all(&table, 2);
        let second = resolver.resolve_all(&table, 2);

        let golden: Vec<(&str, String)> = vec![
            ("AAA", "golden AAA".into()),
            ("BBB", "golden BBB".into()),
            ("CCC", "golden CCC".into()),
        ];
        let got: Vec<(&str, String)> = first
            .resolved
            .iter()
            .map(|(k, v)| (k.as_str(), v.clone()))
            .collect();
        assert_eq!(got, golden);
        assert_eq!(
            serde_json::to_vec(&first.resolved).unwrap(),
            serde_json::to_vec(&second.resolved).unwrap(),
            "replay resolution must be byte-identical across runs"
        );
    }

    #[test]
    fn transport_failure_marks_entries_unresolved_and_run_completes() {
        let table = contextual_table(&["AAA", "BBB"]);
        let transport = CountingTransport::failing();
        let config = LlmConfig {
            max_retries: 2,
            ..LlmConfig::default()
        };
        let clock = VirtualClock::new();
        let resolver = Resolver::new(&config, &transport, &clock);
        let outcome = resolver.resolve_all(&table, 15);
        assert_eq!(outcome.unresolved.len(), 2);
        assert!(outcome.resolved.is_empty());
        // One chunk, three attempts (1 + 2 retries).
        assert_eq!(transport.calls.load(Ordering::SeqCst), 3);
    }
}
