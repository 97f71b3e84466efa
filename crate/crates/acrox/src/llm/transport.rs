use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::config::LlmConfig;

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("http: {0}")]
    Http(String),
    #[error("endpoint returned status {0}: {1}")]
    BadStatus(u16, String),
    #[error("malformed completion response: {0}")]
    BadResponse(String),
    #[error("api key environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("no recorded reply for prompt hash {0}")]
    FixtureMiss(String),
    #[error("fixture: {0}")]
    Fixture(String),
}

/// One request/response over a chat-completion-style endpoint (or a stand-in
/// for one).
pub trait Transport: Send + Sync {
    fn send(&self, prompt: &str) -> Result<String, TransportError>;
}

/// Stable fixture key for a prompt.
pub fn prompt_hash(prompt: &str) -> String {
    let digest = Sha256::digest(prompt.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One line of a fixture file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub prompt_hash: String,
    pub reply: String,
}

/// HTTP POST to a chat-completion endpoint. The request carries the model
/// name, temperature, and the prompt as the user message; the reply is the
/// first choice's message content. Authentication is a bearer token read
/// from the environment variable named in the config.
pub struct LiveTransport {
    config: LlmConfig,
    client: reqwest::blocking::Client,
}

impl LiveTransport {
    pub fn new(config: LlmConfig) -> Self {
        Self {
            config,
            client: reqwest::blocking::Client::new(),
        }
    }
}

impl Transport for LiveTransport {
    fn send(&self, prompt: &str) -> Result<String, TransportError> {
        let key = std::env::var(&self.config.api_key_env)
            .map_err(|_| TransportError::MissingApiKey(self.config.api_key_env.clone()))?;
        let body = serde_json::json!({
            "model": self.config.model_name,
            "temperature": self.config.temperature,
            "messages": [{"role": "user", "content": prompt}],
        });
        let response = self
            .client
            .post(&self.config.endpoint)
            .bearer_auth(key)
            .json(&body)
            .send()
            .map_err(|e| TransportError::Http(e.to_string()))?;
        let status = response.status();
        let text = response
            .text()
            .map_err(|e| TransportError::Http(e.to_string()))?;
        if !status.is_success() {
            return Err(TransportError::BadStatus(status.as_u16(), text));
        }
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| TransportError::BadResponse(e.to_string()))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| TransportError::BadResponse("missing choices[0].message.content".into()))
    }
}

/// Answers from a fixture keyed by prompt hash; order-independent on disk.
pub struct ReplayTransport {
    replies: HashMap<String, String>,
}

impl ReplayTransport {
    pub fn load(path: &Path) -> Result<Self, TransportError> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| TransportError::Fixture(format!("{}: {e}", path.display())))?;
        let mut replies = HashMap::new();
        for line in raw.lines().filter(|l| !l.trim().is_empty()) {
            let record: FixtureRecord = serde_json::from_str(line)
                .map_err(|e| TransportError::Fixture(format!("bad fixture line: {e}")))?;
            replies.insert(record.prompt_hash, record.reply);
        }
        Ok(Self { replies })
    }
}

impl Transport for ReplayTransport {
    fn send(&self, prompt: &str) -> Result<String, TransportError> {
        let hash = prompt_hash(prompt);
        self.replies
            .get(&hash)
            .cloned()
            .ok_or(TransportError::FixtureMiss(hash))
    }
}

/// Delegates to an inner transport and appends each (prompt hash, reply)
/// pair to a fixture file.
pub struct RecordingTransport {
    inner: Box<dyn Transport>,
    path: PathBuf,
    write_lock: Mutex<()>,
}

impl RecordingTransport {
    pub fn new(inner: Box<dyn Transport>, path: PathBuf) -> Self {
        Self {
            inner,
            path,
            write_lock: Mutex::new(()),
        }
    }
}

impl Transport for RecordingTransport {
    fn send(&self, prompt: &str) -> Result<String, TransportError> {
        let reply = self.inner.send(prompt)?;
        let record = FixtureRecord {
            prompt_hash: prompt_hash(prompt),
            reply: reply.clone(),
        };
        let line = serde_json::to_string(&record)
            .map_err(|e| TransportError::Fixture(e.to_string()))?;
        let _guard = self.write_lock.lock().unwrap();
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| TransportError::Fixture(format!("{}: {e}", self.path.display())))?;
        writeln!(file, "{line}").map_err(|e| TransportError::Fixture(e.to_string()))?;
        Ok(reply)
    }
}
