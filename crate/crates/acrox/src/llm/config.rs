use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("max_concurrency must be at least 1")]
    ZeroConcurrency,
    #[error("requests_per_minute must be at least 1")]
    ZeroRate,
    #[error("temperature must be non-negative")]
    NegativeTemperature,
}

/// Connection and throughput settings for a chat-completion-style endpoint.
/// The API key is read from the environment variable named in
/// `api_key_env`, never from a file or flag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LlmConfig {
    pub endpoint: String,
    pub model_name: String,
    pub temperature: f64,
    pub max_retries: u32,
    pub requests_per_minute: u32,
    pub max_concurrency: usize,
    pub api_key_env: String,
}

impl Default for LlmConfig {
    fn default() -> Self {
        Self {
            endpoint: String::new(),
            model_name: "gpt-4o-mini".to_string(),
            temperature: 0.0,
            max_retries: 3,
            requests_per_minute: 60,
            max_concurrency: 4,
            api_key_env: "OPENAI_API_KEY".to_string(),
        }
    }
}

impl LlmConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_concurrency < 1 {
            return Err(ConfigError::ZeroConcurrency);
        }
        if self.requests_per_minute < 1 {
            return Err(ConfigError::ZeroRate);
        }
        if self.temperature < 0.0 {
            return Err(ConfigError::NegativeTemperature);
        }
        Ok(())
    }
}
