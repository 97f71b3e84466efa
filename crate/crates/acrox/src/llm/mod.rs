//! Chat-completion delegation: chunking, prompt rendering, reply parsing,
//! rate limiting, and the live/record/replay transports.

mod chunk;
mod config;
mod prompt;
mod rate;
mod reply;
mod resolve;
mod transport;

pub use chunk::{chunk_table, chunk_text, PromptChunk, DEFAULT_CHUNK_SIZE, MAX_CHUNK_SIZE};
pub use config::LlmConfig;
pub use prompt::{render_discovery_prompt, render_prompt};
pub use rate::{Clock, RateGate, SystemClock, VirtualClock};
pub use reply::{parse_discovery_reply, parse_reply, ChunkReply, RetryableParseError};
pub use resolve::{ResolveOutcome, Resolver};
pub use transport::{
    prompt_hash, FixtureRecord, LiveTransport, RecordingTransport, ReplayTransport, Transport,
    TransportError,
};
