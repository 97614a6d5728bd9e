//! Completion backends: an HTTP client for completions-style endpoints and a
//! deterministic mock for offline runs.

mod http;
mod mock;
mod retry;

pub use http::{http_complete, ApiStyle, Completion, EndpointConfig, HttpBackend, API_KEY_ENV};
pub use mock::{mock_complete, MockBackend, MOCK_ANSWER};
pub use retry::{RetryPolicy, Sleeper, ThreadSleeper};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sampling parameters sent with every completion request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationParams {
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub top_p: f64,
    pub frequency_penalty: f64,
    pub presence_penalty: f64,
}

impl Default for GenerationParams {
    fn default() -> Self {
        Self {
            model: "text-davinci-003".to_string(),
            temperature: 0.0,
            max_tokens: 200,
            top_p: 1.0,
            frequency_penalty: 0.0,
            presence_penalty: 0.0,
        }
    }
}

impl GenerationParams {
    pub fn validate(&self) -> Result<(), BackendError> {
        let bad = |what: &str| Err(BackendError::InvalidParams(what.to_string()));
        if self.model.trim().is_empty() {
            return bad("model must be set");
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return bad("temperature must be >= 0");
        }
        if self.max_tokens == 0 {
            return bad("max_tokens must be > 0");
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return bad("top_p must lie in (0, 1]");
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("transport failure after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("HTTP {status} after {attempts} attempt(s): {body}")]
    Status { status: u16, attempts: u32, body: String },
    #[error("unexpected response body: {0}")]
    Protocol(String),
    #[error("no credential: set {API_KEY_ENV}")]
    MissingCredential,
    #[error("prompt is empty")]
    EmptyPrompt,
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
}

/// Something that turns a prompt into generated text.
///
/// Implementations are shared across worker threads.
pub trait CompletionBackend: Send + Sync {
    fn complete(&self, prompt: &str, params: &GenerationParams) -> Result<String, BackendError>;
}

impl<B: CompletionBackend + ?Sized> CompletionBackend for Box<B> {
    fn complete(&self, prompt: &str, params: &GenerationParams) -> Result<String, BackendError> {
        (**self).complete(prompt, params)
    }
}
