use std::fmt;
use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::StatusCode;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::retry::{RetryPolicy, Sleeper, ThreadSleeper};
use super::{BackendError, CompletionBackend, GenerationParams};

/// Environment variable holding the bearer credential.
pub const API_KEY_ENV: &str = "BIOQA_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApiStyle {
    /// `POST {base}/completions` with a `prompt` field.
    Completions,
    /// `POST {base}/chat/completions`; the prompt becomes a single user message.
    Chat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndpointConfig {
    pub base_url: String,
    pub api_style: ApiStyle,
    pub timeout_secs: u64,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.openai.com/v1".to_string(),
            api_style: ApiStyle::Completions,
            timeout_secs: 60,
        }
    }
}

impl EndpointConfig {
    pub fn url(&self) -> String {
        let base = self.base_url.trim_end_matches('/');
        match self.api_style {
            ApiStyle::Completions => format!("{base}/completions"),
            ApiStyle::Chat => format!("{base}/chat/completions"),
        }
    }
}

#[derive(Serialize)]
struct CompletionRequest<'a> {
    model: &'a str,
    prompt: &'a str,
    temperature: f64,
    max_tokens: u32,
    top_p: f64,
    frequency_penalty: f64,
    presence_penalty: f64,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 1],
    temperature: f64,
    max_tokens: u32,
    top_p: f64,
    frequency_penalty: f64,
    presence_penalty: f64,
}

fn request_body(style: ApiStyle, prompt: &str, p: &GenerationParams) -> Value {
    let v = match style {
        ApiStyle::Completions => serde_json::to_value(CompletionRequest {
            model: &p.model,
            prompt,
            temperature: p.temperature,
            max_tokens: p.max_tokens,
            top_p: p.top_p,
            frequency_penalty: p.frequency_penalty,
            presence_penalty: p.presence_penalty,
        }),
        ApiStyle::Chat => serde_json::to_value(ChatRequest {
            model: &p.model,
            messages: [ChatMessage {
                role: "user",
                content: prompt,
            }],
            temperature: p.temperature,
            max_tokens: p.max_tokens,
            top_p: p.top_p,
            frequency_penalty: p.frequency_penalty,
            presence_penalty: p.presence_penalty,
        }),
    };
    v.expect("request serialises")
}

fn first_choice_text(style: ApiStyle, body: &str) -> Result<String, BackendError> {
    let v: Value = serde_json::from_str(body).map_err(|e| BackendError::Protocol(e.to_string()))?;
    let choice = v
        .get("choices")
        .and_then(|c| c.get(0))
        .ok_or_else(|| BackendError::Protocol("missing choices[0]".into()))?;
    let text = match style {
        ApiStyle::Completions => choice.get("text"),
        ApiStyle::Chat => choice.get("message").and_then(|m| m.get("content")),
    };
    text.and_then(Value::as_str)
        .map(|t| t.trim().to_string())
        .ok_or_else(|| BackendError::Protocol("choices[0] carries no text".into()))
}

/// Generated text and the number of HTTP attempts it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub text: String,
    pub attempts: u32,
}

impl Completion {
    pub fn retries(&self) -> u32 {
        self.attempts.saturating_sub(1)
    }
}

/// Sends one completion request, retrying transport errors, 429 and 5xx.
pub fn http_complete(
    client: &Client,
    prompt: &str,
    params: &GenerationParams,
    endpoint: &EndpointConfig,
    api_key: &str,
    policy: &RetryPolicy,
    sleeper: &dyn Sleeper,
) -> Result<Completion, BackendError> {
    if prompt.is_empty() {
        return Err(BackendError::EmptyPrompt);
    }
    let url = endpoint.url();
    let body = request_body(endpoint.api_style, prompt, params);
    let max = policy.attempts();
    let mut attempt = 0;
    loop {
        attempt += 1;
        let failure = match client.post(&url).bearer_auth(api_key).json(&body).send() {
            Err(e) => BackendError::Transport {
                attempts: attempt,
                message: e.to_string(),
            },
            Ok(resp) => {
                let status = resp.status();
                let text = resp.text().map_err(|e| BackendError::Transport {
                    attempts: attempt,
                    message: e.to_string(),
                })?;
                if status.is_success() {
                    return first_choice_text(endpoint.api_style, &text).map(|text| Completion {
                        text,
                        attempts: attempt,
                    });
                }
                let err = BackendError::Status {
                    status: status.as_u16(),
                    attempts: attempt,
                    body: text,
                };
                if !(status == StatusCode::TOO_MANY_REQUESTS || status.is_server_error()) {
                    return Err(err);
                }
                err
            }
        };
        if attempt >= max {
            return Err(failure);
        }
        tracing::debug!(attempt, error = %failure, "retrying completion request");
        sleeper.sleep(policy.next_delay(attempt - 1));
    }
}

pub struct HttpBackend {
    client: Client,
    endpoint: EndpointConfig,
    api_key: String,
    policy: RetryPolicy,
    sleeper: Box<dyn Sleeper>,
}

impl fmt::Debug for HttpBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpBackend")
            .field("endpoint", &self.endpoint)
            .field("policy", &self.policy)
            .finish_non_exhaustive()
    }
}

impl HttpBackend {
    pub fn new(
        endpoint: EndpointConfig,
        api_key: impl Into<String>,
        policy: RetryPolicy,
    ) -> Result<Self, BackendError> {
        let client = Client::builder()
            .timeout(Duration::from_secs(endpoint.timeout_secs.max(1)))
            .build()
            .map_err(|e| BackendError::Transport {
                attempts: 0,
                message: e.to_string(),
            })?;
        Ok(Self {
            client,
            endpoint,
            api_key: api_key.into(),
            policy,
            sleeper: Box::new(ThreadSleeper),
        })
    }

    /// Reads the credential from [`API_KEY_ENV`].
    pub fn from_env(endpoint: EndpointConfig, policy: RetryPolicy) -> Result<Self, BackendError> {
        match std::env::var(API_KEY_ENV) {
            Ok(key) if !key.trim().is_empty() => Self::new(endpoint, key.trim(), policy),
            _ => Err(BackendError::MissingCredential),
        }
    }

    pub fn with_sleeper(mut self, sleeper: impl Sleeper + 'static) -> Self {
        self.sleeper = Box::new(sleeper);
        self
    }

    pub fn complete_with_stats(&self, prompt: &str, params: &GenerationParams) -> Result<Completion, BackendError> {
        http_complete(
            &self.client,
            prompt,
            params,
            &self.endpoint,
            &self.api_key,
            &self.policy,
            self.sleeper.as_ref(),
        )
    }
}

impl CompletionBackend for HttpBackend {
    fn complete(&self, prompt: &str, params: &GenerationParams) -> Result<String, BackendError> {
        self.complete_with_stats(prompt, params).map(|c| c.text)
    }
}
