//! Completion backends: the contract, a table-driven stub, and an HTTP
//! client for the de-facto open completions API shape.

use std::collections::HashMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// What the harness needs from a model server. Greedy completion must be
/// deterministic for a fixed backend state.
pub trait CompletionBackend: Sync {
    /// Greedy completion of `prompt`, up to `max_new_tokens` new tokens.
    fn complete(&self, prompt: &str, max_new_tokens: usize) -> Result<String, HarnessError>;
    /// Total log-probability of `continuation` given `prompt`.
    fn logprob(&self, prompt: &str, continuation: &str) -> Result<f64, HarnessError>;
}

/// Deterministic table-driven backend. Completion rules are `(needle,
/// response)` pairs matched in order against the prompt; log-probability
/// rules map `(needle, continuation)` to a value. Everything else gets the
/// default completion / log-probability.
#[derive(Debug, Clone, Default)]
pub struct StubBackend {
    completions: Vec<(String, String)>,
    suffix_completions: Vec<(String, String)>,
    logprobs: Vec<(String, HashMap<String, f64>)>,
    default_completion: String,
    default_logprob: f64,
    fail_on: Option<String>,
}

impl StubBackend {
    pub fn new() -> Self {
        Self { default_logprob: -100.0, ..Self::default() }
    }

    /// Respond with `response` to any prompt containing `needle`.
    pub fn complete_when(mut self, needle: &str, response: &str) -> Self {
        self.completions.push((needle.to_string(), response.to_string()));
        self
    }

    /// Respond with `response` to any prompt ending in `needle`. A prompt
    /// always ends with its query block, so this keys on the query even when
    /// the same text appears earlier as a filled-in shot.
    pub fn complete_for_query(mut self, needle: &str, response: &str) -> Self {
        self.suffix_completions.push((needle.to_string(), response.to_string()));
        self
    }

    /// Score `continuation` as `logprob` for prompts containing `needle`.
    pub fn logprob_when(mut self, needle: &str, table: &[(&str, f64)]) -> Self {
        self.logprobs.push((
            needle.to_string(),
            table.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        ));
        self
    }

    pub fn default_completion(mut self, text: &str) -> Self {
        self.default_completion = text.to_string();
        self
    }

    /// Simulate a backend failure whenever the prompt contains `needle`.
    pub fn fail_when(mut self, needle: &str) -> Self {
        self.fail_on = Some(needle.to_string());
        self
    }

    fn check_fail(&self, prompt: &str) -> Result<(), HarnessError> {
        if let Some(needle) = &self.fail_on {
            if prompt.contains(needle.as_str()) {
                return Err(HarnessError::Backend(format!("stub failure on `{needle}`")));
            }
        }
        Ok(())
    }
}

impl CompletionBackend for StubBackend {
    fn complete(&self, prompt: &str, _max_new_tokens: usize) -> Result<String, HarnessError> {
        self.check_fail(prompt)?;
        for (needle, response) in &self.suffix_completions {
            if prompt.ends_with(needle.as_str()) {
                return Ok(response.clone());
            }
        }
        for (needle, response) in &self.completions {
            if prompt.contains(needle.as_str()) {
                return Ok(response.clone());
            }
        }
        Ok(self.default_completion.clone())
    }

    fn logprob(&self, prompt: &str, continuation: &str) -> Result<f64, HarnessError> {
        self.check_fail(prompt)?;
        for (needle, table) in &self.logprobs {
            if prompt.contains(needle.as_str()) {
                if let Some(&lp) = table.get(continuation) {
                    return Ok(lp);
                }
            }
        }
        Ok(self.default_logprob)
    }
}

/// Connection settings for an HTTP completions endpoint. `token` goes out as
/// a bearer Authorization header when set; environment variables
/// `ROMANKIT_BACKEND_URL` and `ROMANKIT_BACKEND_TOKEN` fill unset fields.
#[derive(Debug, Clone)]
pub struct HttpBackendConfig {
    pub url: String,
    pub token: Option<String>,
    pub timeout: Duration,
}

impl HttpBackendConfig {
    pub fn from_env() -> Result<Self, HarnessError> {
        let url = std::env::var("ROMANKIT_BACKEND_URL")
            .map_err(|_| HarnessError::Backend("ROMANKIT_BACKEND_URL is not set".into()))?;
        Ok(Self {
            url,
            token: std::env::var("ROMANKIT_BACKEND_TOKEN").ok(),
            timeout: Duration::from_secs(120),
        })
    }
}

/// HTTP client for a completions endpoint: POST of `{prompt, max_tokens,
/// temperature: 0, logprobs?, echo?}`, reading `choices[0].text` and
/// token-level logprobs.
pub struct HttpBackend {
    config: HttpBackendConfig,
    client: reqwest::blocking::Client,
}

#[derive(Serialize)]
struct CompletionRequest<'a> {
    prompt: &'a str,
    max_tokens: usize,
    temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    logprobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    echo: Option<bool>,
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    #[serde(default)]
    text: String,
    #[serde(default)]
    logprobs: Option<Logprobs>,
}

#[derive(Deserialize)]
struct Logprobs {
    #[serde(default)]
    token_logprobs: Vec<Option<f64>>,
    #[serde(default)]
    text_offset: Vec<usize>,
}

impl HttpBackend {
    pub fn new(config: HttpBackendConfig) -> Result<Self, HarnessError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| HarnessError::Backend(e.to_string()))?;
        Ok(Self { config, client })
    }

    fn post(&self, request: &CompletionRequest) -> Result<CompletionResponse, HarnessError> {
        let mut req = self.client.post(&self.config.url).json(request);
        if let Some(token) = &self.config.token {
            req = req.bearer_auth(token);
        }
        let response = req.send().map_err(|e| HarnessError::Backend(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            let body = response.text().unwrap_or_default();
            return Err(HarnessError::Backend(format!("HTTP {status}: {body}")));
        }
        response.json().map_err(|e| HarnessError::Backend(e.to_string()))
    }
}

impl CompletionBackend for HttpBackend {
    fn complete(&self, prompt: &str, max_new_tokens: usize) -> Result<String, HarnessError> {
        let response = self.post(&CompletionRequest {
            prompt,
            max_tokens: max_new_tokens,
            temperature: 0.0,
            logprobs: None,
            echo: None,
        })?;
        response
            .choices
            .into_iter()
            .next()
            .map(|c| c.text)
            .ok_or_else(|| HarnessError::Backend("response carries no choices".into()))
    }

    fn logprob(&self, prompt: &str, continuation: &str) -> Result<f64, HarnessError> {
        let full = format!("{prompt}{continuation}");
        let response = self.post(&CompletionRequest {
            prompt: &full,
            max_tokens: 0,
            temperature: 0.0,
            logprobs: Some(0),
            echo: Some(true),
        })?;
        let choice = response
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| HarnessError::Backend("response carries no choices".into()))?;
        let lp = choice
            .logprobs
            .ok_or_else(|| HarnessError::Backend("response carries no logprobs".into()))?;
        if lp.text_offset.len() != lp.token_logprobs.len() {
            return Err(HarnessError::Backend("logprob arrays are misaligned".into()));
        }
        let mut total = 0.0;
        for (offset, token_lp) in lp.text_offset.iter().zip(&lp.token_logprobs) {
            if *offset >= prompt.len() {
                total += token_lp.ok_or_else(|| {
                    HarnessError::Backend("continuation token has null logprob".into())
                })?;
            }
        }
        Ok(total)
    }
}
