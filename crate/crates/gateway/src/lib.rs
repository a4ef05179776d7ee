//! Response sampling against an OpenAI-compatible chat completions API.
//!
//! [`sample`] fans prompts out with bounded concurrency, retries
//! transient failures with exponential backoff, and always returns one
//! record per (prompt, sample index): requests that exhaust their
//! retries come back with [`TransportStatus::Failed`] and empty text so
//! downstream stages can account for every sample.

use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Semaphore;
use tokio::task::JoinSet;

use sorites_core::records::{PromptRow, ResponseRecord, TransportStatus};

/// Connection and sampling parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GatewayConfig {
    /// Full chat-completions URL, e.g. `http://localhost:8080/v1/chat/completions`.
    pub endpoint: String,
    /// Model name sent with every request and recorded on every sample.
    pub model: String,
    /// Environment variable holding the bearer token; requests go out
    /// without an Authorization header when it is unset.
    pub api_key_env: String,
    pub temperature: f64,
    pub samples_per_prompt: u32,
    pub max_tokens: u32,
    pub timeout_secs: u64,
    /// Additional attempts after the first failure.
    pub max_retries: u32,
    /// Maximum in-flight requests.
    pub concurrency: usize,
}

impl Default for GatewayConfig {
    fn default() -> GatewayConfig {
        GatewayConfig {
            endpoint: "http://localhost:8000/v1/chat/completions".to_owned(),
            model: "local-model".to_owned(),
            api_key_env: "OPENAI_API_KEY".to_owned(),
            temperature: 0.3,
            samples_per_prompt: 4,
            max_tokens: 2048,
            timeout_secs: 120,
            max_retries: 3,
            concurrency: 8,
        }
    }
}

/// Failures that prevent sampling from starting at all.
///
/// Per-request failures are not errors; they become `Failed` records.
#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error("failed to build http client: {0}")]
    Client(#[from] reqwest::Error),
    #[error("failed to start async runtime: {0}")]
    Runtime(#[from] std::io::Error),
}

fn epoch_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_secs()
}

async fn one_request(
    client: &reqwest::Client,
    cfg: &GatewayConfig,
    api_key: Option<&str>,
    prompt_text: &str,
) -> Result<String, String> {
    let body = json!({
        "model": cfg.model,
        "messages": [{"role": "user", "content": prompt_text}],
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_tokens,
    });
    let mut request = client.post(&cfg.endpoint).json(&body);
    if let Some(key) = api_key {
        request = request.bearer_auth(key);
    }
    let response = request.send().await.map_err(|e| e.to_string())?;
    let status = response.status();
    if !status.is_success() {
        return Err(format!("http status {status}"));
    }
    let value: serde_json::Value = response.json().await.map_err(|e| e.to_string())?;
    value
        .pointer("/choices/0/message/content")
        .and_then(|v| v.as_str())
        .map(str::to_owned)
        .ok_or_else(|| "response missing choices[0].message.content".to_owned())
}

async fn sample_one(
    client: reqwest::Client,
    cfg: Arc<GatewayConfig>,
    api_key: Option<Arc<str>>,
    prompt_id: String,
    prompt_text: String,
    sample_index: u32,
) -> ResponseRecord {
    let mut record = ResponseRecord {
        prompt_id,
        sample_index,
        model_name: cfg.model.clone(),
        temperature: cfg.temperature,
        raw_text: String::new(),
        timestamp: epoch_secs(),
        transport_status: TransportStatus::Failed,
    };
    for attempt in 0..=cfg.max_retries {
        match one_request(&client, &cfg, api_key.as_deref(), &prompt_text).await {
            Ok(text) => {
                record.raw_text = text;
                record.transport_status = TransportStatus::Ok;
                record.timestamp = epoch_secs();
                return record;
            }
            Err(err) => {
                log::warn!(
                    "request {}#{} attempt {attempt} failed: {err}",
                    record.prompt_id,
                    sample_index
                );
                if attempt < cfg.max_retries {
                    tokio::time::sleep(Duration::from_millis(500 << attempt)).await;
                }
            }
        }
    }
    record
}

/// Samples `cfg.samples_per_prompt` responses for every prompt.
///
/// Returns records sorted by (prompt id, sample index). Synchronous:
/// the async runtime lives entirely inside this call.
pub fn sample(
    prompts: &[PromptRow],
    cfg: &GatewayConfig,
) -> Result<Vec<ResponseRecord>, GatewayError> {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    let client = reqwest::Client::builder()
        .timeout(Duration::from_secs(cfg.timeout_secs))
        .build()?;
    let cfg = Arc::new(cfg.clone());
    let api_key: Option<Arc<str>> = match std::env::var(&cfg.api_key_env) {
        Ok(key) => Some(Arc::from(key.as_str())),
        Err(_) => {
            log::debug!("{} unset; sending requests without Authorization", cfg.api_key_env);
            None
        }
    };

    let mut records = runtime.block_on(async {
        let semaphore = Arc::new(Semaphore::new(cfg.concurrency.max(1)));
        let mut tasks = JoinSet::new();
        for prompt in prompts {
            for sample_index in 0..cfg.samples_per_prompt {
                let permit_source = Arc::clone(&semaphore);
                let client = client.clone();
                let cfg = Arc::clone(&cfg);
                let api_key = api_key.clone();
                let id = prompt.id.clone();
                let text = prompt.text.clone();
                tasks.spawn(async move {
                    let _permit = permit_source.acquire().await.expect("semaphore open");
                    sample_one(client, cfg, api_key, id, text, sample_index).await
                });
            }
        }
        let mut records = Vec::with_capacity(tasks.len());
        while let Some(joined) = tasks.join_next().await {
            records.push(joined.expect("sampling tasks do not panic"));
        }
        records
    });
    records.sort_by(|a, b| {
        (&a.prompt_id, a.sample_index).cmp(&(&b.prompt_id, b.sample_index))
    });
    Ok(records)
}
