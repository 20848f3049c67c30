use super::{CompletionBackend, CompletionRequest, LlmError};
use serde_json::{json, Value};
use std::time::Duration;

pub const API_KEY_ENV: &str = "SIGKIT_API_KEY";

#[derive(Debug, Clone, PartialEq)]
pub struct HttpConfig {
    /// Full URL of an OpenAI-compatible chat completions endpoint.
    pub endpoint: String,
    pub model: String,
    pub temperature: Option<f64>,
    pub max_attempts: u32,
    pub backoff: Duration,
    pub timeout: Duration,
}

impl Default for HttpConfig {
    fn default() -> Self {
        HttpConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".to_string(),
            model: "gpt-3.5-turbo".to_string(),
            temperature: None,
            max_attempts: 3,
            backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(120),
        }
    }
}

/// Chat-completions client; one request per call, no conversation state.
pub struct HttpBackend {
    config: HttpConfig,
    api_key: String,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(config: HttpConfig, api_key: impl Into<String>) -> Result<Self, LlmError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| LlmError::Transport {
                attempts: 0,
                message: e.to_string(),
            })?;
        Ok(HttpBackend {
            config,
            api_key: api_key.into(),
            client,
        })
    }

    /// Reads the key from `SIGKIT_API_KEY`.
    pub fn from_env(config: HttpConfig) -> Result<Self, LlmError> {
        let key = std::env::var(API_KEY_ENV).map_err(|_| LlmError::MissingApiKey(API_KEY_ENV))?;
        Self::new(config, key)
    }

    fn body(&self, request: &CompletionRequest) -> Value {
        let params = &request.backend_params;
        let model = params.get("model").cloned().unwrap_or_else(|| self.config.model.clone());
        let mut body = json!({
            "model": model,
            "messages": [{"role": "user", "content": request.prompt.text}],
        });
        let temperature = params
            .get("temperature")
            .and_then(|t| t.parse::<f64>().ok())
            .or(self.config.temperature);
        if let Some(t) = temperature {
            body["temperature"] = json!(t);
        }
        body
    }
}

fn extract_content(body: &str) -> Result<String, LlmError> {
    let v: Value = serde_json::from_str(body).map_err(|e| LlmError::BadBody(e.to_string()))?;
    v.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| LlmError::BadBody("missing choices[0].message.content".to_string()))
}

impl CompletionBackend for HttpBackend {
    fn name(&self) -> &'static str {
        "http"
    }

    fn complete(&mut self, request: &CompletionRequest) -> Result<String, LlmError> {
        let body = self.body(request);
        let attempts = self.config.max_attempts.max(1);
        let mut last = String::new();
        for attempt in 1..=attempts {
            if attempt > 1 {
                std::thread::sleep(self.config.backoff);
            }
            let sent = self
                .client
                .post(&self.config.endpoint)
                .bearer_auth(&self.api_key)
                .json(&body)
                .send();
            let resp = match sent {
                Ok(r) => r,
                Err(e) => {
                    last = e.to_string();
                    continue;
                }
            };
            let status = resp.status();
            let text = resp.text().unwrap_or_default();
            if status.is_success() {
                return extract_content(&text);
            }
            if status.is_server_error() || status.as_u16() == 429 {
                last = format!("HTTP {status}: {text}");
                continue;
            }
            return Err(LlmError::Http {
                status: status.as_u16(),
                body: text,
            });
        }
        Err(LlmError::Transport { attempts, message: last })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_extraction() {
        let body = r#"{"choices":[{"message":{"role":"assistant","content":"hi"}}]}"#;
        assert_eq!(extract_content(body).unwrap(), "hi");
        assert!(matches!(extract_content("{}"), Err(LlmError::BadBody(_))));
    }
}
