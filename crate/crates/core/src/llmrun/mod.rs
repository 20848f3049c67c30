//! Completion backends with record/replay cassettes, and parsers that turn model
//! table output back into rows and expansion records.

mod cassette;
mod http;
mod mock;
mod oracle;
mod response;

pub use cassette::{Cassette, CassetteBackend, CassetteEntry, RecordingBackend};
pub use http::{HttpBackend, HttpConfig, API_KEY_ENV};
pub use mock::MockBackend;
pub use oracle::OracleBackend;
pub use response::{
    parse_ex_response, parse_ner_response, segment_instructions, ExParsedRow, ExVocabulary, ParsedRows, Segmented,
};

use crate::prompts::PromptText;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("cassette has no entry for request {hash}")]
    CassetteMiss { hash: String },
    #[error("mock fixtures have no entry for request {hash}")]
    MockMiss { hash: String },
    #[error("transport failure after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("endpoint returned HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("unexpected response body: {0}")]
    BadBody(String),
    #[error("environment variable {0} is not set")]
    MissingApiKey(&'static str),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: {message}")]
    Malformed { path: String, line: usize, message: String },
}

impl LlmError {
    /// Whether repeating the request could succeed.
    pub fn is_retriable(&self) -> bool {
        matches!(self, LlmError::Transport { .. })
    }
}

/// One stateless completion call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub prompt: PromptText,
    #[serde(default)]
    pub backend_params: BTreeMap<String, String>,
}

impl CompletionRequest {
    pub fn new(prompt: PromptText, backend_params: BTreeMap<String, String>) -> Self {
        CompletionRequest { prompt, backend_params }
    }

    /// Every request runs in a fresh session; there is no way to continue a conversation.
    pub fn fresh_session(&self) -> bool {
        true
    }

    /// SHA-256 over the prompt text and the sorted parameters.
    pub fn request_hash(&self) -> String {
        request_hash(&self.prompt.text, &self.backend_params)
    }
}

pub fn request_hash(prompt_text: &str, params: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    h.update(prompt_text.as_bytes());
    for (k, v) in params {
        h.update([0u8]);
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
    }
    hex::encode(h.finalize())
}

pub trait CompletionBackend {
    fn name(&self) -> &'static str;
    fn complete(&mut self, request: &CompletionRequest) -> Result<String, LlmError>;
}

/// Run one request through a backend.
pub fn complete(backend: &mut dyn CompletionBackend, request: &CompletionRequest) -> Result<String, LlmError> {
    backend.complete(request)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompts::{PromptSpec, Task};

    fn prompt(text: &str) -> PromptText {
        PromptText {
            text: text.to_string(),
            rendered_from: PromptSpec {
                task: Task::Ner,
                persona: false,
                template: true,
                shots: 0,
                example_ids: vec![],
                payload_ids: vec![],
            },
        }
    }

    #[test]
    fn hash_depends_on_prompt_and_params_only() {
        let mut params = BTreeMap::new();
        params.insert("model".to_string(), "m".to_string());
        let a = CompletionRequest::new(prompt("hello"), params.clone());
        let mut other_spec = prompt("hello");
        other_spec.rendered_from.payload_ids = vec!["x".into()];
        let b = CompletionRequest::new(other_spec, params.clone());
        assert_eq!(a.request_hash(), b.request_hash());
        params.insert("temperature".to_string(), "0".to_string());
        let c = CompletionRequest::new(prompt("hello"), params);
        assert_ne!(a.request_hash(), c.request_hash());
        assert!(a.fresh_session());
        assert_eq!(a.request_hash().len(), 64);
    }
}
