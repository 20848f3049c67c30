use super::{CompletionBackend, CompletionRequest, LlmError};
use std::collections::BTreeMap;
use std::path::Path;

/// Canned responses keyed by request hash.
#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    fixtures: BTreeMap<String, String>,
}

impl MockBackend {
    pub fn new(fixtures: BTreeMap<String, String>) -> Self {
        MockBackend { fixtures }
    }

    /// A JSON object mapping request hash to response text.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, LlmError> {
        let path = path.as_ref();
        let shown = path.display().to_string();
        let content = std::fs::read_to_string(path).map_err(|source| LlmError::Io {
            path: shown.clone(),
            source,
        })?;
        let fixtures = serde_json::from_str(&content).map_err(|e| LlmError::Malformed {
            path: shown,
            line: e.line(),
            message: e.to_string(),
        })?;
        Ok(Self::new(fixtures))
    }
}

impl CompletionBackend for MockBackend {
    fn name(&self) -> &'static str {
        "mock"
    }

    fn complete(&mut self, request: &CompletionRequest) -> Result<String, LlmError> {
        let hash = request.request_hash();
        self.fixtures.get(&hash).cloned().ok_or(LlmError::MockMiss { hash })
    }
}
