use super::{CompletionBackend, CompletionRequest, LlmError};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub request_hash: String,
    pub prompt_text: String,
    pub response_text: String,
    pub timestamp: String,
}

/// Append-only JSONL log of request/response pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cassette {
    pub entries: Vec<CassetteEntry>,
}

impl Cassette {
    pub fn parse(content: &str, path: &str) -> Result<Self, LlmError> {
        let mut entries = Vec::new();
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e = serde_json::from_str(line).map_err(|e| LlmError::Malformed {
                path: path.to_string(),
                line: i + 1,
                message: e.to_string(),
            })?;
            entries.push(e);
        }
        Ok(Cassette { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LlmError> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path).map_err(|source| LlmError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&content, &path.display().to_string())
    }

    /// Most recent entry for a hash.
    pub fn lookup(&self, hash: &str) -> Option<&CassetteEntry> {
        self.entries.iter().rev().find(|e| e.request_hash == hash)
    }

    /// Append one entry to the file at `path`, creating it if needed.
    pub fn append_to(path: impl AsRef<Path>, entry: &CassetteEntry) -> Result<(), LlmError> {
        let path = path.as_ref();
        let io_err = |source| LlmError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
        let mut line = serde_json::to_string(entry).expect("entry serializes");
        line.push('\n');
        f.write_all(line.as_bytes()).map_err(io_err)?;
        f.flush().map_err(io_err)
    }
}

/// Replay-only backend: a miss is an error, never a network call.
pub struct CassetteBackend {
    cassette: Cassette,
}

impl CassetteBackend {
    pub fn new(cassette: Cassette) -> Self {
        CassetteBackend { cassette }
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self, LlmError> {
        Ok(Self::new(Cassette::load(path)?))
    }
}

impl CompletionBackend for CassetteBackend {
    fn name(&self) -> &'static str {
        "cassette"
    }

    fn complete(&mut self, request: &CompletionRequest) -> Result<String, LlmError> {
        let hash = request.request_hash();
        self.cassette
            .lookup(&hash)
            .map(|e| e.response_text.clone())
            .ok_or(LlmError::CassetteMiss { hash })
    }
}

/// Wraps a live backend and appends every successful exchange to a cassette file.
pub struct RecordingBackend<B> {
    inner: B,
    path: PathBuf,
}

impl<B: CompletionBackend> RecordingBackend<B> {
    pub fn new(inner: B, path: impl Into<PathBuf>) -> Self {
        RecordingBackend {
            inner,
            path: path.into(),
        }
    }
}

impl<B: CompletionBackend> CompletionBackend for RecordingBackend<B> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn complete(&mut self, request: &CompletionRequest) -> Result<String, LlmError> {
        let response = self.inner.complete(request)?;
        let entry = CassetteEntry {
            request_hash: request.request_hash(),
            prompt_text: request.prompt.text.clone(),
            response_text: response.clone(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        };
        Cassette::append_to(&self.path, &entry)?;
        Ok(response)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompts::{PromptSpec, PromptText, Task};
    use std::collections::BTreeMap;

    fn request(text: &str) -> CompletionRequest {
        let spec = PromptSpec {
            task: Task::Ner,
            persona: false,
            template: true,
            shots: 0,
            example_ids: vec![],
            payload_ids: vec![],
        };
        CompletionRequest::new(
            PromptText {
                text: text.into(),
                rendered_from: spec,
            },
            BTreeMap::new(),
        )
    }

    struct Echo;

    impl CompletionBackend for Echo {
        fn name(&self) -> &'static str {
            "echo"
        }

        fn complete(&mut self, r: &CompletionRequest) -> Result<String, LlmError> {
            Ok(format!("echo: {}", r.prompt.text))
        }
    }

    #[test]
    fn replay_hit_and_miss() {
        let req = request("p1");
        let cassette = Cassette {
            entries: vec![CassetteEntry {
                request_hash: req.request_hash(),
                prompt_text: "p1".into(),
                response_text: "resp".into(),
                timestamp: "2024-01-01T00:00:00Z".into(),
            }],
        };
        let mut b = CassetteBackend::new(cassette);
        assert_eq!(b.complete(&req).unwrap(), "resp");
        let miss = b.complete(&request("p2")).unwrap_err();
        assert!(matches!(miss, LlmError::CassetteMiss { .. }));
        assert!(!miss.is_retriable());
    }

    #[test]
    fn record_then_replay() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let mut rec = RecordingBackend::new(Echo, &path);
        rec.complete(&request("a")).unwrap();
        rec.complete(&request("b")).unwrap();
        let cassette = Cassette::load(&path).unwrap();
        assert_eq!(cassette.entries.len(), 2);
        let mut replay = CassetteBackend::new(cassette);
        assert_eq!(replay.complete(&request("b")).unwrap(), "echo: b");
    }

    #[test]
    fn malformed_line_reported() {
        let err = Cassette::parse("{}\n", "c.jsonl").unwrap_err();
        assert!(matches!(err, LlmError::Malformed { line: 1, .. }));
    }
}
