use super::model::MedicationStatement;
use super::validate::{validate_statement, validate_structure, Violation};
use super::CorpusError;
use std::io::Write;
use std::path::Path;

fn read(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_with(
    content: &str,
    check: Option<fn(&MedicationStatement) -> Vec<Violation>>,
) -> Result<Vec<MedicationStatement>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let stmt: MedicationStatement = serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        if let Some(check) = check {
            let violations = check(&stmt);
            if !violations.is_empty() {
                return Err(CorpusError::Invalid {
                    line: line_no,
                    id: stmt.id,
                    violations,
                });
            }
        }
        out.push(stmt);
    }
    Ok(out)
}

/// Parse JSONL content, rejecting any statement that breaks an invariant.
pub fn parse_corpus(content: &str) -> Result<Vec<MedicationStatement>, CorpusError> {
    parse_with(content, Some(validate_statement))
}

/// Parse JSONL content without invariant checks.
pub fn parse_corpus_unchecked(content: &str) -> Result<Vec<MedicationStatement>, CorpusError> {
    parse_with(content, None)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<MedicationStatement>, CorpusError> {
    parse_corpus(&read(path.as_ref())?)
}

/// Load a prediction file: spans are checked, expansion text is not.
pub fn load_predictions(path: impl AsRef<Path>) -> Result<Vec<MedicationStatement>, CorpusError> {
    parse_with(&read(path.as_ref())?, Some(validate_structure))
}

/// Canonical JSONL rendering: one compact object per line, trailing newline.
pub fn to_jsonl(statements: &[MedicationStatement]) -> String {
    let mut out = String::new();
    for s in statements {
        out.push_str(&serde_json::to_string(s).expect("statement serializes"));
        out.push('\n');
    }
    out
}

/// Write the corpus atomically (temp file in the same directory, then rename).
pub fn save_corpus(path: impl AsRef<Path>, statements: &[MedicationStatement]) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(to_jsonl(statements).as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
