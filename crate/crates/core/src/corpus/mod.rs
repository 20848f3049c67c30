//! Statement and annotation data model, JSONL corpus files, splitting and statistics.

mod io;
mod model;
mod split;
mod stats;
mod validate;

pub use io::{load_corpus, load_predictions, parse_corpus, parse_corpus_unchecked, save_corpus, to_jsonl};
pub use model::{Alignment, EntityAnnotation, EntityType, ExpansionRecord, MedicationStatement, Split};
pub use split::{split_corpus, SplitRatios};
pub use stats::{corpus_stats, CorpusStats, EntityCounts};
pub use validate::{validate_statement, validate_structure, Violation};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: statement {id} is invalid: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid {
        line: usize,
        id: String,
        violations: Vec<Violation>,
    },
    #[error("ratios must be positive and sum to 1 (got {0:?})")]
    BadRatios([f64; 3]),
    #[error("cannot split an empty corpus")]
    EmptyCorpus,
}
