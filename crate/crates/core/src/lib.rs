//! Structuring, expansion and evaluation of free-text medication sig strings.
//!
//! The crate is organised as a pipeline:
//!
//! - [`corpus`]: statement/annotation data model, JSONL corpus files, splits and statistics
//! - [`sigparse`]: tokenizer, lexicon-driven NER and the 10-column table representation
//! - [`expand`]: expansion of parsed entities into eight normalized categories
//! - [`prompts`]: persona/template/few-shot prompt rendering
//! - [`llmrun`]: completion backends, cassettes and model-output parsing
//! - [`evalkit`]: strict/partial matching, P/R/F1, exact binomial intervals and reports
//! - [`cli`]: the `sigkit` command line

pub mod cli;
pub mod corpus;
pub mod data;
pub mod evalkit;
pub mod expand;
pub mod llmrun;
pub mod prompts;
pub mod sigparse;
pub mod text;

pub use corpus::{
    Alignment, EntityAnnotation, EntityType, ExpansionRecord, MedicationStatement, Split,
};
pub use evalkit::{Interval, MatchCounts, Metrics};
pub use sigparse::{SigLexicon, TableRow, Token};
pub use expand::BrandMap;

/// Version string recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
