//! Strict/partial entity matching, expansion scoring, P/R/F1, exact binomial intervals
//! and report rendering.

mod ci;
mod equivalence;
mod expansion;
mod matching;
mod metrics;
mod report;

pub use ci::{clopper_pearson, Interval};
pub use equivalence::{normalize, EquivalenceError, EquivalenceLexicon};
pub use expansion::{empty_category_counts, score_expansion, CategoryCounts, ExCategory};
pub use matching::{add_type_counts, empty_type_counts, match_entities, MatchMode, TypeCounts};
pub use metrics::{aggregate, harmonic, prf, MatchCounts, Metrics};
pub use report::{render_report, CiAnnotation, MetricColumn, MetricRow, MetricTable, Report};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid interval request: {successes} successes of {n} at confidence {confidence}")]
    Domain { successes: u64, n: u64, confidence: f64 },
}
