use crate::corpus::{EntityType, MedicationStatement};
use crate::evalkit::{
    add_type_counts, clopper_pearson, empty_category_counts, empty_type_counts, match_entities, score_expansion,
    CategoryCounts, CiAnnotation, EquivalenceLexicon, ExCategory, MatchCounts, MatchMode, MetricColumn, MetricTable,
    TypeCounts,
};
use anyhow::Result;
use std::collections::HashMap;

pub const CONFIDENCE: f64 = 0.95;

/// Gold statements paired with the prediction of the same id, if any.
pub fn pair_by_id<'a>(
    gold: &'a [MedicationStatement],
    pred: &'a [MedicationStatement],
) -> Vec<(&'a MedicationStatement, Option<&'a MedicationStatement>)> {
    let index: HashMap<&str, &MedicationStatement> = pred.iter().map(|p| (p.id.as_str(), p)).collect();
    gold.iter().map(|g| (g, index.get(g.id.as_str()).copied())).collect()
}

pub struct NerScores {
    pub strict: TypeCounts,
    pub partial: TypeCounts,
    /// Statements whose every annotation matched strictly.
    pub exact_statements: u64,
    pub statements: u64,
}

pub fn score_ner(gold: &[MedicationStatement], pred: &[MedicationStatement]) -> NerScores {
    let mut strict = empty_type_counts();
    let mut partial = empty_type_counts();
    let mut exact = 0;
    let pairs = pair_by_id(gold, pred);
    for (g, p) in &pairs {
        let p_ner = p.map(|p| p.ner.as_slice()).unwrap_or(&[]);
        let s = match_entities(&g.ner, p_ner, MatchMode::Strict);
        if s.values().all(|c| c.fp == 0 && c.fn_ == 0) {
            exact += 1;
        }
        add_type_counts(&mut strict, &s);
        add_type_counts(&mut partial, &match_entities(&g.ner, p_ner, MatchMode::Partial));
    }
    NerScores {
        strict,
        partial,
        exact_statements: exact,
        statements: pairs.len() as u64,
    }
}

fn supported(c: &MatchCounts) -> bool {
    c.tp + c.fp + c.fn_ > 0
}

/// Entity types with no gold or predicted instances are left out of the table.
pub fn ner_column(name: &str, counts: &TypeCounts) -> MetricColumn {
    MetricColumn::from_counts(
        name,
        EntityType::ALL
            .iter()
            .filter_map(|t| counts.get(t).filter(|c| supported(c)).map(|c| (t.as_str(), *c))),
    )
}

pub fn ner_tables(scores: &NerScores, modes: &[MatchMode]) -> Vec<MetricTable> {
    let columns = modes
        .iter()
        .map(|m| match m {
            MatchMode::Strict => ner_column("Strict", &scores.strict),
            MatchMode::Partial => ner_column("Partial", &scores.partial),
        })
        .collect();
    vec![MetricTable {
        title: "Named entity recognition".to_string(),
        row_header: "Entity type".to_string(),
        columns,
    }]
}

pub fn ner_cis(scores: &NerScores) -> Result<Vec<CiAnnotation>> {
    if scores.statements == 0 {
        return Ok(Vec::new());
    }
    Ok(vec![CiAnnotation {
        label: "statements fully correct (strict)".to_string(),
        successes: scores.exact_statements,
        n: scores.statements,
        interval: clopper_pearson(scores.exact_statements, scores.statements, CONFIDENCE)?,
    }])
}

pub struct ExScores {
    pub counts: CategoryCounts,
    pub scored: u64,
    pub skipped: u64,
}

/// Statements without a gold expansion record are skipped.
pub fn score_ex(gold: &[MedicationStatement], pred: &[MedicationStatement], eq: &EquivalenceLexicon) -> ExScores {
    let mut counts = empty_category_counts();
    let (mut scored, mut skipped) = (0, 0);
    let empty = Default::default();
    for (g, p) in pair_by_id(gold, pred) {
        let Some(gold_ex) = &g.ex else {
            skipped += 1;
            continue;
        };
        let pred_ex = p.and_then(|p| p.ex.as_ref()).unwrap_or(&empty);
        for (cat, c) in score_expansion(gold_ex, pred_ex, eq) {
            *counts.entry(cat).or_default() += c;
        }
        scored += 1;
    }
    ExScores { counts, scored, skipped }
}

pub fn ex_tables(scores: &ExScores) -> Vec<MetricTable> {
    let column = MetricColumn::from_counts(
        "Equivalence",
        ExCategory::ALL
            .iter()
            .filter_map(|cat| scores.counts.get(cat).filter(|c| supported(c)).map(|c| (cat.label(), *c))),
    );
    vec![MetricTable {
        title: if scores.skipped == 0 {
            format!("Text expansion ({} statements)", scores.scored)
        } else {
            format!("Text expansion ({} statements, {} without gold skipped)", scores.scored, scores.skipped)
        },
        row_header: "Category".to_string(),
        columns: vec![column],
    }]
}
