use super::metrics::MatchCounts;
use crate::corpus::{Alignment, EntityAnnotation, EntityType};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    Strict,
    Partial,
}

impl std::str::FromStr for MatchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(MatchMode::Strict),
            "partial" => Ok(MatchMode::Partial),
            _ => Err(format!("unknown match mode {s:?}")),
        }
    }
}

/// Counts for each of the five entity types.
pub type TypeCounts = BTreeMap<EntityType, MatchCounts>;

pub fn empty_type_counts() -> TypeCounts {
    EntityType::ALL.iter().map(|t| (*t, MatchCounts::default())).collect()
}

pub fn add_type_counts(acc: &mut TypeCounts, other: &TypeCounts) {
    for (t, c) in other {
        *acc.entry(*t).or_default() += *c;
    }
}

fn same_value(a: &str, b: &str) -> bool {
    crate::text::squash(a) == crate::text::squash(b)
}

/// The value a textless annotation stands for: the inferred value of a zero-width
/// annotation or the stored surface of an unaligned one.
fn textless_value(a: &EntityAnnotation) -> Option<&str> {
    if a.zero_width {
        a.inferred_value.as_deref()
    } else if a.alignment == Alignment::Unaligned {
        Some(a.surface.as_str())
    } else {
        None
    }
}

/// Textless annotations only match each other, on equal values.
fn textless_match(gold: &EntityAnnotation, pred: &EntityAnnotation) -> Option<bool> {
    if !gold.is_textless() && !pred.is_textless() {
        return None;
    }
    Some(match (textless_value(gold), textless_value(pred)) {
        (Some(g), Some(p)) => gold.is_textless() && pred.is_textless() && same_value(g, p),
        _ => false,
    })
}

fn exact(gold: &EntityAnnotation, pred: &EntityAnnotation) -> bool {
    textless_match(gold, pred).unwrap_or(gold.start == pred.start && gold.end == pred.end)
}

fn overlaps(gold: &EntityAnnotation, pred: &EntityAnnotation) -> bool {
    textless_match(gold, pred).unwrap_or(gold.start.max(pred.start) < gold.end.min(pred.end))
}

/// Greedy one-to-one pass: each unmatched gold (in span order) takes the leftmost-longest
/// unused pred accepted by `accept`.
fn greedy(
    gold: &[&EntityAnnotation],
    pred: &[&EntityAnnotation],
    gold_used: &mut [bool],
    pred_used: &mut [bool],
    accept: fn(&EntityAnnotation, &EntityAnnotation) -> bool,
) {
    for (gi, g) in gold.iter().enumerate() {
        if gold_used[gi] {
            continue;
        }
        let best = pred
            .iter()
            .enumerate()
            .filter(|(pi, p)| !pred_used[*pi] && accept(g, p))
            .min_by_key(|(_, p)| (p.start, std::cmp::Reverse(p.end - p.start)))
            .map(|(pi, _)| pi);
        if let Some(pi) = best {
            gold_used[gi] = true;
            pred_used[pi] = true;
        }
    }
}

fn match_one_type(gold: &[&EntityAnnotation], pred: &[&EntityAnnotation], mode: MatchMode) -> MatchCounts {
    let mut gold_used = vec![false; gold.len()];
    let mut pred_used = vec![false; pred.len()];
    greedy(gold, pred, &mut gold_used, &mut pred_used, exact);
    if mode == MatchMode::Partial {
        greedy(gold, pred, &mut gold_used, &mut pred_used, overlaps);
    }
    let tp = gold_used.iter().filter(|u| **u).count();
    MatchCounts::new(tp, pred.len() - tp, gold.len() - tp)
}

/// Score predicted annotations against gold for one statement.
///
/// Strict needs identical spans; partial needs an overlap of at least one position.
/// Exact pairs are claimed first in both modes, so every strict match is also a partial one.
pub fn match_entities(gold: &[EntityAnnotation], pred: &[EntityAnnotation], mode: MatchMode) -> TypeCounts {
    let mut out = empty_type_counts();
    for ty in EntityType::ALL {
        let mut g: Vec<&EntityAnnotation> = gold.iter().filter(|a| a.entity_type == ty).collect();
        let p: Vec<&EntityAnnotation> = pred.iter().filter(|a| a.entity_type == ty).collect();
        g.sort_by_key(|a| (a.start, a.end));
        out.insert(ty, match_one_type(&g, &p, mode));
    }
    out
}
