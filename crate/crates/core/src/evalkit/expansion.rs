use super::equivalence::EquivalenceLexicon;
use super::metrics::MatchCounts;
use crate::corpus::ExpansionRecord;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExCategory {
    ActiveIngredients,
    Unit,
    Mode,
    QuantityOfDoseForm,
    DoseForm,
    RelationToMeal,
    Frequency,
    Other,
}

impl ExCategory {
    pub const ALL: [ExCategory; 8] = [
        ExCategory::ActiveIngredients,
        ExCategory::Unit,
        ExCategory::Mode,
        ExCategory::QuantityOfDoseForm,
        ExCategory::DoseForm,
        ExCategory::RelationToMeal,
        ExCategory::Frequency,
        ExCategory::Other,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ExCategory::ActiveIngredients => "Active Ingredient",
            ExCategory::Unit => "Unit",
            ExCategory::Mode => "Mode",
            ExCategory::QuantityOfDoseForm => "Quantity of Dose Form",
            ExCategory::DoseForm => "Dose Form",
            ExCategory::RelationToMeal => "Relation to Meal",
            ExCategory::Frequency => "Frequency",
            ExCategory::Other => "Others",
        }
    }

    fn field(self, r: &ExpansionRecord) -> Option<&str> {
        let v = match self {
            ExCategory::ActiveIngredients => return None,
            ExCategory::Unit => &r.unit,
            ExCategory::Mode => &r.mode,
            ExCategory::QuantityOfDoseForm => &r.quantity_of_dose_form,
            ExCategory::DoseForm => &r.dose_form,
            ExCategory::RelationToMeal => &r.relation_to_meal,
            ExCategory::Frequency => &r.frequency,
            ExCategory::Other => &r.other,
        };
        v.as_deref().filter(|s| !s.trim().is_empty())
    }
}

pub type CategoryCounts = BTreeMap<ExCategory, MatchCounts>;

pub fn empty_category_counts() -> CategoryCounts {
    ExCategory::ALL.iter().map(|c| (*c, MatchCounts::default())).collect()
}

fn count(gold_present: bool, pred_present: bool, equivalent: bool) -> MatchCounts {
    match (gold_present, pred_present) {
        (true, true) if equivalent => MatchCounts::new(1, 0, 0),
        (true, true) => MatchCounts::new(0, 1, 1),
        (false, true) => MatchCounts::new(0, 1, 0),
        (true, false) => MatchCounts::new(0, 0, 1),
        (false, false) => MatchCounts::default(),
    }
}

/// Per-category tp/fp/fn for one record; a non-equivalent pair counts one fp and one fn.
pub fn score_expansion(gold: &ExpansionRecord, pred: &ExpansionRecord, eq: &EquivalenceLexicon) -> CategoryCounts {
    let mut out = empty_category_counts();
    for cat in ExCategory::ALL {
        let c = if cat == ExCategory::ActiveIngredients {
            let (g, p) = (&gold.active_ingredients, &pred.active_ingredients);
            count(!g.is_empty(), !p.is_empty(), eq.equivalent_sets(g, p))
        } else {
            let (g, p) = (cat.field(gold), cat.field(pred));
            let same = matches!((g, p), (Some(a), Some(b)) if eq.equivalent(a, b));
            count(g.is_some(), p.is_some(), same)
        };
        out.insert(cat, c);
    }
    out
}
