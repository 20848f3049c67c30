use crate::sigparse::{scan_instructions, ItemKind, SigLexicon};
use serde::{Deserialize, Serialize};

const DEFAULT_DOSE_FORM: &str = "tablet";

/// The five instruction categories.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionFields {
    pub quantity_of_dose_form: Option<String>,
    pub dose_form: Option<String>,
    pub relation_to_meal: Option<String>,
    pub frequency: Option<String>,
    pub other: Option<String>,
}

fn daily(multiplier: &str) -> String {
    match multiplier.trim() {
        "1" => "once daily".to_string(),
        "2" => "twice daily".to_string(),
        "3" => "three times daily".to_string(),
        "4" => "four times daily".to_string(),
        n => format!("{n} times daily"),
    }
}

fn every(range: &str) -> String {
    if range == "1" {
        "every 1 hour".to_string()
    } else {
        format!("every {range} hours")
    }
}

/// Expand an Instructions surface into the five categories.
pub fn expand_instructions(surface: &str, lex: &SigLexicon) -> InstructionFields {
    expand_instructions_with_form(surface, lex, None)
}

/// As [`expand_instructions`], with `form_hint` replacing the "tablet" default.
pub(crate) fn expand_instructions_with_form(surface: &str, lex: &SigLexicon, form_hint: Option<&str>) -> InstructionFields {
    let mut f = InstructionFields::default();
    let mut pattern_fired = false;
    let mut other: Vec<String> = Vec::new();
    for item in scan_instructions(surface, lex) {
        match item.kind {
            ItemKind::Quantity { quantity, multiplier } => {
                if f.quantity_of_dose_form.is_some() {
                    other.push(item.slice);
                    continue;
                }
                f.quantity_of_dose_form = Some(quantity);
                pattern_fired = true;
                if let Some(m) = multiplier {
                    f.frequency.get_or_insert_with(|| daily(&m));
                }
            }
            ItemKind::DoseForm { form } => match f.dose_form {
                None => f.dose_form = Some(form),
                Some(_) => other.push(form),
            },
            ItemKind::Meal { relation } => match f.relation_to_meal {
                None => f.relation_to_meal = Some(relation),
                Some(_) => other.push(relation),
            },
            ItemKind::Frequency { frequency } => match f.frequency {
                None => f.frequency = Some(frequency),
                Some(_) => other.push(frequency),
            },
            ItemKind::Interval { range } => match f.frequency {
                None => f.frequency = Some(every(&range)),
                Some(_) => other.push(every(&range)),
            },
            ItemKind::Prn => other.push("as needed (prn)".to_string()),
            ItemKind::Duration { count, unit } => other.push(format!("for {count} {unit}")),
            ItemKind::Thai { meaning } => other.push(meaning),
            ItemKind::Route { .. } => {}
            ItemKind::Residue => other.push(item.slice),
        }
    }
    if f.dose_form.is_none() && pattern_fired {
        f.dose_form = Some(form_hint.unwrap_or(DEFAULT_DOSE_FORM).to_string());
    }
    let other = other.join(" ");
    f.other = (!other.trim().is_empty()).then_some(other);
    f
}
