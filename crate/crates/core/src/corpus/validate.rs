use super::model::{Alignment, EntityAnnotation, ExpansionRecord, MedicationStatement};
use crate::evalkit::EquivalenceLexicon;
use crate::text::{char_len, slice_chars};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

const BOUNDARY_SPECIALS: [char; 4] = ['(', ')', '[', ']'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub statement_id: String,
    pub field: String,
    pub rule: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} [{}]: {}", self.statement_id, self.field, self.rule, self.message)
    }
}

struct Collector<'a> {
    id: &'a str,
    out: Vec<Violation>,
}

impl Collector<'_> {
    fn push(&mut self, field: impl Into<String>, rule: &str, message: impl Into<String>) {
        self.out.push(Violation {
            statement_id: self.id.to_string(),
            field: field.into(),
            rule: rule.to_string(),
            message: message.into(),
        });
    }
}

/// Check every statement invariant, including the expansion record.
pub fn validate_statement(stmt: &MedicationStatement) -> Vec<Violation> {
    let mut c = Collector { id: &stmt.id, out: Vec::new() };
    check_ner(stmt, &mut c);
    if let Some(ex) = &stmt.ex {
        check_ex(ex, &mut c);
    }
    c.out
}

/// Span-level checks only; used for prediction files whose expansion fields are free text.
pub fn validate_structure(stmt: &MedicationStatement) -> Vec<Violation> {
    let mut c = Collector { id: &stmt.id, out: Vec::new() };
    check_ner(stmt, &mut c);
    c.out
}

fn check_ner(stmt: &MedicationStatement, c: &mut Collector<'_>) {
    if stmt.id.trim().is_empty() {
        c.push("id", "non_empty", "statement id is empty");
    }
    let len = char_len(&stmt.text);
    let mut seen_types = HashSet::new();
    let mut seen_spans = HashSet::new();
    for (i, a) in stmt.ner.iter().enumerate() {
        let field = format!("ner[{i}]({})", a.entity_type);
        check_annotation(&stmt.text, len, a, &field, c);
        if a.entity_type.is_singular() && !seen_types.insert(a.entity_type) {
            c.push(&field, "one_per_type", format!("more than one {} annotation", a.entity_type));
        }
        if !a.is_textless() && !seen_spans.insert((a.entity_type, a.start, a.end)) {
            c.push(&field, "duplicate_span", format!("duplicate span {}..{}", a.start, a.end));
        }
    }
}

fn check_annotation(text: &str, len: usize, a: &EntityAnnotation, field: &str, c: &mut Collector<'_>) {
    if a.alignment == Alignment::Unaligned {
        if a.start != len || a.end != len {
            c.push(field, "unaligned_position", "unaligned annotation must sit at len(text)");
        }
        if a.surface.trim().is_empty() {
            c.push(field, "non_empty", "unaligned annotation has no value");
        }
        return;
    }
    if a.start > a.end {
        c.push(field, "span_order", format!("end {} < start {}", a.end, a.start));
        return;
    }
    if a.end > len {
        c.push(field, "span_range", format!("end {} beyond text length {len}", a.end));
        return;
    }
    let slice = slice_chars(text, a.start, a.end).unwrap_or_default();
    if a.zero_width {
        if a.start != a.end {
            c.push(field, "zero_width_span", "zero-width annotation must have start == end");
        }
        if !a.surface.is_empty() {
            c.push(field, "zero_width_surface", "zero-width annotation must have empty surface");
        }
        if a.inferred_value.as_deref().is_none_or(|v| v.trim().is_empty()) {
            c.push(field, "zero_width_inferred", "zero-width annotation needs an inferred value");
        }
        return;
    }
    if a.start == a.end {
        c.push(field, "non_zero_width_span", "non-zero-width annotation must have start < end");
    }
    if a.surface.is_empty() {
        c.push(field, "non_empty", "surface is empty");
    }
    if a.inferred_value.is_some() {
        c.push(field, "inferred_only_zero_width", "inferred value on a non-zero-width annotation");
    }
    if a.surface != slice {
        c.push(field, "surface_mismatch", format!("surface {:?} != text slice {:?}", a.surface, slice));
    }
    if a.alignment == Alignment::Exact && has_special_boundary(&a.surface) {
        c.push(field, "boundary_special", format!("surface {:?} starts or ends with a separator", a.surface));
    }
}

fn is_mult_x(ch: char) -> bool {
    ch == 'x' || ch == 'X'
}

fn has_special_boundary(surface: &str) -> bool {
    let chars: Vec<char> = surface.chars().collect();
    let (Some(&first), Some(&last)) = (chars.first(), chars.last()) else {
        return false;
    };
    let special = |ch: char| BOUNDARY_SPECIALS.contains(&ch) || ch == '*' || ch.is_whitespace();
    if special(first) || special(last) {
        return true;
    }
    if chars.len() == 1 {
        return is_mult_x(first);
    }
    let x_first = is_mult_x(first) && chars[1].is_ascii_digit();
    let x_last = is_mult_x(last) && chars[chars.len() - 2].is_ascii_digit();
    x_first || x_last
}

fn check_ex(ex: &ExpansionRecord, c: &mut Collector<'_>) {
    for (i, ing) in ex.active_ingredients.iter().enumerate() {
        if ing.trim().is_empty() {
            c.push(format!("ex.active_ingredients[{i}]"), "non_empty", "empty ingredient");
        }
    }
    let fields = [
        ("ex.unit", &ex.unit),
        ("ex.mode", &ex.mode),
        ("ex.quantity_of_dose_form", &ex.quantity_of_dose_form),
        ("ex.dose_form", &ex.dose_form),
        ("ex.relation_to_meal", &ex.relation_to_meal),
        ("ex.frequency", &ex.frequency),
        ("ex.other", &ex.other),
    ];
    for (name, v) in fields {
        if v.as_deref().is_some_and(|s| s.trim().is_empty()) {
            c.push(name, "non_empty", "present field is blank");
        }
    }
    if let Some(rel) = ex.relation_to_meal.as_deref().filter(|s| !s.trim().is_empty()) {
        let eq = EquivalenceLexicon::shipped();
        let ok = ["before meals", "after meals", "before bed"]
            .iter()
            .any(|base| eq.equivalent(rel, base));
        if !ok {
            c.push("ex.relation_to_meal", "meal_relation", format!("{rel:?} is not a meal relation"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::model::EntityType;

    fn simvas() -> MedicationStatement {
        let mut s = MedicationStatement::new("t05", "Simvas(40) 1x1 po pc for 3 mos.");
        s.ner = vec![
            EntityAnnotation::span(EntityType::Medication, 0, 6, "Simvas"),
            EntityAnnotation::span(EntityType::Strength, 7, 9, "40"),
            EntityAnnotation::zero_width(EntityType::Unit, 9, "mg"),
            EntityAnnotation::span(EntityType::Mode, 15, 17, "po"),
            EntityAnnotation::span(EntityType::Instructions, 11, 31, "1x1 po pc for 3 mos."),
        ];
        s
    }

    #[test]
    fn gold_simvas_is_valid() {
        assert_eq!(validate_statement(&simvas()), vec![]);
    }

    #[test]
    fn surface_mismatch_is_one_violation() {
        let mut s = simvas();
        s.ner[0].surface = "Simvaz".into();
        let v = validate_statement(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "surface_mismatch");
        assert_eq!(v[0].statement_id, "t05");
    }

    #[test]
    fn zero_width_without_value_is_one_violation() {
        let mut s = simvas();
        s.ner[2].inferred_value = Some(String::new());
        let v = validate_statement(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "zero_width_inferred");
    }

    #[test]
    fn end_before_start_names_annotation() {
        let mut s = simvas();
        s.ner[1].end = 5;
        let v = validate_statement(&s);
        assert_eq!(v.len(), 1);
        assert!(v[0].field.contains("Strength"));
        assert_eq!(v[0].rule, "span_order");
    }

    #[test]
    fn boundary_specials() {
        assert!(has_special_boundary("Simvas(40)"));
        assert!(has_special_boundary("1x"));
        assert!(has_special_boundary("x"));
        assert!(!has_special_boundary("Keflex"));
        assert!(!has_special_boundary("Xarator"));
        assert!(!has_special_boundary("1/2x1"));
    }

    #[test]
    fn boundary_inclusive_prediction_is_structurally_valid() {
        let mut s = simvas();
        s.ner[0] = EntityAnnotation::span(EntityType::Medication, 0, 10, "Simvas(40)");
        assert_eq!(validate_structure(&s)[0].rule, "boundary_special");
        s.ner[0].alignment = Alignment::BoundaryInclusive;
        assert!(validate_structure(&s).is_empty());
    }

    #[test]
    fn duplicate_singular_type() {
        let mut s = simvas();
        s.ner.push(EntityAnnotation::span(EntityType::Mode, 18, 20, "pc"));
        assert_eq!(validate_statement(&s)[0].rule, "one_per_type");
    }

    #[test]
    fn relation_must_be_meal_class() {
        let mut s = simvas();
        s.ex = Some(ExpansionRecord {
            relation_to_meal: Some("after a meal".into()),
            ..Default::default()
        });
        assert!(validate_statement(&s).is_empty());
        s.ex.as_mut().unwrap().relation_to_meal = Some("with water".into());
        assert_eq!(validate_statement(&s)[0].rule, "meal_relation");
    }
}
