//! Expansion of parsed entities into the eight normalized categories.
//!
//! Every output string is a lexicon or brand-map value, the original surface, or a fixed
//! template over those ("every 4-6 hours", "for 3 months").

mod brand;
mod instructions;
mod units;

pub use brand::{resolve_ingredient, BrandEntry, BrandMap, BrandMapError, Resolution, ResolutionStatus};
pub use instructions::{expand_instructions, InstructionFields};
pub use units::{expand_mode, expand_unit};

use crate::corpus::{EntityAnnotation, EntityType, ExpansionRecord};
use crate::sigparse::SigLexicon;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionProvenance {
    /// How the Medication surface was turned into ingredients, when present.
    pub ingredient: Option<ResolutionStatus>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub record: ExpansionRecord,
    pub provenance: ExpansionProvenance,
}

/// Form implied by the medication name ("Hidil Cap") or its brand entry.
fn form_hint(medication: &str, lex: &SigLexicon, brands: &BrandMap) -> Option<String> {
    medication
        .split_whitespace()
        .last()
        .filter(|_| medication.split_whitespace().count() > 1)
        .and_then(|w| lex.dose_form(w))
        .map(str::to_string)
        .or_else(|| brands.lookup(medication).and_then(|e| e.default_dose_form.clone()))
}

/// Expand one statement's annotations.
pub fn expand_statement(
    annotations: &[EntityAnnotation],
    _text: &str,
    lex: &SigLexicon,
    brands: &BrandMap,
) -> Expansion {
    let value = |ty: EntityType| {
        annotations
            .iter()
            .find(|a| a.entity_type == ty)
            .map(|a| a.value().trim())
            .filter(|v| !v.is_empty())
    };
    let mut out = Expansion::default();
    let medication = value(EntityType::Medication);
    if let Some(name) = medication {
        let r = resolve_ingredient(name, brands);
        out.record.active_ingredients = r.values;
        out.provenance.ingredient = Some(r.status);
    }
    out.record.unit = value(EntityType::Unit).and_then(expand_unit);
    out.record.mode = value(EntityType::Mode).and_then(|m| expand_mode(m, lex));
    if let Some(instr) = value(EntityType::Instructions) {
        let hint = medication.and_then(|m| form_hint(m, lex, brands));
        let f = instructions::expand_instructions_with_form(instr, lex, hint.as_deref());
        out.record.quantity_of_dose_form = f.quantity_of_dose_form;
        out.record.dose_form = f.dose_form;
        out.record.relation_to_meal = f.relation_to_meal;
        out.record.frequency = f.frequency;
        out.record.other = f.other;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::data::SEED_CORPUS_JSONL;
    use crate::sigparse::parse_statement;

    #[test]
    fn simvas_gold() {
        let corpus = parse_corpus(SEED_CORPUS_JSONL).unwrap();
        let s = corpus.iter().find(|s| s.id == "t05").unwrap();
        let e = expand_statement(&s.ner, &s.text, &SigLexicon::shipped(), &BrandMap::shipped());
        let want = ExpansionRecord {
            active_ingredients: vec!["simvastatin".into()],
            unit: Some("milligram".into()),
            mode: Some("oral".into()),
            quantity_of_dose_form: Some("1".into()),
            dose_form: Some("tablet".into()),
            relation_to_meal: Some("after meals".into()),
            frequency: Some("once daily".into()),
            other: Some("for 3 months".into()),
        };
        assert_eq!(e.record, want);
        assert_eq!(e.provenance.ingredient, Some(ResolutionStatus::Resolved));
    }

    #[test]
    fn no_annotations_no_fields() {
        let e = expand_statement(&[], "ORS", &SigLexicon::shipped(), &BrandMap::shipped());
        assert!(e.record.is_empty());
        assert_eq!(e.provenance.ingredient, None);
    }

    #[test]
    fn capsule_suffix_overrides_tablet_default() {
        let lex = SigLexicon::shipped();
        let brands = BrandMap::shipped();
        let anns = parse_statement("Hidil Cap(300) 1x1", &lex, &brands);
        let e = expand_statement(&anns, "Hidil Cap(300) 1x1", &lex, &brands);
        assert_eq!(e.record.dose_form.as_deref(), Some("capsule"));
        assert_eq!(e.record.active_ingredients, ["gemfibrozil"]);
    }

    #[test]
    fn passthrough_is_flagged() {
        let lex = SigLexicon::shipped();
        let anns = parse_statement("Douzabox 1x2 opc", &lex, &BrandMap::shipped());
        let e = expand_statement(&anns, "Douzabox 1x2 opc", &lex, &BrandMap::shipped());
        assert_eq!(e.record.active_ingredients, ["Douzabox"]);
        assert_eq!(e.provenance.ingredient, Some(ResolutionStatus::Passthrough));
    }
}
