use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("code {code:?} appears in both {first} and {second}")]
    Overlap {
        code: String,
        first: &'static str,
        second: &'static str,
    },
}

/// Code tables driving tokenization roles, NER and expansion.
///
/// Keys are stored lowercase; lookups lowercase their input.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigLexicon {
    #[serde(default)]
    pub route_codes: BTreeMap<String, String>,
    #[serde(default)]
    pub meal_codes: BTreeMap<String, String>,
    #[serde(default)]
    pub frequency_codes: BTreeMap<String, String>,
    /// Dose-form word to canonical form.
    #[serde(default)]
    pub dose_form_words: BTreeMap<String, String>,
    #[serde(default)]
    pub prn_markers: BTreeSet<String>,
    #[serde(default)]
    pub thai_tokens: BTreeMap<String, String>,
    #[serde(default)]
    pub duration_units: BTreeMap<String, String>,
    /// Codes allowed in both `route_codes` and `meal_codes`.
    #[serde(default)]
    pub dual_role_codes: BTreeSet<String>,
}

fn lower_keys(m: BTreeMap<String, String>) -> BTreeMap<String, String> {
    m.into_iter().map(|(k, v)| (k.trim().to_lowercase(), v)).collect()
}

fn lower_set(s: BTreeSet<String>) -> BTreeSet<String> {
    s.into_iter().map(|k| k.trim().to_lowercase()).collect()
}

impl SigLexicon {
    pub fn from_json(json: &str) -> Result<Self, LexiconError> {
        let raw: SigLexicon = serde_json::from_str(json)?;
        let lex = SigLexicon {
            route_codes: lower_keys(raw.route_codes),
            meal_codes: lower_keys(raw.meal_codes),
            frequency_codes: lower_keys(raw.frequency_codes),
            dose_form_words: lower_keys(raw.dose_form_words),
            prn_markers: lower_set(raw.prn_markers),
            thai_tokens: lower_keys(raw.thai_tokens),
            duration_units: lower_keys(raw.duration_units),
            dual_role_codes: lower_set(raw.dual_role_codes),
        };
        lex.validate()?;
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&json)
    }

    /// The lexicon shipped with the crate.
    pub fn shipped() -> Self {
        Self::from_json(crate::data::LEXICON_JSON).expect("shipped lexicon is valid")
    }

    /// Code sets must be pairwise disjoint, except dual-role codes across route and meal.
    pub fn validate(&self) -> Result<(), LexiconError> {
        let sets: [(&'static str, BTreeSet<&String>); 5] = [
            ("route_codes", self.route_codes.keys().collect()),
            ("meal_codes", self.meal_codes.keys().collect()),
            ("frequency_codes", self.frequency_codes.keys().collect()),
            ("dose_form_words", self.dose_form_words.keys().collect()),
            ("prn_markers", self.prn_markers.iter().collect()),
        ];
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                for code in sets[i].1.intersection(&sets[j].1) {
                    let dual = i == 0 && j == 1 && self.dual_role_codes.contains(*code);
                    if !dual {
                        return Err(LexiconError::Overlap {
                            code: (*code).clone(),
                            first: sets[i].0,
                            second: sets[j].0,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn route(&self, s: &str) -> Option<&str> {
        self.route_codes.get(&s.to_lowercase()).map(String::as_str)
    }

    pub fn meal(&self, s: &str) -> Option<&str> {
        self.meal_codes.get(&s.to_lowercase()).map(String::as_str)
    }

    pub fn frequency(&self, s: &str) -> Option<&str> {
        self.frequency_codes.get(&s.to_lowercase()).map(String::as_str)
    }

    pub fn dose_form(&self, s: &str) -> Option<&str> {
        self.dose_form_words.get(&s.to_lowercase()).map(String::as_str)
    }

    pub fn is_prn(&self, s: &str) -> bool {
        self.prn_markers.contains(&s.to_lowercase())
    }

    pub fn thai(&self, s: &str) -> Option<&str> {
        self.thai_tokens.get(&s.to_lowercase()).map(String::as_str)
    }

    pub fn duration_unit(&self, s: &str) -> Option<&str> {
        self.duration_units.get(&s.to_lowercase()).map(String::as_str)
    }

    /// Any code that belongs to the dosing vocabulary (route, meal, frequency, form, prn).
    pub fn is_code(&self, s: &str) -> bool {
        self.route(s).is_some()
            || self.meal(s).is_some()
            || self.frequency(s).is_some()
            || self.dose_form(s).is_some()
            || self.is_prn(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_lexicon_loads() {
        let lex = SigLexicon::shipped();
        assert_eq!(lex.route("PO"), Some("oral"));
        assert_eq!(lex.route("opc"), Some("oral"));
        assert_eq!(lex.meal("opc"), Some("after meals"));
        assert_eq!(lex.frequency("qPM"), Some("once in the evening"));
        assert_eq!(lex.dose_form("«TH:sachet»"), Some("sachet"));
        assert_eq!(lex.thai("«TH:mon-fri»"), Some("Monday to Friday"));
    }

    #[test]
    fn overlap_outside_dual_role_is_rejected() {
        let json = r#"{"route_codes":{"po":"oral"},"frequency_codes":{"po":"once daily"}}"#;
        assert!(matches!(SigLexicon::from_json(json), Err(LexiconError::Overlap { .. })));
        let json = r#"{"route_codes":{"opc":"oral"},"meal_codes":{"opc":"after meals"}}"#;
        assert!(SigLexicon::from_json(json).is_err());
        let json = r#"{"route_codes":{"opc":"oral"},"meal_codes":{"opc":"after meals"},"dual_role_codes":["opc"]}"#;
        assert!(SigLexicon::from_json(json).is_ok());
    }
}
