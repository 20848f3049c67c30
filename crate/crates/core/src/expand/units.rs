use crate::sigparse::SigLexicon;

const UNITS: [(&str, &str); 17] = [
    ("mg", "milligram"),
    ("m.g.", "milligram"),
    ("milligram", "milligram"),
    ("milligrams", "milligram"),
    ("mcg", "microgram"),
    ("µg", "microgram"),
    ("μg", "microgram"),
    ("ug", "microgram"),
    ("microgram", "microgram"),
    ("micrograms", "microgram"),
    ("g", "gram"),
    ("gram", "gram"),
    ("grams", "gram"),
    ("ml", "milliliter"),
    ("milliliter", "milliliter"),
    ("iu", "international unit"),
    ("international unit", "international unit"),
];

/// Expand a unit abbreviation; unknown units are absent.
pub fn expand_unit(unit: &str) -> Option<String> {
    let key = crate::text::squash(unit);
    UNITS.iter().find(|(k, _)| *k == key).map(|(_, v)| v.to_string())
}

/// Expand a route code. For multi-word input the first route code wins ("po ac" -> oral).
pub fn expand_mode(mode: &str, lex: &SigLexicon) -> Option<String> {
    let squashed = crate::text::squash(mode);
    if let Some(v) = lex.route_codes.values().find(|v| v.to_lowercase() == squashed) {
        return Some(v.clone());
    }
    mode.split_whitespace().find_map(|w| lex.route(w)).map(str::to_string)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        assert_eq!(expand_unit("mg").as_deref(), Some("milligram"));
        assert_eq!(expand_unit("m.g.").as_deref(), Some("milligram"));
        assert_eq!(expand_unit("mcg").as_deref(), Some("microgram"));
        assert_eq!(expand_unit("µg").as_deref(), Some("microgram"));
        assert_eq!(expand_unit("widget"), None);
        assert_eq!(expand_unit("milligram").as_deref(), Some("milligram"));
    }

    #[test]
    fn modes() {
        let lex = SigLexicon::shipped();
        for code in ["po", "o", "opc", "oac", "po ac", "po pc", "PO"] {
            assert_eq!(expand_mode(code, &lex).as_deref(), Some("oral"), "{code}");
        }
        assert_eq!(expand_mode("sc", &lex).as_deref(), Some("subcutaneous"));
        assert_eq!(expand_mode("zz", &lex), None);
        assert_eq!(expand_mode("oral", &lex).as_deref(), Some("oral"));
    }
}
