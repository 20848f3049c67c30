//! Sub-token scanner for dosing instructions.
//!
//! Shared by the table representation (raw surfaces) and by expansion (canonical values).

use super::lexicon::SigLexicon;
use super::token::{is_numeric_fragment, is_numeric_range, tokenize, Token};

const INTERVAL_UNITS: [&str; 6] = ["hr", "hr.", "hrs", "hrs.", "h", "hours"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemKind {
    /// A dose quantity; `multiplier` is set for "QxN" style patterns.
    Quantity { quantity: String, multiplier: Option<String> },
    DoseForm { form: String },
    Route { route: String },
    Meal { relation: String },
    Frequency { frequency: String },
    /// "q A-B hr"
    Interval { range: String },
    Prn,
    /// "for N unit"
    Duration { count: String, unit: String },
    Thai { meaning: String },
    Residue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstrItem {
    pub kind: ItemKind,
    /// Scalar offsets into the scanned text.
    pub start: usize,
    pub end: usize,
    /// Raw text from `start` to `end`, separators included.
    pub slice: String,
}

/// Characters between two tokens.
pub(crate) fn gap(chars: &[char], left: &Token, right: &Token) -> String {
    chars[left.end..right.start].iter().collect()
}

fn is_mult_gap(g: &str) -> bool {
    g.chars().any(|c| matches!(c, 'x' | 'X' | '*'))
}

/// True when token `k` starts "QxN" (or "Q*N", "Q x N").
pub(crate) fn is_multiplication_at(chars: &[char], tokens: &[Token], k: usize) -> bool {
    k + 1 < tokens.len()
        && tokens[k].is_numeric()
        && tokens[k + 1].is_numeric()
        && is_mult_gap(&gap(chars, &tokens[k], &tokens[k + 1]))
}

/// True when token `k` is a number followed by a dose-form word.
pub(crate) fn is_quantity_with_form_at(tokens: &[Token], k: usize, lex: &SigLexicon) -> bool {
    k + 1 < tokens.len() && tokens[k].is_numeric() && lex.dose_form(&tokens[k + 1].surface).is_some()
}

fn is_interval_at(tokens: &[Token], k: usize) -> bool {
    k + 1 < tokens.len()
        && tokens[k].surface.eq_ignore_ascii_case("q")
        && (tokens[k + 1].is_numeric() || is_numeric_range(&tokens[k + 1].surface))
}

/// True when token `k` can open an Instructions span.
pub(crate) fn is_dosing_at(chars: &[char], tokens: &[Token], k: usize, lex: &SigLexicon) -> bool {
    let s = &tokens[k].surface;
    is_multiplication_at(chars, tokens, k)
        || is_quantity_with_form_at(tokens, k, lex)
        || is_interval_at(tokens, k)
        || lex.dose_form(s).is_some()
        || lex.route(s).is_some()
        || lex.meal(s).is_some()
        || lex.frequency(s).is_some()
        || lex.is_prn(s)
}

/// Classify the tokens of `text` into instruction items, left to right.
pub fn scan_instructions(text: &str, lex: &SigLexicon) -> Vec<InstrItem> {
    let chars: Vec<char> = text.chars().collect();
    let tokens = tokenize(text);
    let mut items = Vec::new();
    let mut k = 0;
    let slice = |a: usize, b: usize| chars[a..b].iter().collect::<String>();
    while k < tokens.len() {
        let t = &tokens[k];
        let (kind, last) = if is_multiplication_at(&chars, &tokens, k) {
            let kind = ItemKind::Quantity {
                quantity: t.surface.clone(),
                multiplier: Some(tokens[k + 1].surface.clone()),
            };
            (kind, k + 1)
        } else if is_quantity_with_form_at(&tokens, k, lex) {
            let kind = ItemKind::Quantity {
                quantity: t.surface.clone(),
                multiplier: None,
            };
            (kind, k)
        } else if is_interval_at(&tokens, k) {
            let unit_follows = tokens
                .get(k + 2)
                .is_some_and(|u| INTERVAL_UNITS.contains(&u.lower().as_str()));
            let kind = ItemKind::Interval {
                range: tokens[k + 1].surface.clone(),
            };
            (kind, if unit_follows { k + 2 } else { k + 1 })
        } else if t.surface.eq_ignore_ascii_case("for")
            && tokens.get(k + 1).is_some_and(|n| is_numeric_fragment(&n.surface))
            && tokens.get(k + 2).is_some_and(|u| lex.duration_unit(&u.surface).is_some())
        {
            let kind = ItemKind::Duration {
                count: tokens[k + 1].surface.clone(),
                unit: lex.duration_unit(&tokens[k + 2].surface).unwrap_or_default().to_string(),
            };
            (kind, k + 2)
        } else if let Some(form) = lex.dose_form(&t.surface) {
            (ItemKind::DoseForm { form: form.to_string() }, k)
        } else if let Some(rel) = lex.meal(&t.surface) {
            (ItemKind::Meal { relation: rel.to_string() }, k)
        } else if let Some(route) = lex.route(&t.surface) {
            (ItemKind::Route { route: route.to_string() }, k)
        } else if let Some(freq) = lex.frequency(&t.surface) {
            (ItemKind::Frequency { frequency: freq.to_string() }, k)
        } else if lex.is_prn(&t.surface) {
            (ItemKind::Prn, k)
        } else if let Some(meaning) = lex.thai(&t.surface) {
            (ItemKind::Thai { meaning: meaning.to_string() }, k)
        } else {
            (ItemKind::Residue, k)
        };
        let (start, end) = (t.start, tokens[last].end);
        items.push(InstrItem {
            kind,
            start,
            end,
            slice: slice(start, end),
        });
        k = last + 1;
    }
    items
}
