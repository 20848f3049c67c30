use super::instr::{gap, is_dosing_at, is_multiplication_at, is_quantity_with_form_at};
use super::lexicon::SigLexicon;
use super::token::{tokenize, Script, Token};
use crate::corpus::{EntityAnnotation, EntityType};
use crate::expand::{expand_unit, BrandMap};

const DEFAULT_MG_CEILING: f64 = 1000.0;

/// Parse "40", "0.5" or "1/2".
pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let den: f64 = b.parse().ok()?;
            if den == 0.0 {
                return None;
            }
            a.parse::<f64>().ok()? / den
        }
        None => s.parse().ok()?,
    };
    v.is_finite().then_some(v)
}

/// Unit for a strength whose unit is not written.
///
/// Brand default first, then "mg" for strengths up to 1000, else no guess.
pub fn infer_unit(medication: &str, strength: &str, brands: &BrandMap) -> Option<String> {
    let value = parse_number(strength).filter(|v| *v > 0.0)?;
    if let Some(unit) = brands.lookup(medication).and_then(|e| e.default_unit.as_ref()) {
        return Some(unit.clone());
    }
    (value <= DEFAULT_MG_CEILING).then(|| "mg".to_string())
}

/// Letters (digits allowed inside); dose-form words may trail a name ("Hidil Cap").
fn is_name_like(t: &Token, lex: &SigLexicon) -> bool {
    let s = &t.surface;
    let code = lex.route(s).is_some() || lex.meal(s).is_some() || lex.frequency(s).is_some() || lex.is_prn(s);
    matches!(t.script, Script::Latin | Script::Mixed) && !code && !s.eq_ignore_ascii_case("q")
}

fn span(ty: EntityType, tokens: &[Token], first: usize, last: usize, chars: &[char]) -> EntityAnnotation {
    let (start, end) = (tokens[first].start, tokens[last].end);
    EntityAnnotation::span(ty, start, end, chars[start..end].iter().collect::<String>())
}

/// Rule-based NER over the five entity types.
///
/// Medication anchors the statement: without a leading name run nothing else fires.
pub fn parse_statement(text: &str, lex: &SigLexicon, brands: &BrandMap) -> Vec<EntityAnnotation> {
    let chars: Vec<char> = text.chars().collect();
    let tokens = tokenize(text);
    let mut out = Vec::new();

    let name_len = tokens.iter().take_while(|t| is_name_like(t, lex)).count();
    if name_len == 0 {
        return out;
    }
    let medication = span(EntityType::Medication, &tokens, 0, name_len - 1, &chars);
    let mut i = name_len;

    let mut strength = None;
    if let Some(t) = tokens.get(i).filter(|t| t.is_numeric()) {
        let opened = gap(&chars, &tokens[i - 1], t).contains('(');
        let bare_ok = !is_multiplication_at(&chars, &tokens, i) && !is_quantity_with_form_at(&tokens, i, lex);
        if opened || bare_ok {
            strength = Some(span(EntityType::Strength, &tokens, i, i, &chars));
            i += 1;
        }
    }

    let mut unit = None;
    if let Some(s) = &strength {
        match tokens.get(i).filter(|t| expand_unit(&t.surface).is_some()) {
            Some(_) => {
                unit = Some(span(EntityType::Unit, &tokens, i, i, &chars));
                i += 1;
            }
            None => {
                if let Some(u) = infer_unit(&medication.surface, &s.surface, brands) {
                    unit = Some(EntityAnnotation::zero_width(EntityType::Unit, s.end, u));
                }
            }
        }
    }

    let mode = (i..tokens.len())
        .find(|&k| lex.route(&tokens[k].surface).is_some())
        .map(|k| span(EntityType::Mode, &tokens, k, k, &chars));

    let instructions = (i..tokens.len())
        .find(|&k| is_dosing_at(&chars, &tokens, k, lex))
        .map(|k| span(EntityType::Instructions, &tokens, k, tokens.len() - 1, &chars));

    out.push(medication);
    out.extend(strength);
    out.extend(unit);
    out.extend(mode);
    out.extend(instructions);
    out
}
