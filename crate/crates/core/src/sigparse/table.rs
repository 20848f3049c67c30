use super::instr::{scan_instructions, ItemKind};
use super::lexicon::SigLexicon;
use super::token::{is_separator, tokenize};
use crate::corpus::{Alignment, EntityAnnotation, EntityType};
use crate::text::{char_len, find_all_chars};
use serde::{Deserialize, Serialize};

pub const COLUMN_NAMES: [&str; 10] = [
    "Medication ET",
    "Strength ET",
    "Unit ET",
    "Quantity of Dose Form per intake ET",
    "Dose Form ET",
    "Mode ET",
    "Timing ET",
    "Frequency ET",
    "Duration ET",
    "Instructions ET (Dose, Frequency, Duration)",
];

/// One statement in the 10-column tabular form used by the prompts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub original_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub medication: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dose_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instructions: Option<String>,
}

fn cell(v: &Option<String>) -> &str {
    v.as_deref().unwrap_or("")
}

fn non_empty(s: impl Into<String>) -> Option<String> {
    let s = s.into();
    let t = s.trim();
    (!t.is_empty()).then(|| t.to_string())
}

impl TableRow {
    /// The ten cells in column order.
    pub fn cells(&self) -> [&Option<String>; 10] {
        [
            &self.medication,
            &self.strength,
            &self.unit,
            &self.quantity,
            &self.dose_form,
            &self.mode,
            &self.timing,
            &self.frequency,
            &self.duration,
            &self.instructions,
        ]
    }

    pub fn cells_mut(&mut self) -> [&mut Option<String>; 10] {
        [
            &mut self.medication,
            &mut self.strength,
            &mut self.unit,
            &mut self.quantity,
            &mut self.dose_form,
            &mut self.mode,
            &mut self.timing,
            &mut self.frequency,
            &mut self.duration,
            &mut self.instructions,
        ]
    }

    /// Build from raw cell strings; blank cells become absent.
    pub fn from_cells(original_text: &str, cells: &[&str]) -> Self {
        let mut row = TableRow {
            original_text: original_text.trim().to_string(),
            ..Default::default()
        };
        for (slot, value) in row.cells_mut().into_iter().zip(cells) {
            *slot = non_empty(*value);
        }
        row
    }

    /// "orig, c1, ..., c10" with trailing whitespace removed.
    pub fn to_line(&self) -> String {
        let mut parts = vec![self.original_text.as_str()];
        parts.extend(self.cells().iter().map(|c| cell(c)));
        parts.join(", ").trim_end().to_string()
    }

    /// "orig: medication, unit, mode, instructions" as used in the expansion payload.
    pub fn to_ex_payload_line(&self) -> String {
        format!(
            "{}: {}, {}, {}, {}",
            self.original_text,
            cell(&self.medication),
            cell(&self.unit),
            cell(&self.mode),
            cell(&self.instructions)
        )
        .trim_end()
        .to_string()
    }

    pub fn is_blank(&self) -> bool {
        self.cells().iter().all(|c| c.is_none())
    }
}

fn first_value(anns: &[EntityAnnotation], ty: EntityType) -> Option<String> {
    anns.iter()
        .find(|a| a.entity_type == ty)
        .and_then(|a| non_empty(a.value()))
}

/// Map the five entity types onto the ten columns.
///
/// The auxiliary columns come from the Instructions sub-tokens.
pub fn to_table_row(text: &str, annotations: &[EntityAnnotation], lex: &SigLexicon) -> TableRow {
    let mut row = TableRow {
        original_text: text.to_string(),
        medication: first_value(annotations, EntityType::Medication),
        strength: first_value(annotations, EntityType::Strength),
        unit: first_value(annotations, EntityType::Unit),
        mode: first_value(annotations, EntityType::Mode),
        instructions: first_value(annotations, EntityType::Instructions),
        ..Default::default()
    };
    let Some(instr) = row.instructions.clone() else {
        return row;
    };
    let items = scan_instructions(&instr, lex);
    let mut pattern = None;
    let mut durations = Vec::new();
    for item in &items {
        match &item.kind {
            ItemKind::Quantity { quantity, multiplier } => {
                row.quantity.get_or_insert_with(|| quantity.clone());
                if multiplier.is_some() && pattern.is_none() {
                    pattern = Some(item.slice.clone());
                }
            }
            ItemKind::DoseForm { form } => {
                row.dose_form.get_or_insert_with(|| form.clone());
            }
            ItemKind::Meal { .. } => {
                row.timing.get_or_insert_with(|| item.slice.clone());
            }
            ItemKind::Duration { .. } | ItemKind::Thai { .. } => durations.push(item.slice.clone()),
            _ => {}
        }
    }
    if row.dose_form.is_none() && pattern.is_some() {
        row.dose_form = Some("tablet".to_string());
    }
    let by_code = || {
        items.iter().find_map(|i| match i.kind {
            ItemKind::Frequency { .. } => Some(i.slice.clone()),
            _ => None,
        })
    };
    let by_interval = || {
        items.iter().find_map(|i| match i.kind {
            ItemKind::Interval { .. } => Some(i.slice.clone()),
            _ => None,
        })
    };
    row.frequency = pattern.or_else(by_code).or_else(by_interval);
    row.duration = non_empty(durations.join(" "));
    row
}

/// Where a cell value sits in the text.
fn locate(cell: &str, text: &str, chars: &[char], starts: &[usize], ends: &[usize]) -> Option<(usize, usize, Alignment)> {
    let n = char_len(cell);
    let hits = find_all_chars(text, cell);
    if let Some(&s) = hits.iter().find(|&&s| starts.contains(&s) && ends.contains(&(s + n))) {
        return Some((s, s + n, Alignment::Exact));
    }
    let open_left = |s: usize| s == 0 || starts.contains(&s) || is_separator(chars[s - 1]);
    let open_right = |e: usize| e == chars.len() || ends.contains(&e) || is_separator(chars[e]) || is_separator(chars[e - 1]);
    hits.iter()
        .find(|&&s| open_left(s) && open_right(s + n))
        .map(|&s| (s, s + n, Alignment::BoundaryInclusive))
}

/// Recover entity annotations from a table row by locating each cell in the text.
///
/// Leftmost whole-token matches are exact; matches that take in separators are flagged
/// boundary-inclusive; anything else is kept as an unaligned annotation. A Unit cell not
/// found in the text becomes a zero-width annotation after the Strength span.
pub fn from_table_row(row: &TableRow, original_text: &str) -> Vec<EntityAnnotation> {
    let chars: Vec<char> = original_text.chars().collect();
    let tokens = tokenize(original_text);
    let starts: Vec<usize> = tokens.iter().map(|t| t.start).collect();
    let ends: Vec<usize> = tokens.iter().map(|t| t.end).collect();
    let len = chars.len();
    let mut out: Vec<EntityAnnotation> = Vec::new();
    let columns = [
        (EntityType::Medication, &row.medication),
        (EntityType::Strength, &row.strength),
        (EntityType::Unit, &row.unit),
        (EntityType::Mode, &row.mode),
        (EntityType::Instructions, &row.instructions),
    ];
    for (ty, value) in columns {
        let Some(value) = value.as_deref().map(str::trim).filter(|v| !v.is_empty()) else {
            continue;
        };
        let found = locate(value, original_text, &chars, &starts, &ends);
        let ann = match (ty, found) {
            (EntityType::Unit, Some((s, e, Alignment::Exact))) => EntityAnnotation::span(ty, s, e, value),
            (EntityType::Unit, _) => {
                let anchor = |t: EntityType| out.iter().find(|a| a.entity_type == t && !a.is_textless()).map(|a| a.end);
                let at = anchor(EntityType::Strength).or_else(|| anchor(EntityType::Medication)).unwrap_or(0);
                EntityAnnotation::zero_width(ty, at, value)
            }
            (_, Some((s, e, alignment))) => EntityAnnotation {
                alignment,
                ..EntityAnnotation::span(ty, s, e, value)
            },
            (_, None) => EntityAnnotation::unaligned(ty, len, value),
        };
        out.push(ann);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::data::SEED_CORPUS_JSONL;

    fn seed() -> Vec<crate::corpus::MedicationStatement> {
        parse_corpus(SEED_CORPUS_JSONL).unwrap()
    }

    #[test]
    fn xarator_row() {
        let s = &seed()[0];
        let row = to_table_row(&s.text, &s.ner, &SigLexicon::shipped());
        assert_eq!(row.to_line(), "Xarator (40) 1/2x1 opc, Xarator, 40, mg, 1/2, tablet, opc, opc, 1/2x1, , 1/2x1 opc");
    }

    #[test]
    fn empty_annotations_give_bare_row() {
        let row = to_table_row("ORS", &[], &SigLexicon::shipped());
        assert!(row.is_blank());
        assert_eq!(row.original_text, "ORS");
    }

    #[test]
    fn seed_round_trip() {
        let lex = SigLexicon::shipped();
        for s in seed() {
            let row = to_table_row(&s.text, &s.ner, &lex);
            assert_eq!(from_table_row(&row, &s.text), s.ner, "{}", s.id);
        }
    }

    #[test]
    fn unit_absent_from_text_is_zero_width() {
        let row = TableRow {
            original_text: "Simvas(40) 1x1 po pc".into(),
            strength: Some("40".into()),
            unit: Some("mg".into()),
            ..Default::default()
        };
        let anns = from_table_row(&row, "Simvas(40) 1x1 po pc");
        assert_eq!(anns[1], EntityAnnotation::zero_width(EntityType::Unit, 9, "mg"));
    }

    #[test]
    fn separator_inclusive_medication() {
        let row = TableRow {
            original_text: "Simvas(40) 1x1 po pc".into(),
            medication: Some("Simvas(40)".into()),
            ..Default::default()
        };
        let anns = from_table_row(&row, "Simvas(40) 1x1 po pc");
        assert_eq!((anns[0].start, anns[0].end), (0, 10));
        assert_eq!(anns[0].alignment, Alignment::BoundaryInclusive);
    }

    #[test]
    fn paraphrased_cell_is_unaligned() {
        let row = TableRow {
            original_text: "ASA 100".into(),
            medication: Some("Aspirin".into()),
            mode: Some("o".into()),
            ..Default::default()
        };
        let anns = from_table_row(&row, "ASA 100");
        assert_eq!(anns[0], EntityAnnotation::unaligned(EntityType::Medication, 7, "Aspirin"));
        assert_eq!(anns[1].alignment, Alignment::Unaligned);
    }

    #[test]
    fn payload_line() {
        let row = TableRow::from_cells("ORS", &["ORS"]);
        assert_eq!(row.to_ex_payload_line(), "ORS: ORS, , ,");
    }
}
