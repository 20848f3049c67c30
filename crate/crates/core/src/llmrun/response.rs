use crate::corpus::ExpansionRecord;
use crate::evalkit::EquivalenceLexicon;
use crate::expand::InstructionFields;
use crate::sigparse::{is_numeric_fragment, is_numeric_range, SigLexicon, TableRow, COLUMN_NAMES};

/// Rows recovered from a model reply, padded or truncated to the expected count.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRows<T> {
    pub rows: Vec<T>,
    /// `absent[i]` is true when no reply row was found for position `i`.
    pub absent: Vec<bool>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExParsedRow {
    pub original_text: String,
    pub record: ExpansionRecord,
    /// Set when the instructions cell carried a second dosing segment.
    pub extra_content: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Segmented {
    pub fields: InstructionFields,
    pub extra_content: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Relation,
    Frequency,
    DoseForm,
    Route,
}

/// Expanded-vocabulary phrases used to segment free-text instruction cells.
#[derive(Debug, Clone)]
pub struct ExVocabulary {
    phrases: Vec<(Vec<String>, Slot)>,
}

fn key(word: &str) -> String {
    word.trim_matches(|c: char| matches!(c, ',' | ';' | ':' | '.' | '"'))
        .to_lowercase()
}

impl ExVocabulary {
    pub fn new(lex: &SigLexicon, eq: &EquivalenceLexicon) -> Self {
        let mut phrases: Vec<(Vec<String>, Slot)> = Vec::new();
        let mut add = |value: &str, slot: Slot| {
            let mut forms = vec![value.to_lowercase()];
            if let Some(i) = eq.class_of(value) {
                forms.extend(eq.classes()[i].iter().cloned());
            }
            for f in forms {
                let words: Vec<String> = f.split_whitespace().map(key).collect();
                if !words.is_empty() && !phrases.iter().any(|(w, _)| *w == words) {
                    phrases.push((words, slot));
                }
            }
        };
        for v in lex.meal_codes.values() {
            add(v, Slot::Relation);
        }
        for v in lex.frequency_codes.values() {
            add(v, Slot::Frequency);
        }
        for v in lex.dose_form_words.values() {
            add(v, Slot::DoseForm);
        }
        for v in lex.route_codes.values() {
            add(v, Slot::Route);
        }
        phrases.sort_by(|a, b| b.0.len().cmp(&a.0.len()));
        ExVocabulary { phrases }
    }

    pub fn shipped() -> Self {
        Self::new(&SigLexicon::shipped(), EquivalenceLexicon::shipped())
    }

    fn longest(&self, words: &[&str]) -> Option<(usize, Slot)> {
        self.phrases.iter().find_map(|(p, slot)| {
            (p.len() <= words.len() && p.iter().zip(words).all(|(a, b)| *a == key(b))).then_some((p.len(), *slot))
        })
    }

    fn is_form_at(&self, words: &[&str]) -> bool {
        matches!(self.longest(words), Some((_, Slot::DoseForm)))
    }
}

fn is_number(word: &str) -> bool {
    let w = word.trim_end_matches([',', ';', ':']);
    is_numeric_fragment(w) || is_numeric_range(w)
}

fn set(slot: &mut Option<String>, value: String, other: &mut Vec<String>) {
    match slot {
        None => *slot = Some(value),
        Some(_) => other.push(value),
    }
}

fn segment_first(text: &str, vocab: &ExVocabulary) -> InstructionFields {
    let words: Vec<&str> = text.split_whitespace().collect();
    let mut f = InstructionFields::default();
    let mut other: Vec<String> = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let rest = &words[i..];
        let lower: Vec<String> = rest.iter().take(4).map(|w| key(w)).collect();
        let at = |k: usize| lower.get(k).map(String::as_str).unwrap_or("");
        if is_number(rest[0]) && at(1) == "times" && (at(2) == "daily" || (at(2) == "a" && at(3) == "day")) {
            let n = if at(2) == "daily" { 3 } else { 4 };
            set(&mut f.frequency, rest[..n].join(" "), &mut other);
            i += n;
            continue;
        }
        if at(0) == "every" && rest.len() > 2 && is_number(rest[1]) && (at(2).starts_with("hour") || at(2).starts_with("hr")) {
            set(&mut f.frequency, rest[..3].join(" "), &mut other);
            i += 3;
            continue;
        }
        if at(0) == "for" && rest.len() > 2 && is_number(rest[1]) {
            other.push(rest[..3].join(" "));
            i += 3;
            continue;
        }
        if let Some((n, slot)) = vocab.longest(rest) {
            let phrase = rest[..n].join(" ");
            let phrase = phrase.trim_end_matches([',', ';', ':', '.']).to_string();
            match slot {
                Slot::Relation => set(&mut f.relation_to_meal, phrase, &mut other),
                Slot::Frequency => set(&mut f.frequency, phrase, &mut other),
                Slot::DoseForm => set(&mut f.dose_form, phrase, &mut other),
                Slot::Route => {}
            }
            i += n;
            continue;
        }
        if is_number(rest[0]) && f.quantity_of_dose_form.is_none() && (i == 0 || vocab.is_form_at(&rest[1..])) {
            f.quantity_of_dose_form = Some(rest[0].trim_end_matches([',', ';', ':']).to_string());
            i += 1;
            continue;
        }
        other.push(rest[0].to_string());
        i += 1;
    }
    let other = other.join(" ");
    f.other = (!other.is_empty()).then_some(other);
    f
}

fn has_dosing(text: &str, vocab: &ExVocabulary) -> bool {
    let words: Vec<&str> = text.split_whitespace().collect();
    (0..words.len()).any(|i| is_number(words[i]) || vocab.is_form_at(&words[i..]))
}

/// Split an "Instructions EX" cell into the five categories. Segments after the
/// first `;` go to `other`; a later segment that names a quantity or dose form
/// marks the row as carrying extra content.
pub fn segment_instructions(cell: &str, vocab: &ExVocabulary) -> Segmented {
    let mut parts = cell.split(';').map(str::trim).filter(|p| !p.is_empty());
    let Some(first) = parts.next() else {
        return Segmented::default();
    };
    let mut fields = segment_first(first, vocab);
    let mut extra_content = false;
    for p in parts {
        extra_content |= has_dosing(p, vocab);
        fields.other = Some(match fields.other.take() {
            Some(o) => format!("{o}; {p}"),
            None => p.to_string(),
        });
    }
    Segmented { fields, extra_content }
}

enum Line {
    Skip,
    Cells(Vec<String>),
}

fn is_rule_cell(c: &str) -> bool {
    let c = c.trim();
    !c.is_empty() && c.trim_matches(':').chars().all(|ch| ch == '-') && c.contains('-')
}

fn split_line(line: &str) -> Line {
    let t = line.trim();
    if t.is_empty() || t.starts_with("```") {
        return Line::Skip;
    }
    let cells: Vec<String> = if t.contains('|') {
        let inner = t.strip_prefix('|').unwrap_or(t);
        let inner = inner.strip_suffix('|').unwrap_or(inner);
        inner.split('|').map(|c| c.trim().to_string()).collect()
    } else {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(t.as_bytes());
        match rdr.records().next() {
            Some(Ok(r)) => r.iter().map(str::to_string).collect(),
            _ => t.split(',').map(|c| c.trim().to_string()).collect(),
        }
    };
    if cells.iter().all(|c| is_rule_cell(c) || c.is_empty()) && cells.iter().any(|c| is_rule_cell(c)) {
        return Line::Skip;
    }
    Line::Cells(cells)
}

fn header_key(s: &str) -> String {
    s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase()
}

/// Shared table walk: returns one cell vector per data row plus diagnostics.
/// `header` maps a header row to column positions, `shape` maps a data row
/// without a header to cells in canonical order.
fn table_rows<F, G>(text: &str, header: F, shape: G, diagnostics: &mut Vec<String>) -> Vec<Vec<String>>
where
    F: Fn(&[String]) -> Option<Vec<Option<usize>>>,
    G: Fn(&[String], &mut Vec<String>) -> Option<Vec<String>>,
{
    let mut mapping: Option<Vec<Option<usize>>> = None;
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let cells = match split_line(line) {
            Line::Skip => continue,
            Line::Cells(c) => c,
        };
        if let Some(m) = header(&cells) {
            mapping = Some(m);
            continue;
        }
        if cells.len() < 2 {
            diagnostics.push(format!("line {}: skipped non-table text", n + 1));
            continue;
        }
        let row = match &mapping {
            Some(m) => Some(m.iter().map(|ix| ix.and_then(|i| cells.get(i).cloned()).unwrap_or_default()).collect()),
            None => shape(&cells, diagnostics),
        };
        match row {
            Some(r) => rows.push(r),
            None => diagnostics.push(format!("line {}: unrecognised row shape ({} cells)", n + 1, cells.len())),
        }
    }
    rows
}

fn finish<T: Default>(mut rows: Vec<T>, expected_count: usize, diagnostics: &mut Vec<String>) -> ParsedRows<T> {
    if rows.len() > expected_count {
        diagnostics.push(format!("dropped {} surplus row(s)", rows.len() - expected_count));
        rows.truncate(expected_count);
    }
    let mut absent = vec![false; rows.len()];
    while rows.len() < expected_count {
        diagnostics.push(format!("row {} absent", rows.len() + 1));
        rows.push(T::default());
        absent.push(true);
    }
    ParsedRows {
        rows,
        absent,
        diagnostics: std::mem::take(diagnostics),
    }
}

/// Parse a NER reply (markdown or CSV) into table rows. Never fails.
pub fn parse_ner_response(text: &str, expected_count: usize) -> ParsedRows<TableRow> {
    let names: Vec<String> = std::iter::once("Original Text")
        .chain(COLUMN_NAMES)
        .map(header_key)
        .collect();
    let header = |cells: &[String]| -> Option<Vec<Option<usize>>> {
        let keys: Vec<String> = cells.iter().map(|c| header_key(c)).collect();
        let hits = keys.iter().filter(|k| names.contains(k)).count();
        if hits < 2 && keys.first().map(String::as_str) != Some("originaltext") {
            return None;
        }
        Some(names.iter().map(|n| keys.iter().position(|k| k == n)).collect())
    };
    let shape = |cells: &[String], diags: &mut Vec<String>| -> Option<Vec<String>> {
        match cells.len() {
            11 => Some(cells.to_vec()),
            10 => Some(std::iter::once(String::new()).chain(cells.iter().cloned()).collect()),
            n => {
                diags.push(format!("row with {n} cells mapped positionally"));
                let mut v = cells.to_vec();
                v.resize(11, String::new());
                Some(v)
            }
        }
    };
    let mut diagnostics = Vec::new();
    let rows = table_rows(text, header, shape, &mut diagnostics)
        .into_iter()
        .map(|r| {
            let cells: Vec<&str> = r[1..].iter().map(String::as_str).collect();
            TableRow::from_cells(&r[0], &cells)
        })
        .collect();
    finish(rows, expected_count, &mut diagnostics)
}

#[derive(Clone, Copy)]
enum ExCol {
    Original,
    Ingredients,
    Unit,
    Mode,
    Instructions,
}

const EX_COLS: [ExCol; 5] = [ExCol::Original, ExCol::Ingredients, ExCol::Unit, ExCol::Mode, ExCol::Instructions];

fn ex_column(header: &str) -> Option<ExCol> {
    let k = header_key(header);
    if k == "originaltext" {
        return Some(ExCol::Original);
    }
    if !k.ends_with("ex") {
        return None;
    }
    if k.contains("ingredient") {
        Some(ExCol::Ingredients)
    } else if k.starts_with("unit") {
        Some(ExCol::Unit)
    } else if k.starts_with("mode") {
        Some(ExCol::Mode)
    } else if k.starts_with("instruction") {
        Some(ExCol::Instructions)
    } else {
        None
    }
}

fn non_empty(s: &str) -> Option<String> {
    let t = s.trim();
    (!t.is_empty()).then(|| t.to_string())
}

/// Parse an expansion reply into records. The instructions cell is segmented with
/// `vocab`; ingredient lists are split on `;`. Never fails.
pub fn parse_ex_response(text: &str, expected_count: usize, vocab: &ExVocabulary) -> ParsedRows<ExParsedRow> {
    let header = |cells: &[String]| -> Option<Vec<Option<usize>>> {
        let cols: Vec<Option<ExCol>> = cells.iter().map(|c| ex_column(c)).collect();
        if cols.iter().filter(|c| c.is_some()).count() < 2 {
            return None;
        }
        Some(
            EX_COLS
                .iter()
                .map(|want| cols.iter().position(|c| c.map(|c| c as usize) == Some(*want as usize)))
                .collect(),
        )
    };
    let shape = |cells: &[String], diags: &mut Vec<String>| -> Option<Vec<String>> {
        match cells.len() {
            9 => Some([0, 5, 6, 7, 8].iter().map(|&i| cells[i].clone()).collect()),
            5 => Some(cells.to_vec()),
            4 => {
                let (orig, ing) = cells[0].rsplit_once(':').unwrap_or(("", cells[0].as_str()));
                Some(vec![
                    orig.trim().to_string(),
                    ing.trim().to_string(),
                    cells[1].clone(),
                    cells[2].clone(),
                    cells[3].clone(),
                ])
            }
            n => {
                diags.push(format!("row with {n} cells not mapped"));
                None
            }
        }
    };
    let mut diagnostics = Vec::new();
    let rows = table_rows(text, header, shape, &mut diagnostics)
        .into_iter()
        .map(|r| {
            let seg = segment_instructions(&r[4], vocab);
            let f = seg.fields;
            let record = ExpansionRecord {
                active_ingredients: r[1].split(';').filter_map(non_empty).collect(),
                unit: non_empty(&r[2]),
                mode: non_empty(&r[3]),
                quantity_of_dose_form: f.quantity_of_dose_form,
                dose_form: f.dose_form,
                relation_to_meal: f.relation_to_meal,
                frequency: f.frequency,
                other: f.other,
            };
            ExParsedRow {
                original_text: r[0].trim().to_string(),
                record,
                extra_content: seg.extra_content,
            }
        })
        .collect();
    finish(rows, expected_count, &mut diagnostics)
}
