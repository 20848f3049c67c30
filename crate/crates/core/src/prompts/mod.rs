//! Persona / template / few-shot prompt rendering for the NER and expansion tasks.

mod text;

use crate::corpus::MedicationStatement;
use crate::sigparse::{to_table_row, SigLexicon, TableRow};
use serde::{Deserialize, Serialize};
use std::fmt;
use text::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PromptError {
    #[error("spec is for task {0}, not this builder")]
    WrongTask(Task),
    #[error("NER prompts need the template pattern")]
    TemplateRequired,
    #[error("shots = {shots} but {ids} example ids given")]
    ShotMismatch { shots: usize, ids: usize },
    #[error("unknown statement id {0:?}")]
    UnknownId(String),
    #[error("expected {expected} NER rows for the payload, got {got}")]
    MissingRows { expected: usize, got: usize },
    #[error("NER row for {id:?} describes a different statement")]
    RowMismatch { id: String },
    #[error("no worked expansion example for {0:?}")]
    MissingWorkedExample(String),
    #[error("unknown variant {0:?}")]
    UnknownVariant(String),
    #[error("variant needs {needed} examples, only {available} available")]
    NotEnoughExamples { needed: usize, available: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Ner,
    Ex,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Ner => "ner",
            Task::Ex => "ex",
        })
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ner" => Ok(Task::Ner),
            "ex" => Ok(Task::Ex),
            _ => Err(format!("unknown task {s:?}")),
        }
    }
}

/// The nine prompt variants: NER A-F and expansion 1-3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
    C,
    D,
    E,
    F,
    #[serde(rename = "1")]
    Ex1,
    #[serde(rename = "2")]
    Ex2,
    #[serde(rename = "3")]
    Ex3,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::A,
        Variant::B,
        Variant::C,
        Variant::D,
        Variant::E,
        Variant::F,
        Variant::Ex1,
        Variant::Ex2,
        Variant::Ex3,
    ];

    pub fn parse(task: Task, s: &str) -> Result<Self, PromptError> {
        let v = match s.trim().to_ascii_uppercase().as_str() {
            "A" => Variant::A,
            "B" => Variant::B,
            "C" => Variant::C,
            "D" => Variant::D,
            "E" => Variant::E,
            "F" => Variant::F,
            "1" => Variant::Ex1,
            "2" => Variant::Ex2,
            "3" => Variant::Ex3,
            _ => return Err(PromptError::UnknownVariant(s.to_string())),
        };
        if v.task() != task {
            return Err(PromptError::UnknownVariant(format!("{s} (task {task})")));
        }
        Ok(v)
    }

    pub fn task(self) -> Task {
        match self {
            Variant::Ex1 | Variant::Ex2 | Variant::Ex3 => Task::Ex,
            _ => Task::Ner,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::A => "A",
            Variant::B => "B",
            Variant::C => "C",
            Variant::D => "D",
            Variant::E => "E",
            Variant::F => "F",
            Variant::Ex1 => "1",
            Variant::Ex2 => "2",
            Variant::Ex3 => "3",
        }
    }

    /// (persona, template, shots)
    pub fn patterns(self) -> (bool, bool, usize) {
        match self {
            Variant::A => (true, true, 0),
            Variant::B => (false, true, 0),
            Variant::C => (false, true, 5),
            Variant::D => (true, true, 5),
            Variant::E => (false, true, 10),
            Variant::F => (true, true, 10),
            Variant::Ex1 => (false, false, 0),
            Variant::Ex2 => (true, true, 0),
            Variant::Ex3 => (true, true, 5),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub task: Task,
    pub persona: bool,
    pub template: bool,
    pub shots: usize,
    pub example_ids: Vec<String>,
    pub payload_ids: Vec<String>,
}

impl PromptSpec {
    /// Spec for a named variant; examples are the first `shots` ids of `example_pool`.
    pub fn for_variant(variant: Variant, example_pool: &[String], payload_ids: Vec<String>) -> Result<Self, PromptError> {
        let (persona, template, shots) = variant.patterns();
        if example_pool.len() < shots {
            return Err(PromptError::NotEnoughExamples {
                needed: shots,
                available: example_pool.len(),
            });
        }
        Ok(PromptSpec {
            task: variant.task(),
            persona,
            template,
            shots,
            example_ids: example_pool[..shots].to_vec(),
            payload_ids,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptText {
    pub text: String,
    pub rendered_from: PromptSpec,
}

/// Expansion cells shown in the few-shot block of the expansion prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkedExample {
    pub id: String,
    pub active_ingredient: String,
    pub unit: String,
    pub mode: String,
    pub instructions: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorkedExamples(pub Vec<WorkedExample>);

impl WorkedExamples {
    pub fn shipped() -> Self {
        serde_json::from_str(crate::data::WORKED_EXAMPLES_JSON).expect("shipped worked examples parse")
    }

    pub fn get(&self, id: &str) -> Option<&WorkedExample> {
        self.0.iter().find(|w| w.id == id)
    }

    pub fn ids(&self) -> Vec<String> {
        self.0.iter().map(|w| w.id.clone()).collect()
    }
}

/// A pre-built NER row for one payload statement, as stored in payload row files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayloadRow {
    pub id: String,
    pub row: TableRow,
}

/// Parse JSONL payload rows (`{"id": ..., "row": {...}}` per line).
pub fn parse_payload_rows(content: &str) -> Result<Vec<PayloadRow>, serde_json::Error> {
    content
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// Payload rows shipped with the expansion prompt goldens.
pub fn shipped_payload_rows() -> Vec<PayloadRow> {
    parse_payload_rows(crate::data::EX_PAYLOAD_ROWS_JSONL).expect("shipped payload rows parse")
}

fn find<'a>(corpus: &'a [MedicationStatement], id: &str) -> Result<&'a MedicationStatement, PromptError> {
    corpus
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| PromptError::UnknownId(id.to_string()))
}

fn check_common(spec: &PromptSpec, task: Task) -> Result<(), PromptError> {
    if spec.task != task {
        return Err(PromptError::WrongTask(spec.task));
    }
    if spec.shots != spec.example_ids.len() {
        return Err(PromptError::ShotMismatch {
            shots: spec.shots,
            ids: spec.example_ids.len(),
        });
    }
    Ok(())
}

/// LF line endings, no trailing whitespace, one final newline.
fn finish(raw: &str) -> String {
    let mut out: String = raw.lines().map(|l| l.trim_end()).collect::<Vec<_>>().join("\n");
    out.push('\n');
    out
}

/// Render an NER prompt; example lines come from the gold annotations of `example_ids`.
pub fn build_ner_prompt(spec: &PromptSpec, corpus: &[MedicationStatement], lex: &SigLexicon) -> Result<PromptText, PromptError> {
    check_common(spec, Task::Ner)?;
    if !spec.template {
        return Err(PromptError::TemplateRequired);
    }
    let mut out = String::new();
    if spec.persona {
        out.push_str(NER_PERSONA);
        out.push(' ');
    }
    out.push_str(NER_TEMPLATE);
    out.push('\n');
    if !spec.example_ids.is_empty() {
        out.push('\n');
        out.push_str(NER_EXAMPLES_INTRO);
        out.push_str("\n\n");
        for id in &spec.example_ids {
            let s = find(corpus, id)?;
            out.push_str(&to_table_row(&s.text, &s.ner, lex).to_line());
            out.push('\n');
        }
    }
    if !spec.payload_ids.is_empty() {
        out.push('\n');
        for id in &spec.payload_ids {
            out.push_str(&find(corpus, id)?.text);
            out.push('\n');
        }
    }
    Ok(PromptText {
        text: finish(&out),
        rendered_from: spec.clone(),
    })
}

fn example_block(s: &MedicationStatement, w: &WorkedExample, lex: &SigLexicon) -> String {
    let row = to_table_row(&s.text, &s.ner, lex);
    let c = |v: &Option<String>| v.clone().unwrap_or_default();
    [
        format!("{}:", s.text),
        format!("Original Text: {}", s.text),
        format!("Medication ET: {}", c(&row.medication)),
        format!("Unit ET: {}", c(&row.unit)),
        format!("Mode ET: {}", c(&row.mode)),
        format!("Instructions ET (Dose, Frequency, Duration): {}", c(&row.instructions)),
        format!("Active Ingredient EX: {}", w.active_ingredient),
        format!("Unit EX: {}", w.unit),
        format!("Mode EX: {}", w.mode),
        format!("Instructions (Dose, Frequency, Duration) EX: {}", w.instructions),
    ]
    .join("\n")
}

/// Render an expansion prompt over NER rows for the payload statements.
pub fn build_ex_prompt(
    spec: &PromptSpec,
    corpus: &[MedicationStatement],
    ner_rows: &[TableRow],
    worked: &WorkedExamples,
    lex: &SigLexicon,
) -> Result<PromptText, PromptError> {
    check_common(spec, Task::Ex)?;
    if ner_rows.len() != spec.payload_ids.len() {
        return Err(PromptError::MissingRows {
            expected: spec.payload_ids.len(),
            got: ner_rows.len(),
        });
    }
    let mut out = String::new();
    if spec.persona {
        out.push_str(EX_PERSONA);
        out.push(' ');
    }
    if spec.template {
        out.push_str(EX_TEMPLATE);
        out.push('\n');
    } else {
        out.push_str(EX_PLAIN);
        out.push(' ');
    }
    out.push_str(EX_HEADER);
    out.push('\n');
    if !ner_rows.is_empty() {
        out.push('\n');
        for (id, row) in spec.payload_ids.iter().zip(ner_rows) {
            let s = find(corpus, id)?;
            if !row.original_text.is_empty() && row.original_text != s.text {
                return Err(PromptError::RowMismatch { id: id.clone() });
            }
            let row = TableRow {
                original_text: s.text.clone(),
                ..row.clone()
            };
            out.push_str(&row.to_ex_payload_line());
            out.push('\n');
        }
    }
    if !spec.example_ids.is_empty() {
        out.push('\n');
        out.push_str(EX_EXAMPLES_INTRO);
        out.push('\n');
        out.push_str(EX_EXAMPLE_HEADER);
        out.push('\n');
        for id in &spec.example_ids {
            let s = find(corpus, id)?;
            let w = worked.get(id).ok_or_else(|| PromptError::MissingWorkedExample(id.clone()))?;
            out.push('\n');
            out.push_str(&example_block(s, w, lex));
            out.push('\n');
        }
    }
    if spec.template {
        out.push('\n');
        out.push_str(EX_CLOSING);
        out.push('\n');
    }
    Ok(PromptText {
        text: finish(&out),
        rendered_from: spec.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::data::SEED_CORPUS_JSONL;

    fn corpus() -> Vec<MedicationStatement> {
        parse_corpus(SEED_CORPUS_JSONL).unwrap()
    }

    fn pool() -> Vec<String> {
        (1..=10).map(|i| format!("a{i:02}")).collect()
    }

    #[test]
    fn persona_is_one_leading_sentence() {
        let lex = SigLexicon::shipped();
        let a = build_ner_prompt(&PromptSpec::for_variant(Variant::A, &pool(), vec![]).unwrap(), &corpus(), &lex).unwrap();
        let b = build_ner_prompt(&PromptSpec::for_variant(Variant::B, &pool(), vec![]).unwrap(), &corpus(), &lex).unwrap();
        assert_eq!(a.text, format!("{NER_PERSONA} {}", b.text));
    }

    #[test]
    fn shot_mismatch_rejected() {
        let mut spec = PromptSpec::for_variant(Variant::B, &pool(), vec![]).unwrap();
        spec.example_ids = vec!["a01".into()];
        let err = build_ner_prompt(&spec, &corpus(), &SigLexicon::shipped()).unwrap_err();
        assert_eq!(err, PromptError::ShotMismatch { shots: 0, ids: 1 });
    }

    #[test]
    fn unknown_example_id() {
        let mut spec = PromptSpec::for_variant(Variant::C, &pool(), vec![]).unwrap();
        spec.example_ids[0] = "zz".into();
        let err = build_ner_prompt(&spec, &corpus(), &SigLexicon::shipped()).unwrap_err();
        assert_eq!(err, PromptError::UnknownId("zz".into()));
    }

    #[test]
    fn variant_parsing() {
        assert_eq!(Variant::parse(Task::Ner, "e").unwrap(), Variant::E);
        assert_eq!(Variant::parse(Task::Ex, "3").unwrap(), Variant::Ex3);
        assert!(Variant::parse(Task::Ner, "G").is_err());
        assert!(Variant::parse(Task::Ner, "3").is_err());
    }

    #[test]
    fn ex_plain_without_rows_is_header_only() {
        let spec = PromptSpec::for_variant(Variant::Ex1, &[], vec![]).unwrap();
        let p = build_ex_prompt(&spec, &corpus(), &[], &WorkedExamples::shipped(), &SigLexicon::shipped()).unwrap();
        assert!(p.text.ends_with(&format!("{EX_HEADER}\n")));
    }

    #[test]
    fn shipped_payload_rows_cover_b_ids() {
        let rows = shipped_payload_rows();
        assert_eq!(rows.len(), 25);
        assert_eq!(rows[0].id, "b01");
        assert_eq!(rows[1].row.medication.as_deref(), Some("ORS"));
    }

    #[test]
    fn ex_missing_rows() {
        let spec = PromptSpec::for_variant(Variant::Ex2, &[], vec!["b01".into()]).unwrap();
        let err = build_ex_prompt(&spec, &corpus(), &[], &WorkedExamples::shipped(), &SigLexicon::shipped()).unwrap_err();
        assert_eq!(err, PromptError::MissingRows { expected: 1, got: 0 });
    }

    #[test]
    fn example_order_is_preserved() {
        let lex = SigLexicon::shipped();
        let mut spec = PromptSpec::for_variant(Variant::C, &pool(), vec![]).unwrap();
        let fwd = build_ner_prompt(&spec, &corpus(), &lex).unwrap().text;
        spec.example_ids.reverse();
        let rev = build_ner_prompt(&spec, &corpus(), &lex).unwrap().text;
        let tail = |t: &str| t.lines().skip(4).map(str::to_string).collect::<Vec<_>>();
        let mut r = tail(&rev);
        r.reverse();
        assert_eq!(tail(&fwd), r);
    }
}
