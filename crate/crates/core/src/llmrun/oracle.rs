use super::{CompletionBackend, CompletionRequest, LlmError};
use crate::corpus::MedicationStatement;
use crate::expand::{expand_statement, BrandMap};
use crate::prompts::Task;
use crate::sigparse::{parse_statement, to_table_row, SigLexicon, COLUMN_NAMES};

/// A perfect-model stand-in: answers each prompt by running the rule-based parser
/// (and expander) over the payload statements named in the prompt spec.
pub struct OracleBackend {
    corpus: Vec<MedicationStatement>,
    lex: SigLexicon,
    brands: BrandMap,
}

impl OracleBackend {
    pub fn new(corpus: Vec<MedicationStatement>, lex: SigLexicon, brands: BrandMap) -> Self {
        OracleBackend { corpus, lex, brands }
    }

    fn statement(&self, id: &str) -> Result<&MedicationStatement, LlmError> {
        self.corpus.iter().find(|s| s.id == id).ok_or_else(|| LlmError::BadBody(format!("payload id {id:?} not in corpus")))
    }
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

impl CompletionBackend for OracleBackend {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn complete(&mut self, request: &CompletionRequest) -> Result<String, LlmError> {
        let spec = &request.prompt.rendered_from;
        let mut rows = Vec::new();
        for id in &spec.payload_ids {
            let s = self.statement(id)?;
            let anns = parse_statement(&s.text, &self.lex, &self.brands);
            match spec.task {
                Task::Ner => {
                    let row = to_table_row(&s.text, &anns, &self.lex);
                    let mut cells = vec![row.original_text.clone()];
                    cells.extend(row.cells().iter().map(|c| c.as_deref().unwrap_or_default().to_string()));
                    rows.push(cells);
                }
                Task::Ex => {
                    let r = expand_statement(&anns, &s.text, &self.lex, &self.brands).record;
                    let instructions = [
                        &r.quantity_of_dose_form,
                        &r.dose_form,
                        &r.mode,
                        &r.relation_to_meal,
                        &r.frequency,
                        &r.other,
                    ]
                    .iter()
                    .filter_map(|v| v.as_deref())
                    .collect::<Vec<_>>()
                    .join(" ");
                    rows.push(vec![
                        s.text.clone(),
                        r.active_ingredients.join("; "),
                        r.unit.unwrap_or_default(),
                        r.mode.unwrap_or_default(),
                        instructions,
                    ]);
                }
            }
        }
        let text = match spec.task {
            Task::Ner => {
                let mut header = vec!["Original Text"];
                header.extend(COLUMN_NAMES);
                csv_table(&header, &rows)
            }
            Task::Ex => csv_table(
                &["Original Text", "Active Ingredient EX", "Unit EX", "Mode EX", "Instructions (Dose, Frequency, Duration) EX"],
                &rows,
            ),
        };
        Ok(text)
    }
}
