use super::config::{Config, Resources};
use super::manifest::{manifest_path_for, write_atomic, InputDigest, RunManifest};
use super::scoring::{ex_tables, ner_cis, ner_tables, score_ex, score_ner};
use super::{
    BackendArg, Cli, Command, CorpusCommand, ExpandArgs, ModeArg, ParseArgs, PayloadArgs, PromptCommand, ReportArgs,
    RunArgs, ScoreCommand, TaskArg, EXIT_INVALID, EXIT_OK,
};
use crate::corpus::{
    corpus_stats, load_corpus, load_predictions, parse_corpus, split_corpus, to_jsonl, validate_statement,
    CorpusError, MedicationStatement, Split, SplitRatios,
};
use crate::evalkit::{render_report, EquivalenceLexicon, MatchMode, MetricTable, Report};
use crate::expand::expand_statement;
use crate::llmrun::{
    complete, parse_ex_response, parse_ner_response, CassetteBackend, CompletionBackend, CompletionRequest,
    ExVocabulary, HttpBackend, HttpConfig, MockBackend, OracleBackend, RecordingBackend,
};
use crate::prompts::{
    build_ex_prompt, build_ner_prompt, parse_payload_rows, PromptSpec, PromptText, Task, Variant, WorkedExamples,
};
use crate::sigparse::{from_table_row, parse_statement, to_table_row, TableRow};
use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

const DEFAULT_SEED: u64 = 42;

struct Ctx {
    cfg: Config,
    seed: u64,
    command_line: String,
}

impl Ctx {
    fn manifest(&self, inputs: Vec<InputDigest>) -> RunManifest {
        RunManifest::new(self.command_line.clone(), self.cfg.digest.as_deref(), inputs)
    }
}

pub(super) fn dispatch(cli: Cli, command_line: String) -> Result<i32> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let ctx = Ctx { cfg, seed, command_line };
    match cli.command {
        Command::Corpus(c) => corpus_cmd(&ctx, c),
        Command::Parse(a) => parse_cmd(&ctx, a),
        Command::Expand(a) => expand_cmd(&ctx, a),
        Command::Prompt(PromptCommand::Build { task, variant, payload }) => prompt_build_cmd(&ctx, task, &variant, &payload),
        Command::Run(a) => run_cmd(&ctx, a),
        Command::Score(s) => score_cmd(&ctx, s),
        Command::Report(a) => report_cmd(&ctx, a),
    }
}

fn load(path: &Path) -> Result<Vec<MedicationStatement>> {
    load_corpus(path).with_context(|| format!("loading corpus {}", path.display()))
}

fn load_pred(path: &Path) -> Result<Vec<MedicationStatement>> {
    load_predictions(path).with_context(|| format!("loading predictions {}", path.display()))
}

fn write_text(path: &Path, text: &str, outputs: &mut Vec<String>) -> Result<()> {
    write_atomic(path, text.as_bytes())?;
    outputs.push(path.display().to_string());
    Ok(())
}

fn write_manifest(path: &Path, mut manifest: RunManifest, outputs: Vec<String>) -> Result<()> {
    manifest.outputs = outputs;
    write_atomic(path, manifest.to_json().as_bytes())
}

fn corpus_cmd(ctx: &Ctx, c: CorpusCommand) -> Result<i32> {
    match c {
        CorpusCommand::Validate { corpus } => {
            let content = std::fs::read_to_string(&corpus)
                .map_err(|source| CorpusError::Io {
                    path: corpus.display().to_string(),
                    source,
                })
                .with_context(|| format!("loading corpus {}", corpus.display()))?;
            let statements = match crate::corpus::parse_corpus_unchecked(&content) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{}: {e}", corpus.display());
                    return Ok(EXIT_INVALID);
                }
            };
            let violations: Vec<_> = statements.iter().flat_map(validate_statement).collect();
            for v in &violations {
                println!("{v}");
            }
            println!("{} statements, {} violations", statements.len(), violations.len());
            Ok(if violations.is_empty() { EXIT_OK } else { EXIT_INVALID })
        }
        CorpusCommand::Split { corpus, ratios, out } => {
            let ratios: SplitRatios = ratios.parse().map_err(|e: String| anyhow!(e))?;
            let statements = load(&corpus)?;
            let split = split_corpus(statements, ratios, ctx.seed)?;
            let mut outputs = Vec::new();
            write_text(&out, &to_jsonl(&split), &mut outputs)?;
            let stats = corpus_stats(&split);
            print!("{stats}");
            write_manifest(&manifest_path_for(&out), ctx.manifest(vec![InputDigest::of_file(&corpus)?]), outputs)?;
            Ok(EXIT_OK)
        }
        CorpusCommand::Stats { corpus, json } => {
            let stats = corpus_stats(&load(&corpus)?);
            if json {
                println!("{}", serde_json::to_string_pretty(&stats)?);
            } else {
                print!("{stats}");
            }
            Ok(EXIT_OK)
        }
    }
}

fn parse_cmd(ctx: &Ctx, a: ParseArgs) -> Result<i32> {
    let res = Resources::load(&ctx.cfg, a.lexicons.lexicon.as_deref(), a.lexicons.brand_map.as_deref(), None)?;
    let corpus = load(&a.corpus)?;
    let preds: Vec<MedicationStatement> = corpus
        .iter()
        .map(|s| MedicationStatement {
            ner: parse_statement(&s.text, &res.lex, &res.brands),
            ex: None,
            ..s.clone()
        })
        .collect();
    let mut outputs = Vec::new();
    write_text(&a.out, &to_jsonl(&preds), &mut outputs)?;
    let mut inputs = vec![InputDigest::of_file(&a.corpus)?];
    inputs.extend(res.inputs);
    write_manifest(&manifest_path_for(&a.out), ctx.manifest(inputs), outputs)?;
    Ok(EXIT_OK)
}

fn expand_cmd(ctx: &Ctx, a: ExpandArgs) -> Result<i32> {
    let res = Resources::load(&ctx.cfg, a.lexicons.lexicon.as_deref(), a.lexicons.brand_map.as_deref(), None)?;
    let corpus = load(&a.corpus)?;
    let mut inputs = vec![InputDigest::of_file(&a.corpus)?];
    let source = match &a.ner_pred {
        Some(p) => {
            inputs.push(InputDigest::of_file(p)?);
            let preds = load_pred(p)?;
            corpus
                .iter()
                .map(|s| MedicationStatement {
                    ner: preds.iter().find(|p| p.id == s.id).map(|p| p.ner.clone()).unwrap_or_default(),
                    ..s.clone()
                })
                .collect()
        }
        None => corpus,
    };
    let out: Vec<MedicationStatement> = source
        .into_iter()
        .map(|s| {
            let record = expand_statement(&s.ner, &s.text, &res.lex, &res.brands).record;
            MedicationStatement {
                ex: (!record.is_empty()).then_some(record),
                ..s
            }
        })
        .collect();
    let mut outputs = Vec::new();
    write_text(&a.out, &to_jsonl(&out), &mut outputs)?;
    inputs.extend(res.inputs);
    write_manifest(&manifest_path_for(&a.out), ctx.manifest(inputs), outputs)?;
    Ok(EXIT_OK)
}

/// Everything needed to render and later score one prompt.
struct Prepared {
    corpus: Vec<MedicationStatement>,
    prompt: PromptText,
    /// NER rows fed to an expansion prompt, one per payload id.
    ner_rows: Vec<TableRow>,
    inputs: Vec<InputDigest>,
    res: Resources,
}

fn task_of(t: TaskArg) -> Task {
    match t {
        TaskArg::Ner => Task::Ner,
        TaskArg::Ex => Task::Ex,
    }
}

fn prepare(ctx: &Ctx, task: TaskArg, variant: &str, p: &PayloadArgs, equiv: Option<&Path>) -> Result<Prepared> {
    let task = task_of(task);
    let variant = Variant::parse(task, variant)?;
    let res = Resources::load(&ctx.cfg, p.lexicons.lexicon.as_deref(), p.lexicons.brand_map.as_deref(), equiv)?;
    let mut inputs = Vec::new();
    let corpus = match &p.corpus {
        Some(path) => {
            inputs.push(InputDigest::of_file(path)?);
            load(path)?
        }
        None => parse_corpus(crate::data::SEED_CORPUS_JSONL)?,
    };
    let payload_rows = match &p.ner_rows {
        Some(path) => {
            inputs.push(InputDigest::of_file(path)?);
            let content = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(parse_payload_rows(&content).with_context(|| format!("parsing {}", path.display()))?)
        }
        None => None,
    };
    let payload_ids: Vec<String> = if !p.ids.is_empty() {
        p.ids.clone()
    } else if let Some(rows) = &payload_rows {
        rows.iter().map(|r| r.id.clone()).collect()
    } else {
        let split: Split = p.payload.parse().map_err(|e: String| anyhow!(e))?;
        corpus.iter().filter(|s| s.split == split).map(|s| s.id.clone()).collect()
    };
    let statement = |id: &str| {
        corpus
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| anyhow!("payload id {id:?} is not in the corpus"))
    };
    let (prompt, ner_rows) = match task {
        Task::Ner => {
            let pool: Vec<String> = corpus.iter().filter(|s| s.split == Split::Train).map(|s| s.id.clone()).collect();
            let spec = PromptSpec::for_variant(variant, &pool, payload_ids)?;
            (build_ner_prompt(&spec, &corpus, &res.lex)?, Vec::new())
        }
        Task::Ex => {
            let rows: Vec<TableRow> = if let Some(rows) = &payload_rows {
                payload_ids
                    .iter()
                    .map(|id| {
                        rows.iter()
                            .find(|r| &r.id == id)
                            .map(|r| r.row.clone())
                            .ok_or_else(|| anyhow!("no NER row for payload id {id:?}"))
                    })
                    .collect::<Result<_>>()?
            } else if let Some(path) = &p.ner_pred {
                inputs.push(InputDigest::of_file(path)?);
                let preds = load_pred(path)?;
                payload_ids
                    .iter()
                    .map(|id| {
                        let s = statement(id)?;
                        let ner = preds.iter().find(|p| &p.id == id).map(|p| p.ner.as_slice()).unwrap_or(&[]);
                        Ok(to_table_row(&s.text, ner, &res.lex))
                    })
                    .collect::<Result<_>>()?
            } else {
                payload_ids
                    .iter()
                    .map(|id| statement(id).map(|s| to_table_row(&s.text, &s.ner, &res.lex)))
                    .collect::<Result<_>>()?
            };
            let worked = WorkedExamples::shipped();
            let spec = PromptSpec::for_variant(variant, &worked.ids(), payload_ids)?;
            (build_ex_prompt(&spec, &corpus, &rows, &worked, &res.lex)?, rows)
        }
    };
    inputs.extend(res.inputs.iter().cloned());
    Ok(Prepared {
        corpus,
        prompt,
        ner_rows,
        inputs,
        res,
    })
}

fn prompt_build_cmd(ctx: &Ctx, task: TaskArg, variant: &str, p: &PayloadArgs) -> Result<i32> {
    let prepared = prepare(ctx, task, variant, p, None)?;
    print!("{}", prepared.prompt.text);
    Ok(EXIT_OK)
}

fn backend_for(a: &RunArgs, prepared: &Prepared) -> Result<Box<dyn CompletionBackend>> {
    Ok(match a.backend {
        BackendArg::Mock => match &a.mock_fixtures {
            Some(p) => Box::new(MockBackend::load(p)?),
            None => Box::new(OracleBackend::new(
                prepared.corpus.clone(),
                prepared.res.lex.clone(),
                prepared.res.brands.clone(),
            )),
        },
        BackendArg::Cassette => {
            let path = a.cassette.as_ref().ok_or_else(|| anyhow!("--backend cassette needs --cassette"))?;
            Box::new(CassetteBackend::open(path)?)
        }
        BackendArg::Http => {
            let mut config = HttpConfig::default();
            if let Some(e) = &a.endpoint {
                config.endpoint = e.clone();
            }
            let http = HttpBackend::from_env(config)?;
            match &a.cassette {
                Some(path) => Box::new(RecordingBackend::new(http, path.clone())),
                None => Box::new(http),
            }
        }
    })
}

fn report_text(tables: &[MetricTable], cis: &[crate::evalkit::CiAnnotation]) -> Report {
    render_report(tables, cis)
}

fn run_cmd(ctx: &Ctx, a: RunArgs) -> Result<i32> {
    let prepared = prepare(ctx, a.task, &a.variant, &a.payload, a.equiv.as_deref())?;
    let mut params = BTreeMap::new();
    if let Some(m) = &a.model {
        params.insert("model".to_string(), m.clone());
    }
    if let Some(t) = &a.temperature {
        params.insert("temperature".to_string(), t.clone());
    }
    let request = CompletionRequest::new(prepared.prompt.clone(), params);
    let mut backend = backend_for(&a, &prepared)?;
    let response = complete(backend.as_mut(), &request)?;

    let payload_ids = &prepared.prompt.rendered_from.payload_ids;
    let payload: Vec<MedicationStatement> = payload_ids
        .iter()
        .map(|id| prepared.corpus.iter().find(|s| &s.id == id).cloned().expect("payload ids come from the corpus"))
        .collect();
    let mut diagnostics: Vec<String> = Vec::new();
    let (predictions, report) = match task_of(a.task) {
        Task::Ner => {
            let parsed = parse_ner_response(&response, payload.len());
            diagnostics.extend(parsed.diagnostics);
            let preds: Vec<MedicationStatement> = payload
                .iter()
                .zip(&parsed.rows)
                .map(|(s, row)| MedicationStatement {
                    ner: from_table_row(row, &s.text),
                    ex: None,
                    ..s.clone()
                })
                .collect();
            let scores = score_ner(&payload, &preds);
            let report = report_text(&ner_tables(&scores, &[MatchMode::Strict, MatchMode::Partial]), &ner_cis(&scores)?);
            (preds, report)
        }
        Task::Ex => {
            let vocab = ExVocabulary::new(&prepared.res.lex, &prepared.res.eq);
            let parsed = parse_ex_response(&response, payload.len(), &vocab);
            diagnostics.extend(parsed.diagnostics);
            let preds: Vec<MedicationStatement> = payload
                .iter()
                .zip(&parsed.rows)
                .zip(&prepared.ner_rows)
                .map(|((s, row), ner_row)| {
                    if row.extra_content {
                        diagnostics.push(format!("{}: extra content in instructions", s.id));
                    }
                    MedicationStatement {
                        ner: from_table_row(ner_row, &s.text),
                        ex: (!row.record.is_empty()).then(|| row.record.clone()),
                        ..s.clone()
                    }
                })
                .collect();
            let scores = score_ex(&payload, &preds, &prepared.res.eq);
            (preds, report_text(&ex_tables(&scores), &[]))
        }
    };

    let dir = &a.out_dir;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut outputs = Vec::new();
    write_text(&dir.join("prompt.txt"), &prepared.prompt.text, &mut outputs)?;
    write_text(&dir.join("response.txt"), &response, &mut outputs)?;
    write_text(&dir.join("predictions.jsonl"), &to_jsonl(&predictions), &mut outputs)?;
    let mut diag = diagnostics.join("\n");
    if !diag.is_empty() {
        diag.push('\n');
    }
    write_text(&dir.join("diagnostics.txt"), &diag, &mut outputs)?;
    write_text(&dir.join("report.txt"), &report.text, &mut outputs)?;
    write_text(&dir.join("report.json"), &report.json, &mut outputs)?;
    let mut inputs = prepared.inputs;
    for p in [&a.cassette, &a.mock_fixtures].into_iter().flatten() {
        if p.exists() && a.backend != BackendArg::Http {
            inputs.push(InputDigest::of_file(p)?);
        }
    }
    write_manifest(&dir.join("manifest.json"), ctx.manifest(inputs), outputs)?;
    print!("{}", report.text);
    Ok(EXIT_OK)
}

fn modes(m: ModeArg) -> Vec<MatchMode> {
    match m {
        ModeArg::Strict => vec![MatchMode::Strict],
        ModeArg::Partial => vec![MatchMode::Partial],
        ModeArg::Both => vec![MatchMode::Strict, MatchMode::Partial],
    }
}

fn equivalence(ctx: &Ctx, path: Option<&PathBuf>) -> Result<EquivalenceLexicon> {
    Ok(Resources::load(&ctx.cfg, None, None, path.map(PathBuf::as_path))?.eq)
}

fn score_cmd(ctx: &Ctx, s: ScoreCommand) -> Result<i32> {
    let (report, json) = match s {
        ScoreCommand::Ner { gold, pred, mode, json } => {
            let scores = score_ner(&load(&gold)?, &load_pred(&pred)?);
            (report_text(&ner_tables(&scores, &modes(mode)), &ner_cis(&scores)?), json)
        }
        ScoreCommand::Ex { gold, pred, equiv, json } => {
            let eq = equivalence(ctx, equiv.as_ref())?;
            let scores = score_ex(&load(&gold)?, &load_pred(&pred)?, &eq);
            if scores.scored == 0 {
                bail!("no gold statement carries an expansion record");
            }
            (report_text(&ex_tables(&scores), &[]), json)
        }
    };
    print!("{}", if json { &report.json } else { &report.text });
    Ok(EXIT_OK)
}

fn with_extension(stem: &Path, ext: &str) -> PathBuf {
    let mut name = stem.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".");
    name.push(ext);
    stem.with_file_name(name)
}

fn report_cmd(ctx: &Ctx, a: ReportArgs) -> Result<i32> {
    let eq = equivalence(ctx, a.equiv.as_ref())?;
    let gold = load(&a.gold)?;
    let pred = load_pred(&a.pred)?;
    let ner = score_ner(&gold, &pred);
    let mut tables = ner_tables(&ner, &[MatchMode::Strict, MatchMode::Partial]);
    let ex = score_ex(&gold, &pred, &eq);
    if ex.scored > 0 && pred.iter().any(|p| p.ex.is_some()) {
        tables.extend(ex_tables(&ex));
    }
    let report = report_text(&tables, &ner_cis(&ner)?);
    let mut outputs = Vec::new();
    write_text(&with_extension(&a.out, "txt"), &report.text, &mut outputs)?;
    write_text(&with_extension(&a.out, "json"), &report.json, &mut outputs)?;
    let mut inputs = vec![InputDigest::of_file(&a.gold)?, InputDigest::of_file(&a.pred)?];
    if let Some(p) = &a.equiv {
        inputs.push(InputDigest::of_file(p)?);
    }
    write_manifest(&with_extension(&a.out, "manifest.json"), ctx.manifest(inputs), outputs)?;
    Ok(EXIT_OK)
}
