//! The `sigkit` command line.
//!
//! Exit codes: 0 success, 1 validation failures present, 2 usage or I/O error.

mod commands;
mod config;
mod manifest;
mod scoring;

pub use config::{Config, Resources};
pub use manifest::{manifest_path_for, sha256_hex, write_atomic, InputDigest, RunManifest};

use crate::corpus::CorpusError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sigkit", version, about = "Parse, expand, prompt and score medication sig strings")]
pub struct Cli {
    /// JSON file naming lexicon, brand_map, equivalence and seed.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized steps (overrides the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corpus utilities.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Run the rule-based parser over a corpus.
    Parse(ParseArgs),
    /// Expand annotations into normalized categories.
    Expand(ExpandArgs),
    /// Prompt utilities.
    #[command(subcommand)]
    Prompt(PromptCommand),
    /// Build a prompt, complete it, parse the reply and score it.
    Run(RunArgs),
    /// Score predictions against gold.
    #[command(subcommand)]
    Score(ScoreCommand),
    /// Write a text report and its JSON twin.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Check every statement against the annotation rules.
    Validate {
        corpus: PathBuf,
    },
    /// Assign train/validation/test labels.
    Split {
        corpus: PathBuf,
        /// Train, validation and test ratios.
        #[arg(long, default_value = "0.25,0.25,0.5")]
        ratios: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Entity counts per split.
    Stats {
        corpus: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct LexiconArgs {
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub brand_map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Expand these predicted annotations instead of the corpus gold.
    #[arg(long)]
    pub ner_pred: Option<PathBuf>,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Ner,
    Ex,
}

#[derive(Debug, Args)]
pub struct PayloadArgs {
    /// Corpus file; defaults to the shipped seed corpus.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Split whose statements form the payload.
    #[arg(long, default_value = "validation")]
    pub payload: String,
    /// Comma-separated statement ids; overrides --payload.
    #[arg(long, value_delimiter = ',')]
    pub ids: Vec<String>,
    /// Expansion input: NER rows from predicted annotations.
    #[arg(long, conflicts_with = "ner_rows")]
    pub ner_pred: Option<PathBuf>,
    /// Expansion input: JSONL file of {"id", "row"} table rows.
    #[arg(long)]
    pub ner_rows: Option<PathBuf>,
    #[command(flatten)]
    pub lexicons: LexiconArgs,
}

#[derive(Debug, Subcommand)]
pub enum PromptCommand {
    /// Render a prompt variant to stdout.
    Build {
        #[arg(long, value_enum)]
        task: TaskArg,
        /// A-F for ner, 1-3 for ex.
        #[arg(long)]
        variant: String,
        #[command(flatten)]
        payload: PayloadArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Mock,
    Cassette,
    Http,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub task: TaskArg,
    #[arg(long)]
    pub variant: String,
    #[arg(long, value_enum, default_value = "mock")]
    pub backend: BackendArg,
    /// Replay file for the cassette backend; record file for http.
    #[arg(long)]
    pub cassette: Option<PathBuf>,
    /// JSON map of request hash to response for the mock backend.
    /// Without it the mock answers with the rule-based parser.
    #[arg(long)]
    pub mock_fixtures: Option<PathBuf>,
    #[arg(long)]
    pub endpoint: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub temperature: Option<String>,
    #[arg(long)]
    pub equiv: Option<PathBuf>,
    #[command(flatten)]
    pub payload: PayloadArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Partial,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum ScoreCommand {
    /// Entity matching in strict and/or partial mode.
    Ner {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Expansion records under an equivalence lexicon.
    Ex {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        equiv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub equiv: Option<PathBuf>,
    /// Output stem; writes `<out>.txt`, `<out>.json` and `<out>.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
}

/// Map an error to an exit code: corpus content problems are validation failures.
fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<CorpusError>() {
        Some(CorpusError::Malformed { .. } | CorpusError::Invalid { .. }) => EXIT_INVALID,
        _ => EXIT_USAGE,
    }
}

/// Parse `args` and run the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let command_line = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::dispatch(cli, command_line) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}
