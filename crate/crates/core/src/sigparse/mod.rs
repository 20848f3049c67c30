//! Tokenizer, lexicon-driven NER and the 10-column table representation.

mod instr;
mod lexicon;
mod parse;
mod table;
mod token;

pub use instr::{scan_instructions, InstrItem, ItemKind};
pub use lexicon::{LexiconError, SigLexicon};
pub use parse::{infer_unit, parse_number, parse_statement};
pub use table::{from_table_row, to_table_row, TableRow, COLUMN_NAMES};
pub use token::{is_numeric_fragment, is_numeric_range, is_separator, tokenize, Script, Token};
