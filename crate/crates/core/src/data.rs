//! Default resources compiled into the binary.

pub const LEXICON_JSON: &str = include_str!("../data/lexicon.json");
pub const BRAND_MAP_JSON: &str = include_str!("../data/brand_map.json");
pub const EQUIVALENCE_JSON: &str = include_str!("../data/equivalence.json");
pub const SEED_CORPUS_JSONL: &str = include_str!("../data/seed_corpus.jsonl");
pub const WORKED_EXAMPLES_JSON: &str = include_str!("../prompts/ex_worked_examples.json");
pub const EX_PAYLOAD_ROWS_JSONL: &str = include_str!("../prompts/ex_payload_rows.jsonl");
