mod common;

use common::{chat_reply, StubServer};
use sigkit::cli::{sha256_hex, RunManifest};
use sigkit::corpus::{load_corpus, MedicationStatement, Split};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sigkit");

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn seed() -> PathBuf {
    manifest_dir().join("data/seed_corpus.jsonl")
}

fn sigkit(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("SIGKIT_API_KEY").output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_manifest(path: &Path) -> RunManifest {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn parse_reproduces_gold_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pred.jsonl");
    let o = sigkit(&["parse", "--corpus", s(&seed()), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let gold = load_corpus(seed()).unwrap();
    let pred = load_corpus(&out).unwrap();
    assert_eq!(gold.len(), pred.len());
    for (g, p) in gold.iter().zip(&pred) {
        assert_eq!(g.ner, p.ner, "{}", g.id);
    }
    let m = read_manifest(&dir.path().join("pred.jsonl.manifest.json"));
    assert_eq!(m.outputs, vec![s(&out).to_string()]);
    assert_eq!(m.tool_version, sigkit::VERSION);
    for d in &m.input_digests {
        assert_eq!(d.sha256, sha256_hex(&fs::read(&d.path).unwrap()), "{}", d.path);
    }
}

#[test]
fn parse_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.jsonl");
    fs::write(&corpus, "").unwrap();
    let out = dir.path().join("out.jsonl");
    let o = sigkit(&["parse", "--corpus", s(&corpus), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
}

#[test]
fn missing_lexicon_is_usage_error_naming_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.jsonl");
    let missing = dir.path().join("no_such_lexicon.json");
    let o = sigkit(&["parse", "--corpus", s(&seed()), "--lexicon", s(&missing), "--out", s(&out)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no_such_lexicon.json"), "{}", stderr(&o));
    assert!(!out.exists(), "no partial output");
}

#[test]
fn validate_reports_violations_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let ok = sigkit(&["corpus", "validate", s(&seed())]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    let bad = dir.path().join("bad.jsonl");
    fs::write(
        &bad,
        r#"{"id":"x1","text":"ASA 100","ner":[{"type":"Medication","start":0,"end":4,"text":"ASA ","zero_width":false}]}"#,
    )
    .unwrap();
    let o = sigkit(&["corpus", "validate", s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("x1"));
    fs::write(&bad, "{not json\n").unwrap();
    assert_eq!(code(&sigkit(&["corpus", "validate", s(&bad)])), 1);
    assert_eq!(code(&sigkit(&["corpus", "validate", s(&dir.path().join("absent.jsonl"))])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&sigkit(&["frobnicate"])), 2);
    assert_eq!(code(&sigkit(&["parse"])), 2);
    assert_eq!(code(&sigkit(&["--help"])), 0);
}

fn synthetic_corpus(dir: &Path, n: usize) -> PathBuf {
    let path = dir.join("synthetic.jsonl");
    let statements: Vec<MedicationStatement> =
        (0..n).map(|i| MedicationStatement::new(format!("s{i:03}"), format!("Drug{i} 1x1 po pc"))).collect();
    fs::write(&path, sigkit::corpus::to_jsonl(&statements)).unwrap();
    path
}

#[test]
fn split_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = synthetic_corpus(dir.path(), 100);
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for out in [&a, &b] {
        let o = sigkit(&["--seed", "7", "corpus", "split", s(&corpus), "--ratios", "0.25,0.25,0.5", "--out", s(out)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let split = load_corpus(&a).unwrap();
    let count = |sp: Split| split.iter().filter(|s| s.split == sp).count();
    assert_eq!((count(Split::Train), count(Split::Validation), count(Split::Test)), (25, 25, 50));
    let c = dir.path().join("c.jsonl");
    sigkit(&["--seed", "8", "corpus", "split", s(&corpus), "--out", s(&c)]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn stats_json() {
    let o = sigkit(&["corpus", "stats", s(&seed()), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["per_split"]["train"][0], 10);
}

#[test]
fn mock_oracle_ner_run_is_perfect_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let args = ["run", "--task", "ner", "--variant", "E", "--backend", "mock", "--out-dir", s(&out)];
    let o = sigkit(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = snapshot(&out);
    let o = sigkit(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(first, snapshot(&out), "byte-identical outputs");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    for column in report["tables"][0]["columns"].as_array().unwrap() {
        for row in column["rows"].as_array().unwrap() {
            assert_eq!(row["metrics"]["f1"], 1.0, "{} {}", column["name"], row["label"]);
        }
    }
    let m = read_manifest(&out.join("manifest.json"));
    for f in ["prompt.txt", "response.txt", "predictions.jsonl", "report.txt", "report.json"] {
        assert!(m.outputs.iter().any(|o| o.ends_with(f)), "{f} not in manifest");
    }
}

#[test]
fn unknown_variant_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = sigkit(&["run", "--task", "ner", "--variant", "G", "--out-dir", s(&dir.path().join("r"))]);
    assert_eq!(code(&o), 2);
    let o = sigkit(&["prompt", "build", "--task", "ex", "--variant", "A"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn prompt_build_matches_golden() {
    let rows = manifest_dir().join("prompts/ex_payload_rows.jsonl");
    let o = sigkit(&["prompt", "build", "--task", "ex", "--variant", "3", "--ner-rows", s(&rows)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), fs::read_to_string(manifest_dir().join("prompts/ex_3.txt")).unwrap());
}

#[test]
fn http_records_and_cassette_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cassette = dir.path().join("cassette.jsonl");
    let reply = "Original Text,Active Ingredient EX,Unit EX,Mode EX,Instructions EX\n\
                 Ridperidone (1) 0.5x1 po hs,risperidone,milligram,oral,0.5 Tablet oral at bedtime; 0.25 Tablet oral as needed for agitation\n";
    let server = StubServer::start(vec![(200, chat_reply(reply))]);
    let live = dir.path().join("live");
    let o = Command::new(BIN)
        .args(["run", "--task", "ex", "--variant", "3", "--ids", "a06", "--backend", "http"])
        .args(["--endpoint", &server.url, "--cassette", s(&cassette), "--out-dir", s(&live)])
        .env("SIGKIT_API_KEY", "test-key")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    server.join();
    assert!(fs::read_to_string(live.join("diagnostics.txt")).unwrap().contains("a06: extra content"));

    let replay_args = |out: &Path| {
        sigkit(&[
            "run", "--task", "ex", "--variant", "3", "--ids", "a06", "--backend", "cassette", "--cassette",
            s(&cassette), "--out-dir", s(out),
        ])
    };
    let r1 = dir.path().join("r1");
    let r2 = dir.path().join("r2");
    assert_eq!(code(&replay_args(&r1)), 0);
    assert_eq!(code(&replay_args(&r2)), 0);
    for f in ["response.txt", "predictions.jsonl", "report.txt", "report.json"] {
        assert_eq!(fs::read(r1.join(f)).unwrap(), fs::read(r2.join(f)).unwrap(), "{f}");
        assert_eq!(fs::read(live.join(f)).unwrap(), fs::read(r1.join(f)).unwrap(), "{f}");
    }

    let miss = sigkit(&[
        "run", "--task", "ex", "--variant", "2", "--ids", "a06", "--backend", "cassette", "--cassette", s(&cassette),
        "--out-dir", s(&dir.path().join("miss")),
    ]);
    assert_ne!(code(&miss), 0);
    assert!(stderr(&miss).contains("cassette has no entry"), "{}", stderr(&miss));
}

#[test]
fn http_without_key_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = sigkit(&["run", "--task", "ner", "--variant", "B", "--backend", "http", "--out-dir", s(&dir.path().join("o"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("SIGKIT_API_KEY"));
}

#[test]
fn score_and_report_commands() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    assert_eq!(code(&sigkit(&["parse", "--corpus", s(&seed()), "--out", s(&pred)])), 0);
    let o = sigkit(&["score", "ner", "--gold", s(&seed()), "--pred", s(&pred), "--mode", "strict"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("Strict"));
    assert!(!stdout(&o).contains("Partial"));

    let expanded = dir.path().join("ex.jsonl");
    assert_eq!(code(&sigkit(&["expand", "--corpus", s(&seed()), "--ner-pred", s(&pred), "--out", s(&expanded)])), 0);
    let o = sigkit(&["score", "ex", "--gold", s(&seed()), "--pred", s(&expanded), "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["tables"][0]["title"].as_str().unwrap().starts_with("Text expansion"));

    let stem = dir.path().join("report");
    assert_eq!(code(&sigkit(&["report", "--gold", s(&seed()), "--pred", s(&expanded), "--out", s(&stem)])), 0);
    let text = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.contains("Named entity recognition") && text.contains("Text expansion"));
    assert!(dir.path().join("report.json").exists());
    assert!(dir.path().join("report.manifest.json").exists());
}

#[test]
fn config_file_supplies_resources() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(manifest_dir().join("data/lexicon.json"), dir.path().join("lex.json")).unwrap();
    fs::write(dir.path().join("brands.json"), "{}").unwrap();
    let cfg = dir.path().join("sigkit.json");
    fs::write(&cfg, r#"{"lexicon": "lex.json", "brand_map": "brands.json", "seed": 3}"#).unwrap();
    let out = dir.path().join("ex.jsonl");
    let o = sigkit(&["--config", s(&cfg), "expand", "--corpus", s(&seed()), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let expanded = load_corpus(&out).unwrap();
    let hidil = expanded.iter().find(|s| s.text.starts_with("Hidil")).unwrap();
    assert_eq!(hidil.ex.as_ref().unwrap().active_ingredients, vec!["Hidil Cap"]);
    let m = read_manifest(&manifest_dir_of(&out));
    assert_eq!(m.config_digest, sha256_hex(&fs::read(&cfg).unwrap()));
    assert_eq!(m.input_digests.len(), 3);

    fs::write(&cfg, r#"{"lexicon": "lex.json", "bogus": 1}"#).unwrap();
    assert_eq!(code(&sigkit(&["--config", s(&cfg), "corpus", "stats", s(&seed())])), 2);
}

fn manifest_dir_of(out: &Path) -> PathBuf {
    sigkit::cli::manifest_path_for(out)
}
