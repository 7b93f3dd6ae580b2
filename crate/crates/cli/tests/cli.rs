//! End-to-end tests of the binary: exit codes, output bytes, and the
//! atomicity guarantee around model writes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ctxcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctxcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn write(path: impl AsRef<Path>, content: &str) {
    let path = path.as_ref();
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, content).unwrap();
}

/// Two cleanly separable contexts, loose thresholds.
fn sample_corpus(root: &Path) {
    write(
        root.join("archery/d1.txt"),
        "The bow and arrow won. The arrow hit the target. The bow bent.",
    );
    write(
        root.join("archery/d2.txt"),
        "An arrow flew from the bow. The target stood far. The arrow and target met.",
    );
    write(
        root.join("chess/d1.txt"),
        "The king castled. The pawn advanced. The king and pawn stood.",
    );
    write(
        root.join("chess/d2.txt"),
        "The pawn took the knight. The king fled. The pawn and king danced.",
    );
}

fn train_sample(dir: &Path) -> std::path::PathBuf {
    let corpus = dir.join("corpus");
    sample_corpus(&corpus);
    let model = dir.join("m.ctx");
    let out = ctxcat(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--min-support",
        "0.2",
        "--rare-min-support",
        "0.1",
        "--mis-floor",
        "0.1",
    ]);
    assert!(out.status.success(), "train failed: {}", stderr(&out));
    model
}

#[test]
fn train_reports_per_context_feature_counts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    sample_corpus(&corpus);
    let model = dir.path().join("m.ctx");
    let out = ctxcat(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("archery\t") && lines[0].ends_with(" features"));
    assert!(lines[1].starts_with("chess\t") && lines[1].ends_with(" features"));
    assert!(model.exists());
}

#[test]
fn classify_prints_winner_per_document() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let q = dir.path().join("q.txt");
    write(&q, "The arrow hit the target. The bow sang.");
    let out = ctxcat(&["classify", "--model", model.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let fields: Vec<&str> = text.trim_end().split('\t').collect();
    assert_eq!(fields[0], q.to_str().unwrap());
    assert_eq!(fields[1], "archery");
    assert!(fields[2].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn classify_ranking_lists_every_context() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let q = dir.path().join("q.txt");
    write(&q, "The king took the pawn.");
    let out = ctxcat(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        "--ranking",
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("\tchess\t"));
    assert!(lines[1].contains("\tarchery\t"));
}

#[test]
fn classify_marks_empty_documents_unclassifiable_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let empty = dir.path().join("empty.txt");
    write(&empty, "");
    let q = dir.path().join("q.txt");
    write(&q, "The bow and arrow.");
    let out = ctxcat(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        empty.to_str().unwrap(),
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "batch must continue past failures");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].ends_with("\tUNCLASSIFIABLE\t0"));
    assert!(lines[1].contains("\tarchery\t"));
}

#[test]
fn classify_marks_exact_ties() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    // identical documents under both labels give identical tables
    write(corpus.join("beta/d1.txt"), "Ember frost drift. Ember frost.");
    write(corpus.join("alpha/d1.txt"), "Ember frost drift. Ember frost.");
    let model = dir.path().join("m.ctx");
    let out = ctxcat(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--min-support",
        "0.2",
        "--rare-min-support",
        "0.2",
        "--mis-floor",
        "0.2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let q = dir.path().join("q.txt");
    write(&q, "Ember frost.");
    let out = ctxcat(&["classify", "--model", model.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let fields: Vec<&str> = text.trim_end().split('\t').collect();
    assert_eq!(fields[1], "alpha", "tie must break to the lexicographically smaller");
    assert_eq!(fields.last(), Some(&"tie"));
}

#[test]
fn classify_missing_model_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.txt");
    write(&q, "anything");
    let out = ctxcat(&["classify", "--model", "/nonexistent/m.ctx", q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn classify_unreadable_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let out = ctxcat(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        dir.path().join("missing.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_rejects_corrupted_models() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let mut bytes = fs::read(&model).unwrap();
    let at = bytes.len() - 9;
    bytes[at] = bytes[at].wrapping_add(1);
    fs::write(&model, bytes).unwrap();
    let q = dir.path().join("q.txt");
    write(&q, "The bow.");
    let out = ctxcat(&["classify", "--model", model.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("model"), "{}", stderr(&out));
}

#[test]
fn evaluate_prints_table_and_writes_delimited_file() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let report = dir.path().join("report.tsv");
    let out = ctxcat(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--test",
        dir.path().join("corpus").to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("category"));
    assert!(text.contains("macro"));
    assert!(text.contains("documents: 4"));
    let tsv = fs::read_to_string(&report).unwrap();
    assert!(tsv.lines().any(|l| l.starts_with("archery\t1.0000\t1.0000\t1.0000")));
    assert!(tsv.lines().any(|l| l.starts_with("macro\t")));
}

#[test]
fn evaluate_rejects_labels_missing_from_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let test = dir.path().join("test");
    write(test.join("golf/d1.txt"), "The club hit the ball.");
    let out = ctxcat(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--test",
        test.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("golf"));
}

#[test]
fn evaluate_empty_test_dir_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let test = dir.path().join("test");
    fs::create_dir_all(&test).unwrap();
    let out = ctxcat(&[
        "evaluate",
        "--model",
        model.to_str().unwrap(),
        "--test",
        test.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mine_prints_the_expected_itemset_lines() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tx.txt");
    write(&input, "# comment\na b c\na b\n\na c\nb\n");
    let out = ctxcat(&["mine", "--input", input.to_str().unwrap(), "--min-support", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "3\ta\n3\tb\n2\tc\n2\ta b\n2\ta c\n");
}

#[test]
fn mine_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tx.txt");
    write(&input, "c b a\nb a\nc a\nb\n");
    let args = ["mine", "--input", input.to_str().unwrap(), "--min-support", "0.25"];
    let first = stdout(&ctxcat(&args));
    let second = stdout(&ctxcat(&args));
    assert_eq!(first, second);
    assert!(!first.is_empty());
}

#[test]
fn mine_reports_malformed_lines_by_number() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tx.txt");
    fs::create_dir_all(dir.path()).unwrap();
    fs::write(&input, b"good line\nbad \xff line\n").unwrap();
    let out = ctxcat(&["mine", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains(":2:"), "{}", stderr(&out));
}

#[test]
fn mine_empty_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tx.txt");
    write(&input, "# only comments\n\n");
    let out = ctxcat(&["mine", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mine_bench_reports_equal_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tx.txt");
    write(&input, "a b c\na b\na c\nb\n");
    let out = ctxcat(&[
        "mine",
        "--input",
        input.to_str().unwrap(),
        "--min-support",
        "0.5",
        "--bench",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["apriori", "msapriori", "rsapriori", "diffset"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{text}");
    }
    assert!(text.trim_end().ends_with("apriori/diffset: EQUAL"));
}

#[test]
fn failed_train_leaves_no_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write(corpus.join("alpha/d1.txt"), "Ember frost drift.");
    fs::create_dir_all(corpus.join("beta")).unwrap();
    let model = dir.path().join("m.ctx");
    let out = ctxcat(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("beta"), "message names the empty context");
    assert!(!model.exists(), "no partial model may appear");
}

#[test]
fn train_overwrites_an_existing_model_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let model = train_sample(dir.path());
    let before = fs::read(&model).unwrap();
    let out = ctxcat(&[
        "train",
        "--corpus",
        dir.path().join("corpus").to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--min-support",
        "0.2",
        "--rare-min-support",
        "0.1",
        "--mis-floor",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&model).unwrap(), before, "same corpus and flags, same bytes");
}

#[test]
fn custom_stopword_files_change_the_vocabulary() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    sample_corpus(&corpus);
    let stopwords = dir.path().join("stop.txt");
    write(&stopwords, "# local list\nthe and an a\narrow\n");
    let model = dir.path().join("m.ctx");
    let out = ctxcat(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--stopwords",
        stopwords.to_str().unwrap(),
        "--min-support",
        "0.2",
        "--rare-min-support",
        "0.1",
        "--mis-floor",
        "0.1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let saved = fs::read_to_string(&model).unwrap();
    assert!(!saved.contains("\tarrow\t"), "stopworded term must not be trained");
    assert!(saved.contains("\tbow\t"));
}

#[test]
fn invalid_flags_and_values_exit_one() {
    let out = ctxcat(&["mine", "--input", "x.txt", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1), "unknown flag");
    let out = ctxcat(&["mine", "--input", "x.txt", "--min-support", "abc"]);
    assert_eq!(out.status.code(), Some(1), "unparseable fraction");
    let out = ctxcat(&["mine", "--input", "x.txt", "--algorithm", "eclat"]);
    assert_eq!(out.status.code(), Some(1), "unknown algorithm");
    let out = ctxcat(&["classify", "--model", "m.ctx"]);
    assert_eq!(out.status.code(), Some(1), "classify requires inputs");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(ctxcat(&["--help"]).status.code(), Some(0));
    assert_eq!(ctxcat(&["--version"]).status.code(), Some(0));
    assert_eq!(ctxcat(&["train", "--help"]).status.code(), Some(0));
}

#[test]
fn out_of_range_mining_params_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    sample_corpus(&corpus);
    let out = ctxcat(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model",
        dir.path().join("m.ctx").to_str().unwrap(),
        "--min-support",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
