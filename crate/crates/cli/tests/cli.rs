use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use seqtag::corpus::{parse_slash, parse_vertical, split_known_unknown, write_vertical, TaggedCorpus};
use seqtag::eval::{evaluate, report_text};
use tempfile::TempDir;

fn assets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets")
}

fn seqtag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqtag")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn ok(args: &[&str]) -> String {
    let out = seqtag(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn toy() -> PathBuf {
    assets().join("toy.vert")
}

/// Every word always carries the same tag.
fn deterministic_corpus(dir: &Path) -> PathBuf {
    let names = ["N", "V", "ADJ", "ADV"];
    let mut text = String::new();
    for s in 0..40 {
        for i in 0..(3 + s % 5) {
            let w = (s * 7 + i * 3) % 23;
            text.push_str(&format!("w{w}\t{}\n", names[w % 4]));
        }
        text.push('\n');
    }
    let path = dir.join("det.vert");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&seqtag(&[])), 1);
    assert_eq!(code(&seqtag(&["train", "--bogus"])), 1);
    assert_eq!(code(&seqtag(&["train", "--tagger", "hmm"])), 1);
    assert_eq!(code(&seqtag(&["train", "--out", "x.model"])), 1);
    assert_eq!(code(&seqtag(&["crossval", "--in", s(&toy()), "--k", "1", "--out", "unused"])), 1);
    assert_eq!(code(&seqtag(&["crossval", "--in", s(&toy()), "--jobs", "0", "--out", "unused"])), 1);
    assert_eq!(code(&seqtag(&["gridsearch", "--in", s(&toy()), "--tagger", "tnt", "--out", "unused"])), 1);
    assert_eq!(code(&seqtag(&["--version"])), 0);
}

#[test]
fn data_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&seqtag(&["train", "--in", s(&dir.path().join("missing.vert")), "--out", "m"])), 2);
    let bad = dir.path().join("bad.vert");
    fs::write(&bad, "word\tN\nno-tag-here\n").unwrap();
    let out = seqtag(&["train", "--in", s(&bad), "--out", s(&dir.path().join("m"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let model = dir.path().join("future.model");
    fs::write(&model, "seqtag-model 99\nkind tnt\n").unwrap();
    assert_eq!(code(&seqtag(&["tag", "--model", s(&model), "--in", s(&toy())])), 2);
    let tagset = dir.path().join("tiny.tagset");
    fs::write(&tagset, "N\nV\n").unwrap();
    let out = seqtag(&["stats", "--in", s(&toy()), "--tagset", s(&tagset)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn numeric_failure_exits_3() {
    let dir = TempDir::new().unwrap();
    let out = seqtag(&["train", "--in", s(&toy()), "--c2", "1e308", "--out", s(&dir.path().join("m"))]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn every_tagger_trains_and_reproduces_deterministic_corpus() {
    let dir = TempDir::new().unwrap();
    let corpus = deterministic_corpus(dir.path());
    let original = fs::read(&corpus).unwrap();
    for tagger in ["crf", "tnt", "brill"] {
        let model = dir.path().join(format!("{tagger}.model"));
        let summary = ok(&["train", "--tagger", tagger, "--in", s(&corpus), "--out", s(&model)]);
        assert!(summary.contains("wall_time_s="));
        assert!(dir.path().join(format!("{tagger}.model.manifest")).exists());
        let tagged = dir.path().join(format!("{tagger}.out.vert"));
        ok(&["tag", "--model", s(&model), "--in", s(&corpus), "--out", s(&tagged)]);
        assert_eq!(fs::read(&tagged).unwrap(), original);
    }
    assert_eq!(fs::read(&corpus).unwrap(), original);
}

#[test]
fn retraining_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.crf"), dir.path().join("b.crf"));
    ok(&["train", "--in", s(&toy()), "--max-iter", "40", "--out", s(&a)]);
    ok(&["train", "--in", s(&toy()), "--max-iter", "40", "--out", s(&b)]);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn raw_text_is_tokenized_and_tagged_as_slash_lines() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("tnt.model");
    ok(&["train", "--tagger", "tnt", "--in", s(&toy()), "--out", s(&model)]);
    let raw = dir.path().join("input.txt");
    fs::write(&raw, "ine zare hede። konjo lij meta ?\n").unwrap();
    let text = ok(&["tag", "--model", s(&model), "--in", s(&raw)]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    let parsed = parse_slash(&text).unwrap();
    assert_eq!(parsed.sentences()[0].tokens().len(), 4);
    assert!(lines[0].starts_with("ine/PRON zare/ADV"));
    assert!(lines[0].split(' ').last().unwrap().starts_with("።/"), "{text}");
}

#[test]
fn tag_then_eval_matches_in_process_evaluation() {
    let dir = TempDir::new().unwrap();
    let full = parse_vertical(&fs::read_to_string(toy()).unwrap()).unwrap();
    let train_set = full.subset(&(0..150).collect::<Vec<_>>()).unwrap();
    let test_set = full.subset(&(150..200).collect::<Vec<_>>()).unwrap();
    let (train_path, test_path) = (dir.path().join("train.vert"), dir.path().join("test.vert"));
    fs::write(&train_path, write_vertical(&train_set)).unwrap();
    fs::write(&test_path, write_vertical(&test_set)).unwrap();

    let model = dir.path().join("m.brill");
    ok(&["train", "--tagger", "brill", "--in", s(&train_path), "--out", s(&model)]);
    let pred = dir.path().join("pred.vert");
    ok(&["tag", "--model", s(&model), "--in", s(&test_path), "--out", s(&pred)]);
    let report_dir = dir.path().join("report");
    let headline = ok(&[
        "eval",
        "--in",
        s(&test_path),
        "--pred",
        s(&pred),
        "--train",
        s(&train_path),
        "--out",
        s(&report_dir),
    ]);

    let (m, _) = seqtag::tagger::train(&train_set, &seqtag::tagger::TaggerSettings::new(seqtag::tagger::TaggerKind::Brill)).unwrap();
    let gold = TaggedCorpus::new(test_set.sentences().to_vec(), test_set.inventory().clone().with_name("test")).unwrap();
    let predicted = m.tag_corpus(&gold).unwrap();
    let known = split_known_unknown(&train_set, &gold).known;
    let report = evaluate(&gold, &predicted, &known).unwrap();
    assert_eq!(fs::read_to_string(report_dir.join("metrics.txt")).unwrap(), report_text(&report));
    assert!(headline.contains(&seqtag::eval::percent(report.overall_accuracy())));
    for f in ["prf.csv", "confusion.csv", "manifest.txt"] {
        assert!(report_dir.join(f).exists(), "{f}");
    }
}

#[test]
fn eval_rejects_mismatched_tokens() {
    let dir = TempDir::new().unwrap();
    let gold = dir.path().join("g.vert");
    let pred = dir.path().join("p.vert");
    fs::write(&gold, "a\tN\nb\tV\n").unwrap();
    fs::write(&pred, "a\tN\nc\tV\n").unwrap();
    assert_eq!(code(&seqtag(&["eval", "--in", s(&gold), "--pred", s(&pred)])), 2);
}

#[test]
fn manifest_reruns_are_identical() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    ok(&["crossval", "--tagger", "tnt", "--in", s(&toy()), "--k", "5", "--seed", "9", "--out", s(&first)]);
    let manifest = fs::read_to_string(first.join("manifest.txt")).unwrap();
    assert!(manifest.starts_with("# seqtag "));
    assert!(manifest.contains("seed=9\n") && manifest.contains("k=5\n") && manifest.contains("tagger=tnt\n"));
    let second = dir.path().join("second");
    ok(&["crossval", "--config", s(&first.join("manifest.txt")), "--out", s(&second)]);
    for f in ["statistics.csv", "accuracy.csv", "fold_accuracy.csv", "prf.csv", "confusion.csv", "metrics.txt"] {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, format!("tagger=tnt\nin={}\nk=4\n", toy().display())).unwrap();
    let out = dir.path().join("cv");
    ok(&["crossval", "--config", s(&cfg), "--k", "3", "--out", s(&out)]);
    let metrics = fs::read_to_string(out.join("metrics.txt")).unwrap();
    assert!(metrics.contains("tagger=tnt\n") && metrics.contains("k=3\n"), "{metrics}");
    fs::write(&cfg, "colour=blue\n").unwrap();
    assert_eq!(code(&seqtag(&["crossval", "--config", s(&cfg), "--out", s(&out)])), 1);
}

#[test]
fn remap_adds_plural_tags() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("extended.vert");
    ok(&[
        "remap",
        "--in",
        s(&toy()),
        "--rules",
        s(&assets().join("remap-plural.rules")),
        "--tagset",
        s(&assets().join("tagsets/ELRC-Extended.tagset")),
        "--out",
        s(&out),
    ]);
    let remapped = parse_vertical(&fs::read_to_string(&out).unwrap()).unwrap();
    let mut plural = 0;
    for s in remapped.sentences() {
        for (w, t) in s.pairs() {
            if w.as_str().ends_with("och") && !w.as_str().starts_with("be") && !w.as_str().starts_with("le") {
                if t.as_str() == "NS" {
                    plural += 1;
                }
            }
            assert_ne!(t.as_str() == "N" && w.as_str().ends_with("och"), true, "{w}");
        }
    }
    assert!(plural > 0);
    let stats = ok(&["stats", "--in", s(&out)]);
    assert!(stats.lines().any(|l| l.starts_with("NS,")), "{stats}");
}

#[test]
fn tokenize_writes_one_sentence_per_line() {
    let dir = TempDir::new().unwrap();
    let raw = dir.path().join("raw.txt");
    fs::write(&raw, "abebe beso bela። kebede wuha tetta፡፡\n").unwrap();
    let text = ok(&["tokenize", "--in", s(&raw)]);
    assert_eq!(text.lines().count(), 2, "{text}");
}

#[test]
fn gridsearch_writes_one_row_per_pair() {
    let dir = TempDir::new().unwrap();
    let corpus = deterministic_corpus(dir.path());
    let out = dir.path().join("grid");
    ok(&[
        "gridsearch",
        "--in",
        s(&corpus),
        "--k",
        "3",
        "--max-iter",
        "20",
        "--grid-c1",
        "0,0.064",
        "--grid-c2",
        "0.002,0.016",
        "--out",
        s(&out),
    ]);
    let grid = fs::read_to_string(out.join("grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 5, "{grid}");
    assert_eq!(grid.lines().filter(|l| l.ends_with(",true")).count(), 1);
    let best = fs::read_to_string(out.join("best.txt")).unwrap();
    assert!(best.starts_with("c1="));
    assert!(out.join("statistics.csv").exists() && out.join("manifest.txt").exists());
}
