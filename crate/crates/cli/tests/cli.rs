use std::fs;
use std::path::Path;

use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["pima"];
    full.extend_from_slice(args);
    let code = pima_cli::run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .to_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

#[test]
fn identical_traces_align_with_zero_score() {
    let dir = TempDir::new().unwrap();
    let log = write(&dir, "log.txt", "a b c\na b c\na b c\n");
    let (code, out, err) = run(&["align", "--input", &log]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(field(&out, "pairs_score"), "0");
    assert_eq!(field(&out, "length"), "3");
}

#[test]
fn align_outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let log = write(&dir, "log.txt", "a b c d\na c d\nb c a d\na b d\nc d\n");
    let mut contents = Vec::new();
    for round in 0..2 {
        let tsv = path(&dir, &format!("a{round}.tsv"));
        let json = path(&dir, &format!("s{round}.json"));
        let html = path(&dir, &format!("h{round}.html"));
        let (code, _, err) = run(&[
            "align",
            "--input",
            &log,
            "--seed",
            "7",
            "--out",
            &tsv,
            "--stats",
            &json,
            "--html",
            &html,
            "--no-timings",
        ]);
        assert_eq!(code, 0, "{err}");
        contents.push([tsv, json, html].map(|p| fs::read(p).unwrap()));
    }
    assert_eq!(contents[0], contents[1]);
}

#[test]
fn aligned_tsv_scores_to_the_reported_value() {
    let dir = TempDir::new().unwrap();
    let log = write(&dir, "log.txt", "a b c\nb c\na c c\na b\n");
    let tsv = path(&dir, "a.tsv");
    let (_, aligned, _) = run(&["align", "--input", &log, "--out", &tsv]);
    let (code, scored, err) = run(&["score", "--input", &tsv]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        field(&aligned, "pairs_score"),
        field(&scored, "pairs_score")
    );
}

#[test]
fn guide_tree_start_never_ends_above_the_baseline() {
    let dir = TempDir::new().unwrap();
    let log = write(
        &dir,
        "log.txt",
        "a b c d\na c d\nb c a d\na b d\nc d\nd a b\n",
    );
    let (code, out, err) = run(&[
        "bench",
        "--input",
        &log,
        "--init",
        "guide-tree",
        "--seeds",
        "3",
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(field(&out, "failed_to_beat_pct"), "0.0");
}

#[test]
fn score_of_a_small_matrix() {
    let dir = TempDir::new().unwrap();
    let tsv = write(&dir, "m.tsv", "case_id\t1\t2\nx\ta\tb\ny\ta\t-\n");
    let (code, out, err) = run(&["score", "--input", &tsv]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(field(&out, "pairs_score"), "1");
    assert_eq!(field(&out, "doubled_score"), "2");
}

#[test]
fn score_accepts_an_all_gap_column() {
    let dir = TempDir::new().unwrap();
    let tsv = write(&dir, "m.tsv", "case_id\t1\t2\nx\ta\t-\ny\ta\t-\n");
    let (code, out, _) = run(&["score", "--input", &tsv]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "pairs_score"), "0");
}

#[test]
fn mixed_column_is_an_invariant_violation() {
    let dir = TempDir::new().unwrap();
    let tsv = write(&dir, "m.tsv", "case_id\t1\nx\ta\ny\tb\n");
    let (code, _, err) = run(&["score", "--input", &tsv]);
    assert_eq!(code, 4);
    assert!(err.contains("column 1"), "{err}");
}

#[test]
fn exit_codes_by_failure_kind() {
    let dir = TempDir::new().unwrap();
    let missing = path(&dir, "missing.txt");
    assert_eq!(run(&["align", "--input", &missing]).0, 1);

    let bad = write(&dir, "bad.txt", "a - b\n");
    assert_eq!(run(&["align", "--input", &bad]).0, 2);
    let empty = write(&dir, "empty.txt", "\n\n");
    assert_eq!(run(&["align", "--input", &empty]).0, 2);

    let ok = write(&dir, "ok.txt", "a b\nb\n");
    assert_eq!(
        run(&["align", "--input", &ok, "--freq-range", "0.9:0.1"]).0,
        3
    );
    assert_eq!(run(&["align", "--input", &ok, "--init", "nope"]).0, 3);
    assert_eq!(run(&["align", "--input", &ok, "--consensus", "2"]).0, 3);
    assert_eq!(run(&["frobnicate"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn gen_without_noise_repeats_the_backbone() {
    let dir = TempDir::new().unwrap();
    let out_path = path(&dir, "gen.txt");
    let (code, out, err) = run(&[
        "gen",
        "--traces",
        "5",
        "--types",
        "4",
        "--backbone",
        "6",
        "--insertion",
        "0",
        "--deletion",
        "0",
        "--swap",
        "0",
        "--out",
        &out_path,
    ]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(Path::new(&out_path)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| *l == lines[0]));
    assert!(out.contains("Num. of Traces"));
}

#[test]
fn gen_rejects_invalid_rates() {
    let dir = TempDir::new().unwrap();
    let out_path = path(&dir, "gen.txt");
    assert_eq!(run(&["gen", "--insertion", "1.5", "--out", &out_path]).0, 3);
}

#[test]
fn bench_reports_every_seed_and_scaling() {
    let dir = TempDir::new().unwrap();
    let json = path(&dir, "bench.json");
    let (code, out, err) = run(&[
        "bench",
        "--traces",
        "20",
        "--types",
        "6",
        "--backbone",
        "6",
        "--seeds",
        "4",
        "--scaling",
        "--repeats",
        "1",
        "--parallel",
        "--stats",
        &json,
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(field(&out, "final_delta_pct").contains('±'));
    assert!(out.contains("pass_ms"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["runs"].as_array().unwrap().len(), 4);
}

#[test]
fn bench_on_identical_traces_scores_zero() {
    let dir = TempDir::new().unwrap();
    let log = write(&dir, "log.txt", "a b\na b\na b\n");
    let (code, out, _) = run(&["bench", "--input", &log, "--seeds", "1"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "baseline_score"), "0");
    assert!(field(&out, "final_score").starts_with("0.000"));
}
