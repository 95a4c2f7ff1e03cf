//! End-to-end checks of the `polyassembly` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_polyassembly"));
    c.arg("--quiet").env_remove("POLYASSEMBLY_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a stored file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "{name} differs from the stored output");
}

#[test]
fn enumerate_outputs_match_golden() {
    let pairs = ok(&["enumerate", "--kind", "pair", "--format", "csv"]);
    assert_eq!(pairs.lines().count(), 107);
    check_golden("enumerate_pair.csv", &pairs);
    let singles = ok(&["enumerate", "--kind", "single"]);
    let parsed: Vec<[u8; 4]> = serde_json::from_str(&singles).unwrap();
    assert_eq!(parsed.len(), 13);
    check_golden("enumerate_single.json", &singles);
}

#[test]
fn predict_matches_golden() {
    let text = ok(&["predict", "--tiles", "1,2,0,0;1,2,1,0", "--mode", "asym"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["predicted_fc"].as_f64().unwrap() - 0.52355).abs() < 1e-4);
    check_golden("predict_asym.json", &text);
}

#[test]
fn run_writes_reproducible_structure() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    let svg = dir.path().join("s.svg");
    let trace = dir.path().join("a.csv");
    let report = ok(&[
        "run",
        "--tiles",
        "1,0,0,0;1,1,1,1",
        "--f",
        "0.3",
        "--nmax",
        "200",
        "--out",
        s.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--render",
        svg.to_str().unwrap(),
    ]);
    check_golden("run_report.json", &report);
    check_golden("run_structure.json", &fs::read_to_string(&s).unwrap());
    assert!(fs::read_to_string(&trace).unwrap().starts_with("N,a\n"));
    assert_eq!(fs::read_to_string(&svg).unwrap().matches("<rect x=").count(), 200);

    let again = ok(&["render", "--input", s.to_str().unwrap()]);
    assert_eq!(again, fs::read_to_string(&svg).unwrap());
}

#[test]
fn bad_input_fails_with_message() {
    let cases: &[&[&str]] = &[
        &["run", "--tiles", "1,0,0,0;1,1,1,1", "--f", "1.3"],
        &["run", "--tiles", "1,0,0"],
        &["run", "--tiles", "1,0,0,0", "--mode", "sideways"],
        &["density", "--tiles", "1,0,0,0;1,1,1,1", "--f-grid", "0:1"],
        &["render", "--input", "/nonexistent/s.json"],
        &["classify", "--tiles", "1,0,0,0;1,1,1,1;1,2,0,0"],
    ];
    for args in cases {
        let out = run(args);
        assert!(!out.status.success(), "{args:?} should fail");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("error"), "{args:?}: {err}");
    }
}

#[test]
fn every_command_has_help() {
    for cmd in ["enumerate", "run", "density", "fc", "fractal", "predict", "classify", "catalogue", "render"] {
        let text = ok(&[cmd, "--help"]);
        assert!(text.contains("Usage"), "{cmd}");
    }
}

#[test]
fn manifest_records_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    ok(&["--manifest", m.to_str().unwrap(), "--master-seed", "11", "predict", "--tiles", "1,0,0,0;1,1,1,1"]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(v["command"], "predict");
    assert_eq!(v["master_seed"], 11);
}

const SMALL: &[&str] = &["--reps", "4", "--nmax", "300", "--grid-step", "0.25", "--limit", "4"];

fn catalogue(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["catalogue", "--out", out.to_str().unwrap()];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn catalogue_resumes_from_partial_log() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    assert!(catalogue(&a, &[]).status.success());
    let full = fs::read_to_string(&a).unwrap();
    assert_eq!(full.lines().count(), 4);
    assert!(!dir.path().join("a.jsonl.partial.jsonl").exists());

    // An interrupted run: two records logged, one of them marked so that
    // reuse is visible in the final file.
    let b = dir.path().join("b.jsonl");
    let lines: Vec<&str> = full.lines().collect();
    let mut first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    first["inconclusive"] = serde_json::json!(["from the partial log"]);
    let partial = format!("{}\n{}\n", serde_json::to_string(&first).unwrap(), lines[1]);
    fs::write(dir.path().join("b.jsonl.partial.jsonl"), partial).unwrap();
    fs::copy(dir.path().join("a.jsonl.manifest.json"), dir.path().join("b.jsonl.manifest.json")).unwrap();
    assert!(catalogue(&b, &[]).status.success());
    let resumed = fs::read_to_string(&b).unwrap();
    let got: Vec<&str> = resumed.lines().collect();
    assert!(got[0].contains("from the partial log"));
    assert_eq!(got[1..], lines[1..]);
}

#[test]
fn catalogue_refuses_mismatched_partial_log() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    assert!(catalogue(&a, &[]).status.success());
    fs::write(dir.path().join("a.jsonl.partial.jsonl"), "").unwrap();
    let out = catalogue(&a, &["--master-seed", "8"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--fresh"));
    assert!(catalogue(&a, &["--master-seed", "8", "--fresh"]).status.success());
}
