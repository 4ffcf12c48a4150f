use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn freequot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freequot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn spec_path(name: &str) -> String {
    specs_dir().join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn write_spec(dir: &Path, matrices: &str, permutation: &str) -> String {
    let path = dir.join("spec.json");
    let doc = format!(r#"{{"schema":1,"name":"t","generators":[{{"matrices":{matrices},"permutation":{permutation}}}]}}"#);
    fs::write(&path, doc).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_subset_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let md = dir.path().join("report.md");
    let out = freequot(&[
        "verify",
        "--only",
        "lefschetz",
        "hodge",
        "--json",
        json.to_str().unwrap(),
        "--markdown",
        md.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let report: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let ids: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["hodge-table", "lefschetz-all-elements", "lefschetz-z2-terms"]);
    assert_eq!(report["summary"]["passed"], 3);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert!(fs::read_to_string(&md).unwrap().contains("`lefschetz-z2-terms`"));
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<String> = (0..2)
        .map(|k| {
            let path = dir.path().join(format!("run{k}.json"));
            let out = freequot(&["verify", "--only", "intersection,surface", "--json", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0));
            fs::read_to_string(path).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn full_suite_reports_failures_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("all.json");
    let out = freequot(&["verify", "--json", json.to_str().unwrap()]);
    let report: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let failing: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] != "pass")
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    let expected = if failing.is_empty() { 0 } else { 1 };
    assert_eq!(out.status.code(), Some(expected));
    for c in report["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail") {
        assert!(c["counterexample"].is_string(), "{c}");
    }
}

#[test]
fn unwritable_report_path_is_an_error() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let target = file.path().join("report.json");
    let out = freequot(&["verify", "--only", "surface", "--json", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("writing"));
}

#[test]
fn unknown_check_and_missing_source_are_usage_errors() {
    assert_eq!(freequot(&["verify", "--only", "nonsense"]).status.code(), Some(2));
    assert_eq!(freequot(&["group", "identify"]).status.code(), Some(2));
    assert_eq!(freequot(&["group", "identify", "--builtin", "z3"]).status.code(), Some(2));
}

#[test]
fn verify_lists_ids() {
    let out = freequot(&["verify", "--list"]);
    assert!(stdout(&out).lines().any(|l| l == "hodge-table"));
}

#[test]
fn group_commands() {
    let out = freequot(&["group", "identify", "--spec", &spec_path("z4sz4")]);
    assert_eq!(stdout(&out).trim(), "Z4 : Z4 (order 16)");
    let out = freequot(&["group", "closure", "--builtin", "q8xz2"]);
    assert!(stdout(&out).starts_with("order 16\n"));
    let out = freequot(&["group", "fixed-points", "--builtin", "z4sz4"]);
    assert!(stdout(&out).ends_with("48 components\n"));
}

#[test]
fn malformed_spec_files() {
    let dir = tempfile::tempdir().unwrap();
    let ids = r#"[["1","0","0","1"],["1","0","0","1"],["1","0","0","1"],["1","0","0","1"]]"#;
    let path = write_spec(dir.path(), ids, "[[1,2],[2,3]]");
    let out = freequot(&["group", "closure", "--spec", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("generator 0"), "{err}");

    let path = write_spec(dir.path(), r#"[["1","0"]]"#, "[]");
    let out = freequot(&["group", "closure", "--spec", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generators[0].matrices"));
}

#[test]
fn sections_commands() {
    let out = freequot(&["sections", "eigenspace", "--builtin", "z4sz4", "--like", "F1"]);
    assert!(stdout(&out).contains("dimension 1\n"), "{}", stdout(&out));
    let out = freequot(&[
        "sections",
        "eigenspace",
        "--builtin",
        "z4sz4",
        "--degree",
        "2,2,2,2",
        "--like",
        "Q0",
    ]);
    assert!(stdout(&out).contains("dimension 6\n"));

    let out = freequot(&["sections", "trace-table", "--builtin", "z4sz4"]);
    let text = stdout(&out);
    let traces: Vec<&str> = text.lines().map(|l| l.rsplit(' ').next().unwrap()).collect();
    assert_eq!(traces.len(), 16);
    assert_eq!(traces[0], "16");
    assert!(traces[1..].iter().all(|t| *t == "0"));

    let dir = tempfile::tempdir().unwrap();
    let diag = r#"[["1","0","0","z^4"],["1","0","0","z^4"],["1","0","0","-z^4"],["1","0","0","z^4"]]"#;
    let path = write_spec(dir.path(), diag, "[]");
    let out = freequot(&["sections", "obstruction", "--spec", &path]);
    assert!(stdout(&out).contains("no full-support eigensection; witness"), "{}", stdout(&out));
}

#[test]
fn lefschetz_hodge_chow_surface() {
    let out = freequot(&["lefschetz", "--builtin", "z4sz4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.ends_with("sum 1")).count(), 15);

    let out = freequot(&["hodge", "--builtin", "q8xz2"]);
    assert!(stdout(&out).contains("h11 = 1  h12 = 5  height = 6"));

    assert_eq!(stdout(&freequot(&["chow", "degree"])).trim(), "24");
    let out = freequot(&["chow", "degree", "--divisor", "2,2,2,2", "1,1,1,1", "1,1,1,1", "1,1,1,1"]);
    assert_eq!(stdout(&out).trim(), "48");
    assert!(stdout(&freequot(&["chow", "euler"])).contains("euler -128"));

    let out = freequot(&["surface", "--order", "16"]);
    assert!(stdout(&out).contains("K_S^2 = 3  p_g(S) = 0  chi(O_S) = 1"));
    assert!(stdout(&out).contains("expected moduli dimension 4"));
    assert_eq!(freequot(&["surface", "--order", "7"]).status.code(), Some(2));
}
