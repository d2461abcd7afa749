use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(workspace: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_folkgraph"))
        .arg("--manifest")
        .arg(fixtures().join("manifest.toml"))
        .args(args)
        .env("FOLKGRAPH_WORKSPACE", workspace)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn detect_before_build_is_an_input_error() {
    let ws = tempfile::tempdir().unwrap();
    let o = run(ws.path(), &["detect", "--input", fixtures().join("corpus/macron.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("build-kb"));
}

#[test]
fn missing_manifest_is_an_input_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_folkgraph")).args(["--manifest", "/nonexistent/m.toml", "build-kb"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn expand_needs_exactly_one_target() {
    let ws = tempfile::tempdir().unwrap();
    assert_eq!(run(ws.path(), &["expand"]).status.code(), Some(2));
    assert_eq!(run(ws.path(), &["expand", "--all", "--value", "folk:Risk"]).status.code(), Some(2));
}

#[test]
fn end_to_end_with_workspace_from_environment() {
    let ws = tempfile::tempdir().unwrap();
    let o = run(ws.path(), &["build-kb"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("FOLK=311"));
    let o = run(ws.path(), &["expand", "--value", "folk:Rigor"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(ws.path().join("triggers/Rigor.nt").exists());
    let o = run(ws.path(), &["detect", "--input", fixtures().join("corpus/macron.txt").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sentences: 1"));

    // the macron run's ids are not corpus ids
    let summary = ws.path().join("detections/summary.jsonl");
    let o = run(ws.path(), &["eval", "--detections", summary.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(ws.path(), &["eval"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Annotator") && out.contains("stats-only"));
}

#[test]
fn unknown_plan_value_is_an_input_error() {
    let ws = tempfile::tempdir().unwrap();
    assert!(run(ws.path(), &["build-kb"]).status.success());
    assert_eq!(run(ws.path(), &["expand", "--value", "folk:Nonexistent"]).status.code(), Some(2));
}
