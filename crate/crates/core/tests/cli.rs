use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
        .display()
        .to_string()
}

fn dualent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualent"))
        .args(args)
        .env("DUALENT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn entropy_text_and_json() {
    let text = dualent(&["entropy", &spec("cat_map.json")]);
    assert_eq!(text.status.code(), Some(0));
    let stdout = String::from_utf8(text.stdout).unwrap();
    assert!(stdout.contains("0.9624236501"), "{stdout}");
    assert!(stdout.contains("t^2 - 3t + 1"));

    let out = dualent(&["entropy", &spec("d_infinity.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 0.0);
}

#[test]
fn peters_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.csv");
    let out = dualent(&[
        "peters",
        &spec("cat_map.json"),
        "--n",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let sizes: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(sizes, ["4", "12", "33", "88"]);
}

#[test]
fn rank_on_crystal_document() {
    let out = dualent(&["rank", &spec("nonsplit_z.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["rank"], 5);
    assert_eq!(report["support"].as_array().unwrap().len(), 5);
}

#[test]
fn invalid_documents_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"group": {"kind": "free_abelian", "rank": 2}, "auto": {"lattice": [[2, 0], [0, 1]]}}"#,
    )
    .unwrap();
    let out = dualent(&["entropy", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("auto.lattice"));

    let missing = dualent(&["entropy", "/nonexistent/spec.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let usage = dualent(&["entropy"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn verify_spectral_suite() {
    let out = dualent(&["verify", "--suite", "spectral", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let laws = report["reports"].as_array().unwrap();
    assert_eq!(laws.len(), 3);
    assert!(laws.iter().all(|l| l["instances"] == 100));
}
