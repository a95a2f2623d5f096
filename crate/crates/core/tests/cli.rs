use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsl")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn census_matches_golden() {
    let table = fixture("knots.csv");
    let out = fsl(&["census", "--input", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("census_golden.json")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn census_filter_and_csv_output() {
    let table = fixture("knots.csv");
    let out = fsl(&["census", "--input", table.to_str().unwrap(), "--filter", "nonalternating-slice", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("KT"), "{text}");
    assert!(!text.contains("6_1"), "{text}");
}

#[test]
fn census_with_bad_lines_is_partial() {
    let mut file = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
    writeln!(file, "name,alexander,genus,slice_genus,is_slice,is_alternating,hfk_top").unwrap();
    writeln!(file, "3_1,-1;1,1,1,false,true,1:0").unwrap();
    writeln!(file, "broken,2;1,1,1,false,true,").unwrap();
    writeln!(file, "garbage").unwrap();
    let out = fsl(&["census", "--input", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["errors"].as_array().unwrap().len(), 2);
    assert_eq!(report["not_excluded"][0]["name"], "3_1");
}

#[test]
fn missing_input_is_an_input_error() {
    let out = fsl(&["census", "--input", "/nonexistent/table.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_by_name_from_table() {
    let table = fixture("knots.csv");
    let table = table.to_str().unwrap();
    let out = fsl(&["check", "--name", "KT", "--input", table, "--slope", "-7/2", "--orientation", "neg"]);
    assert_eq!(out.status.code(), Some(10));
    let out = fsl(&["check", "--name", "3_1", "--input", table, "--slope", "5", "--orientation", "pos"]);
    assert_eq!(out.status.code(), Some(0));
    let out = fsl(&["check", "--name", "nope", "--input", table, "--slope", "5", "--orientation", "pos"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cone_zero_surgery_and_dump() {
    let out = fsl(&["cone", "--alexander", "1;-1;1", "--genus", "2", "--slice-genus", "2", "--slope", "0", "--spinc", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["summary"]["euler_char_red"], -1, "{value}");
}

#[test]
fn usage_errors() {
    assert_eq!(fsl(&[]).status.code(), Some(2));
    assert_eq!(fsl(&["check", "--alexander", "1"]).status.code(), Some(2));
    assert_eq!(fsl(&["--help"]).status.code(), Some(0));
}
