//! End-to-end smoke tests driving the compiled binary.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_stringpoly"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn resolve_small_index_word() {
    let (stdout, _, code) = run(&["resolve", "--word", "1,3,2,1,3,2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["witness"]["delta"], "DDD");
    assert_eq!(v["witness"]["k"], 2);
    assert_eq!(v["violation"], serde_json::Value::Null);
}

#[test]
fn resolve_negative_word() {
    let word = "4,3,4,2,3,4,1,2,3,4,5,4,6,5,4,3,2,1,4,3,2";
    let (stdout, _, code) = run(&["resolve", "--word", word]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["smooth"], true);
    assert_eq!(v["rays_match"], true);
    assert_eq!(v["bpf"], false);
    assert_eq!(v["verified"], false);
    assert_eq!(v["violation"]["collection"][0], "v19");
    assert_eq!(v["violation"]["collection"][1], "u2");
}

#[test]
fn paths_json_fields() {
    let (stdout, _, code) = run(&["paths", "--word", "1,3,2,1,3,2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["count"], 7);
    let first = &v["paths"][0];
    for key in ["path", "w_m", "w_t", "max_peak", "is_D_new", "is_A_new", "is_canonical"] {
        assert!(!first[key].is_null(), "missing {key}");
    }
}

#[test]
fn table_row_counts() {
    let (stdout, _, code) = run(&["table", "--n", "4", "--mod-involution"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 31);
    let (stdout, _, _) = run(&["table", "--n", "4"]);
    assert_eq!(stdout.lines().count(), 62);
}

#[test]
fn potential_text() {
    let (stdout, _, code) = run(&["potential", "--text", "--word", "1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "y1 + q1/y1");
}

#[test]
fn polytope_tag_format() {
    let (stdout, _, code) = run(&["polytope", "--word", "1,2,1", "--lambda", "2,2", "--coords", "t"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"path:l1->l3->l2\""));
    assert!(stdout.contains("\"node:3\""));
}

#[test]
fn validation_errors_exit_one() {
    let (_, stderr, code) = run(&["resolve", "--word", "1,1,2"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("\"error\""));
    let (_, stderr, code) = run(&["resolve", "--word", "2,1,2", "--lambda", "1,0"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("regular"));
    let (_, stderr, code) = run(&["classes", "--n", "6"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("cap"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("stringpoly-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("small.json");
    let (_, _, code) = run(&["small", "--word", "1,2,1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["small"], true);
    std::fs::remove_file(&path).ok();
}
