use std::process::Command;

fn crformal(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_crformal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn demo() -> String {
    format!("{}/tests/data/demo.crf", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn run_succeeds() {
    let out = crformal(&["run", &demo()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("round trip true"));
}

#[test]
fn json_to_stdout_is_deterministic() {
    let a = crformal(&["--json", "-", "run", &demo()]);
    let b = crformal(&["--json", "-", "run", &demo()]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["degree"], 10);
}

#[test]
fn inline_expression() {
    let out = crformal(&["classify", "-e", "M = exp_model(2)\nclassify M"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("infinite type m = 1"));
}

#[test]
fn parse_error_exits_one_with_position() {
    let out = crformal(&["run", "-e", "M = blowup(1,"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:"));
}

#[test]
fn usage_error_exits_two() {
    let out = crformal(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn grammar_is_printed() {
    let out = crformal(&["print-grammar"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("check-map"));
}
