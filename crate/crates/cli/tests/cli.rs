use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn cml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cml")).args(args).env_remove("CML_MAX_STATES").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn example() -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/worked_example.json");
    p.to_str().unwrap().to_string()
}

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn check_reports_verdict_through_exit_status() {
    let m = example();
    let yes = cml(&["check", "-m", &m, "-f", "[Y:=1] Pr(Z=3) >= 1/2"]);
    assert_eq!(stdout(&yes).trim(), "true");
    assert_eq!(yes.status.code(), Some(0));
    let no = cml(&["check", "-m", &m, "-f", "Pr(Z=3) >= 1/2"]);
    assert_eq!(stdout(&no).trim(), "false");
    assert_eq!(no.status.code(), Some(1));
    let json = cml(&["--json", "check", "-m", &m, "-f", "Pr(Z=3) == 1/3"]);
    assert_eq!(stdout(&json).trim(), r#"{"verdict":true}"#);
}

#[test]
fn input_errors_exit_with_two() {
    let m = example();
    assert_eq!(cml(&["check", "-m", &m, "-f", "Pr(Q=1) >= 1"]).status.code(), Some(2));
    assert_eq!(cml(&["check", "-m", "/nonexistent.json", "-f", "X=0"]).status.code(), Some(2));
    assert_eq!(cml(&["discriminant", "--delta", "1"]).status.code(), Some(2));
    assert_eq!(cml(&["check", "-m", &m, "-f", "Pr(Pr(X=1)>=1)>=1"]).status.code(), Some(2));
}

#[test]
fn state_guard_exits_with_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_cml"))
        .args(["extract", "-f", "Pr(X=1) >= Pr(Y=1)"])
        .env("CML_MAX_STATES", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn discriminant_values() {
    assert_eq!(stdout(&cml(&["discriminant", "--delta", "1/2"])).trim(), "-1");
    assert_eq!(stdout(&cml(&["discriminant", "--delta", "0.25"])).trim(), "-1/2");
}

#[test]
fn equiv_passes_and_finds_counterexamples() {
    let pass = cml(&["equiv", "-f1", "A=1 => (B=1 => Pr(C=1)>=1/2)", "-f2", "(A=1 and B=1) => Pr(C=1)>=1/2"]);
    assert_eq!(stdout(&pass).trim(), "pass");
    let fail = cml(&["--json", "equiv", "--f1", "Pr(X=1) >= 1/2", "--f2", "X=1", "--mode", "no-laws", "--max-size", "2"]);
    assert_eq!(fail.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&fail).trim()).unwrap();
    assert_eq!(v["result"], "counterexample");
    assert_eq!(v["model"]["rows"].as_array().unwrap().len(), 2);
    let cf = cml(&["equiv", "--f1", "[X:=1] Y=1", "--f2", "[X:=1] Y=1", "--mode", "no-laws"]);
    assert_eq!(cf.status.code(), Some(2));
}

#[test]
fn rewrite_passes() {
    let out = cml(&["rewrite", "--pass", "supset-nf", "-f", "A=1 => B=0"]);
    assert_eq!(stdout(&out).trim(), "A=1 => Pr(B=0) >= 1");
    let out = cml(&["rewrite", "--pass", "push-box", "-f", "[X:=1] Pr(Y=1) >= 1/2"]);
    assert_eq!(stdout(&out).trim(), "Pr([X:=1] Y=1) >= 1/2");
    assert_eq!(cml(&["rewrite", "--pass", "relativize", "-f", "X=1"]).status.code(), Some(2));
    let rel = cml(&["--json", "rewrite", "--pass", "relativize", "--laws", &example(), "-f", "[Y:=1] Pr(Z=3) >= 1/2"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&rel).trim()).unwrap();
    assert_eq!(v["fragment"], "P-");
}

#[test]
fn extract_then_synth_round_trip() {
    let sig = r#"{"order":["S"],"ranges":{"S":[1,2,3]}}"#;
    let out = cml(&["--json", "extract", "-f", "(S=1 or S=2) => Pr(S=2) <= 1/3", "--sig", sig]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["class"], "SIGNED_BINARY");
    let file = temp_json(&v["set"].to_string());
    let path = file.path().to_str().unwrap();
    let f = cml(&["synth", "-i", path, "--target", "signed-binary", "--sig", sig]);
    assert_eq!(f.status.code(), Some(0));
    let formula = stdout(&f).trim().to_string();
    let again = cml(&["--json", "extract", "-f", &formula, "--sig", sig]);
    let w: serde_json::Value = serde_json::from_str(stdout(&again).trim()).unwrap();
    assert_eq!(w["class"], "SIGNED_BINARY");
    assert_eq!(cml(&["synth", "-i", path, "--target", "monic"]).status.code(), Some(2));
}

#[test]
fn synth_names_states_by_default() {
    let file = temp_json(r#"{"n":2,"systems":[{"ineqs":[{"coeffs":["1","0"],"cmp":">=","b":"1/2"}]}]}"#);
    let out = cml(&["synth", "-i", file.path().to_str().unwrap(), "--target", "monic"]);
    assert_eq!(stdout(&out).trim(), "Pr(S=1) >= 1/2");
}

#[test]
fn classify_labels() {
    assert_eq!(stdout(&cml(&["classify", "-f", "Pr(X=1) >= Pr(Y=1)"])).trim(), "P");
    assert_eq!(stdout(&cml(&["classify", "-f", "Pr(X=1 | Y=1) >= Pr(X=1 | Y=0)"])).trim(), "EXTENDED");
    assert_eq!(stdout(&cml(&["classify", "-f", "Pr(X=1) >= 1/2"])).trim(), "P-");
}

#[test]
fn dependence_macro() {
    let out = cml(&["atoms", "expand", "--kind", "dep", "--vars", "X;Y"]);
    assert_eq!(stdout(&out).trim(), "((X=0 => Y=0) gor (X=0 => Y=1)) and ((X=1 => Y=0) gor (X=1 => Y=1))");
    assert_eq!(cml(&["atoms", "expand", "--kind", "nope", "--vars", "X;Y"]).status.code(), Some(2));
}

#[test]
fn enumerate_streams_models() {
    let out = cml(&["enumerate", "--sig", r#"{"order":["X"],"ranges":{"X":[0,1]}}"#, "--max-size", "2", "--mode", "no-laws"]);
    let lines: Vec<_> = stdout(&out).lines().map(String::from).collect();
    // empty, {0}, {1}, {0,0}, {0,1}, {1,1}
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn corpus_is_deterministic() {
    let a = cml(&["corpus", "--seed", "9", "--count", "5", "--kind", "PCO"]);
    let b = cml(&["corpus", "--seed", "9", "--count", "5", "--kind", "PCO"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 5);
}
