use std::process::{Command, Output};

fn algvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algvar")).args(args).output().expect("algvar runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn components_of_zinbiel_variety() {
    let o = algvar(&["components", "--variety", "Z"]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert!(out.contains("rigid: {Z1, Z3, Z5}"), "{out}");
    assert!(out.contains("Z5: C4, Z4, Z5"), "{out}");
}

#[test]
fn single_witness_json() {
    let o = algvar(&["--report", "json", "verify", "degenerations", "--only", "Z5->Z4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witnesses"][0]["id"], "Z5->Z4");
    assert_eq!(v["witnesses"][0]["verdict"], "verified");
}

#[test]
fn unknown_witness_is_an_error() {
    let o = algvar(&["verify", "degenerations", "--only", "Z5->L1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no witness"));
}

#[test]
fn table1_reports_the_printed_mismatches() {
    let o = algvar(&["verify", "table1"]);
    let out = stdout(&o);
    assert!(!o.status.success());
    assert!(out.contains("N10          FAILED       der [generic: 7 (expected 8)]"), "{out}");
    assert!(out.contains("33 verified, 2 failed"), "{out}");
}

#[test]
fn check_user_file() {
    let o = algvar(&["check", &fixture("contraction.alg")]);
    let out = stdout(&o);
    assert!(o.status.success(), "{out}");
    assert!(out.contains("summary: 3 verified, 0 failed"), "{out}");
}

#[test]
fn check_reports_wrong_der() {
    let o = algvar(&["check", &fixture("wrong_der.alg")]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("(expected 3)"));
}

#[test]
fn graph_writes_dot() {
    let path = std::env::temp_dir().join(format!("algvar-{}.dot", std::process::id()));
    let o = algvar(&["graph", "--dot", path.to_str().unwrap(), "--variety", "L"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let dot = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("label=\"L11\""));
}
