use std::fs;
use std::process::{Command, Output};

fn qhsing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhsing"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn divisor_prints_psi_form_and_milnor_number() {
    let out = qhsing(&["divisor", "1,24,33,58:265"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "D = 251*Psi(265)+251*Psi(53)+251*Psi(5)+252*Psi(1) ; mu=66516"
    );
    assert!(text.contains("251*Lambda(265)+1*Lambda(1)"));
}

#[test]
fn divisor_json_is_a_record() {
    let out = qhsing(&["divisor", "1/3,1/3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ws"], "1,1:3");
    assert_eq!(v["mu"], 4);
}

#[test]
fn graph_reports_conditions() {
    let out = qhsing(&["graph", "30,20,6,4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "condition_I=false condition_II=false");
    assert!(text.contains("30 -> 6 (p=5)"));

    let dot = stdout(&qhsing(&["graph", "6,3,2,1", "--dot"]));
    assert!(dot.contains("digraph"));
    assert!(dot.contains("\"6\" -> \"3\""));
}

#[test]
fn family_cycle() {
    let out = qhsing(&["family", "cycle:2,3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "weights=2/5,1/5\nws=2,1:5\nD = 1*Lambda(5)+1*Lambda(1)\nmu=6\n"
    );
}

#[test]
fn malformed_input_names_the_token() {
    let out = qhsing(&["divisor", "1,x:5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("`x`"), "{}", stderr(&out));

    let out = qhsing(&["graph", "6,-2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("-2"));

    assert_eq!(qhsing(&["family", "spiral:1"]).status.code(), Some(1));
    assert_eq!(qhsing(&["nonsense"]).status.code(), Some(1));
    assert_eq!(qhsing(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_writes_records_and_honours_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("run.jsonl");
    let cfg = dir.path().join("scan.conf");
    fs::write(
        &cfg,
        format!("n = 2\nd_max = 40\nout = {}\n", out_path.display()),
    )
    .unwrap();

    let out = qhsing(&["scan", cfg.to_str().unwrap(), "--d-max", "12", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(&out_path).unwrap();
    let max_d = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["d"].as_u64().unwrap())
        .max()
        .unwrap();
    assert_eq!(max_d, 12);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["records"].as_u64().unwrap() as usize, text.lines().count());

    let gated = qhsing(&["scan", "--n", "4", "--d-max", "8"]);
    assert_eq!(gated.status.code(), Some(1));
    assert!(stderr(&gated).contains("allow_exhaustive_n4"));
}

#[test]
fn fixtures_pass() {
    let out = qhsing(&["fixtures"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}
