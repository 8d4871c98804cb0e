use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn nnrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnrank"))
        .args(args)
        .env_remove("NNF_LOG")
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

const H7_POLYGON: &str =
    r#"{"vertices": [["0","0"],["3","0"],["5","2"],["5","5"],["3","7"],["1","6"],["0","3"]]}"#;

/// Slack matrix of the polygon above.
const H7_SLACK: [[i64; 7]; 7] = [
    [0, 0, 2, 5, 7, 6, 3],
    [3, 0, 0, 3, 7, 8, 6],
    [5, 2, 0, 0, 2, 4, 5],
    [10, 7, 3, 0, 0, 3, 7],
    [11, 14, 12, 6, 0, 0, 5],
    [3, 12, 16, 13, 5, 0, 0],
    [0, 3, 5, 5, 3, 1, 0],
];

fn h7_slack(dir: &Path) -> String {
    let entries: Vec<Vec<String>> = H7_SLACK
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    let m = path(dir, "slack.json");
    fs::write(
        &m,
        json!({"rows": 7, "cols": 7, "entries": entries}).to_string(),
    )
    .unwrap();
    m
}

#[test]
fn factor_heptagon_slack() {
    let dir = tempfile::tempdir().unwrap();
    let m = h7_slack(dir.path());
    let cert = path(dir.path(), "cert.json");
    let out = nnrank(&["factor", "--input", &m, "--output", &cert]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let c: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["inner_dim"], 6);
    assert_eq!(c["bound"], 6);
    assert_eq!(c["trace"][0]["method"], "heptagon");
    assert!(c["report"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["passed"] == true));

    let out = nnrank(&["verify", "--input", &m, "--cert", &cert]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS reconstruction"));
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let m = h7_slack(dir.path());
    let cert = path(dir.path(), "cert.json");
    assert!(nnrank(&["factor", "--input", &m, "--output", &cert])
        .status
        .success());
    let mut c: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    c["left"]["entries"][0][0] = json!("-1");
    fs::write(&cert, c.to_string()).unwrap();
    let out = nnrank(&["verify", "--input", &m, "--cert", &cert]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL left nonnegative"), "{stdout}");
}

#[test]
fn extension_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let poly = path(dir.path(), "h7.json");
    fs::write(&poly, H7_POLYGON).unwrap();
    let ef = path(dir.path(), "ef.json");
    let out = nnrank(&["extend", "--input", &poly, "--output", &ef]);
    assert!(out.status.success());
    let text = fs::read_to_string(&ef).unwrap();
    assert!(nnrank(&["verify", "--input", &poly, "--cert", &ef])
        .status
        .success());

    let mut v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["k"], 6);
    v["lifts"]["entries"][0][2] = json!("-3");
    fs::write(&ef, v.to_string()).unwrap();
    let out = nnrank(&["verify", "--input", &poly, "--cert", &ef]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL vertex lifts: vertex 2"));
}

#[test]
fn csv_input_and_error_exits() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "m.csv");
    fs::write(&csv, "1,2,0\n1/2,1,0\n").unwrap();
    let cert = path(dir.path(), "cert.json");
    let out = nnrank(&["factor", "--input", &csv, "--output", &cert]);
    assert!(out.status.success());
    let c: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["inner_dim"], 1);
    assert_eq!(c["left"]["entries"][1][0], "1/2");

    fs::write(&csv, "1,-1\n").unwrap();
    let out = nnrank(&["factor", "--input", &csv, "--output", &cert]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotNonnegative");

    fs::write(&csv, "1,x\n").unwrap();
    assert_eq!(
        nnrank(&["factor", "--input", &csv, "--output", &cert])
            .status
            .code(),
        Some(2)
    );

    let poly = path(dir.path(), "line.json");
    fs::write(&poly, r#"{"vertices": [["0","0"],["1","1"],["2","2"]]}"#).unwrap();
    let out = nnrank(&["extend", "--input", &poly, "--output", &cert]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "CollinearVertices");
}

#[test]
fn selftest_is_deterministic() {
    let a = nnrank(&["selftest", "--iterations", "3", "--seed", "1"]);
    let b = nnrank(&["selftest", "--iterations", "3", "--seed", "1"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(
        text.ends_with("seed 1 iterations 3: 17 properties passed, 0 failed\n"),
        "{text}"
    );
}
