use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn noether(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noether")).args(args).output().expect("spawn noether")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn reduce_to(path: &Path, args: &[&str]) {
    let mut full = vec!["reduce"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = noether(&full);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

const C2: &str = r#"{"kind":"cyclic","n":2}"#;
const C3: &str = r#"{"kind":"cyclic","n":3}"#;

#[test]
fn group_descriptions() {
    let out = noether(&["group", C3]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("order 3, abelian"), "{}", stdout(&out));

    let out = noether(&["group", r#"{"kind":"dihedral","n":3}"#]);
    let text = stdout(&out);
    assert!(text.contains("order 6") && text.contains("nonabelian"), "{text}");

    let out = noether(&["group", &format!(r#"{{"kind":"wreath","h":{C2},"g":{C2}}}"#)]);
    assert!(stdout(&out).starts_with("order 8,"), "{}", stdout(&out));

    let path = scratch("klein.json");
    std::fs::write(&path, r#"{"kind":"abelian","factors":[2,2]}"#).unwrap();
    let out = noether(&["group", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("order 4, abelian"), "{}", stdout(&out));
}

#[test]
fn malformed_group_json_reports_position() {
    let out = noether(&["group", "{\"kind\":\"cyclic\",\n \"n\": }"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2, column 7"), "{}", stderr(&out));
}

#[test]
fn group_over_size_cap_is_a_resource_error() {
    let out = noether(&["group", r#"{"kind":"cyclic","n":50}"#, "--cap-size", "10"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn fischer_over_cyclotomic_field_succeeds_and_verifies() {
    let path = scratch("fischer3.json");
    reduce_to(&path, &["--theorem", "fischer", "--group", C3, "--field", "Q(zeta:3)"]);
    let out = noether(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("OK"));
}

#[test]
fn hypothesis_violations_exit_two_and_name_the_hypothesis() {
    let out = noether(&["reduce", "--theorem", "1.6", "--group", r#"{"kind":"cyclic","n":4}"#, "--c", "2", "--field", "Q"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("requires char K = p"), "{}", stderr(&out));

    let out = noether(&["reduce", "--theorem", "fischer", "--group", C3, "--field", "Q"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("root of unity"), "{}", stderr(&out));

    let out = noether(&["reduce", "--theorem", "4.2", "--n", "4"]);
    assert_eq!(code(&out), 2);

    let out = noether(&["reduce", "--theorem", "1.4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--g"), "{}", stderr(&out));
}

#[test]
fn bad_field_selector_is_a_usage_error() {
    let out = noether(&["reduce", "--theorem", "fischer", "--group", C2, "--field", "Fp:4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn resource_caps_exit_three() {
    let out = noether(&["reduce", "--theorem", "1.10", "--h", C2, "--g", C2, "--cap-size", "4"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn dihedral_pipeline_is_chained_and_verifies() {
    let path = scratch("pipeline3.json");
    reduce_to(&path, &["--theorem", "4.2", "--n", "3"]);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert["schema"], "noether-cert/1");
    let subs: Vec<&str> = cert["sub"].as_array().unwrap().iter().map(|s| s["theorem"].as_str().unwrap()).collect();
    assert_eq!(subs, ["1.10", "1.9", "1.5"]);
    let out = noether(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn every_theorem_round_trips_through_verify() {
    let dih3 = r#"{"kind":"dihedral","n":3}"#;
    let c4 = r#"{"kind":"cyclic","n":4}"#;
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("t11", vec!["--theorem", "1.1", "--h", C2, "--g", C2]),
        ("t14", vec!["--theorem", "1.4", "--g", C3, "--field", "Fp:2"]),
        ("t15", vec!["--theorem", "1.5", "--n", "3"]),
        ("t16", vec!["--theorem", "1.6", "--group", c4, "--c", "2", "--field", "Fp:2"]),
        ("t17", vec!["--theorem", "1.7", "--h", c4, "--field", "Fp:2"]),
        ("t18", vec!["--theorem", "1.8", "--group", c4, "--subgroup", "0,1,2,3", "--field", "Fp:2"]),
        ("t19", vec!["--theorem", "1.9", "--h", C2, "--g", dih3]),
        ("t110", vec!["--theorem", "1.10", "--h", C2, "--g", C2]),
    ];
    for (name, args) in cases {
        let path = scratch(&format!("{name}.json"));
        reduce_to(&path, &args);
        let out = noether(&["verify", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{name}: {}", stdout(&out));
    }
}

#[test]
fn tampered_certificate_fails_verification() {
    let path = scratch("tamper-src.json");
    reduce_to(&path, &["--theorem", "1.1", "--h", C2, "--g", C2]);
    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let coeff = &mut cert["sub"][0]["elements"]["z0"]["value"]["num"][1]["coeff"][0];
    assert_eq!(coeff, "-1");
    *coeff = Value::from("1");
    let bad = scratch("tampered.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&cert).unwrap()).unwrap();
    let out = noether(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    assert!(stdout(&out).contains("failed claim"), "{}", stdout(&out));
}

#[test]
fn truncated_or_foreign_certificates_exit_two() {
    let path = scratch("trunc-src.json");
    reduce_to(&path, &["--theorem", "fischer", "--group", C2]);
    let text = std::fs::read_to_string(&path).unwrap();
    let cut = scratch("truncated.json");
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    let out = noether(&["verify", cut.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line "), "{}", stderr(&out));

    let mut cert: Value = serde_json::from_str(&text).unwrap();
    cert["schema"] = Value::from("other/9");
    let foreign = scratch("foreign.json");
    std::fs::write(&foreign, cert.to_string()).unwrap();
    let out = noether(&["verify", foreign.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    let out = noether(&["verify", scratch("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn oracle_hnf_and_kernel() {
    let out = noether(&["oracle", "--hnf", "[[2,4],[1,3]]"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "[[1,1],[0,2]]");

    let out = noether(&["oracle", "--hnf", "[[1,0],[0,1]]"]);
    assert_eq!(stdout(&out).trim(), "[[1,0],[0,1]]");

    let out = noether(&["oracle", "--kernel", "[[0,1]]", "--moduli", "[2]"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "basis: [[1,0],[0,2]]\nindex: 2\n");

    let out = noether(&["oracle", "--hnf", "[[1,2],[3]]"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn oracle_invariant_check() {
    let ok = noether(&["oracle", "--invariant-check", "--group", C2, "--expr", "x[0] + x[1]"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok).trim(), "invariant");

    let no = noether(&["oracle", "--invariant-check", "--group", C3, "--expr", "x[0]^2 / x[1]"]);
    assert_eq!(code(&no), 1);
    assert_eq!(stdout(&no).trim(), "not invariant");

    let bad = noether(&["oracle", "--invariant-check", "--group", C3, "--expr", "x[0] + x[7]"]);
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains("column 8"), "{}", stderr(&bad));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["reduce", "--theorem", "1.6", "--group", r#"{"kind":"cyclic","n":4}"#, "--c", "2", "--field", "Fp:2", "--seed", "7"];
    let a = noether(&args);
    let b = noether(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}
