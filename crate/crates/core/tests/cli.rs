use std::fs;
use std::path::Path;
use std::process::Command;

const STAR: &str = r#"{"instance": {"kind": "star", "n": 30}, "pipeline": "tree-left",
    "params": {"nu": 0.2, "seed": 2}, "attacks": {"count": 4, "sizes": [3]}}"#;

fn relspan(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_relspan"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_verify_attack_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("star.json");
    fs::write(&cfg, STAR).unwrap();
    let out = dir.path().join("run");

    let instance = dir.path().join("instance.json");
    assert_eq!(
        relspan(&["gen", "--config", s(&cfg), "--out", s(&instance)]).0,
        0
    );
    assert_eq!(
        relspan(&["build", "--config", s(&cfg), "--out", s(&out)]).0,
        0
    );
    let (code, stdout) = relspan(&[
        "verify",
        "--instance",
        s(&instance),
        s(&out.join("lso.json")),
        s(&out.join("spanner.json")),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(
        relspan(&[
            "attack",
            "--config",
            s(&cfg),
            "--seed",
            "9",
            "--out",
            s(&out)
        ])
        .0,
        0
    );
    let (code, table) = relspan(&["report", s(&out.join("attacks.csv"))]);
    assert_eq!(code, 0);
    assert!(table.contains("30"), "{table}");
}

#[test]
fn tampered_artifact_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("star.json");
    fs::write(&cfg, STAR).unwrap();
    assert_eq!(
        relspan(&["build", "--config", s(&cfg), "--out", s(dir.path())]).0,
        0
    );
    let lso_path = dir.path().join("lso.json");
    let mut lso: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&lso_path).unwrap()).unwrap();
    // Reverse every ordering: leaves then precede the center.
    for o in lso["orderings"].as_array_mut().unwrap() {
        o.as_array_mut().unwrap().reverse();
    }
    fs::write(&lso_path, lso.to_string()).unwrap();
    let (code, stdout) = relspan(&["verify", "--config", s(&cfg), s(&lso_path)]);
    assert_eq!(code, 1, "{stdout}");
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(relspan(&["frobnicate"]).0, 2);
    assert_eq!(relspan(&["build"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"pipeline": "nope"}"#).unwrap();
    assert_eq!(relspan(&["build", "--config", s(&bad)]).0, 2);
    let cfg = dir.path().join("star.json");
    fs::write(&cfg, STAR).unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, r#"{"what": 1}"#).unwrap();
    assert_eq!(relspan(&["verify", "--config", s(&cfg), s(&junk)]).0, 2);
}
