use std::io::Write;
use std::process::Command;

fn gcl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gcl"))
}

fn write_instance(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn smoothed_bernoulli_reference_instance() {
    let f = write_instance(r#"{"n":2,"N":2,"forms":[[2,-1],[-1,1]],"v":["0","0"]}"#);
    let out = gcl()
        .args(["smoothed-bernoulli", "--file"])
        .arg(f.path())
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let detail = &report["checks"][0]["detail"];
    assert_eq!(detail["value"], "1/4");
    assert_eq!(detail["b"], "1");
    assert_eq!(detail["D"], "4");
    assert_eq!(detail["good"], true);
}

#[test]
fn fuzz_is_deterministic_per_seed() {
    let run = || {
        gcl()
            .args([
                "fuzz",
                "--profile",
                "full-rank-good",
                "--count",
                "5",
                "--n",
                "3",
                "--seed",
                "42",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn verify_rank_deficient_reference_passes() {
    let out = gcl()
        .args(["verify", "rank-deficient", "--count", "1", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let reference = checks
        .iter()
        .find(|c| c["name"] == "rank-deficient-reference-cones")
        .unwrap();
    assert_eq!(reference["status"], "pass");
}

#[test]
fn sign_table_reproduces_reference_table() {
    let f = write_instance(
        r#"{"n":4,"forms":[[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,1,1,0]],
            "x_exact":[{"re":"0","im":"2"},{"re":"0","im":"3"},{"re":"0","im":"5"},{"re":"-1","im":"0"}]}"#,
    );
    let out = gcl()
        .args(["sign-table", "--file"])
        .arg(f.path())
        .arg("--json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let detail = &report["checks"][0]["detail"];
    assert_eq!(
        detail["entries"],
        serde_json::json!([
            ["+", ".", "-", "+"],
            ["+", "-", ".", "+"],
            ["+", "+", "-", "."]
        ])
    );
    assert_eq!(detail["mu"], serde_json::json!([-1, 1, 1]));
    for name in ["sign-lemma", "cone-lemmas", "f-vanishing"] {
        let check = report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap();
        assert_eq!(check["status"], "pass", "{name}");
    }
}

#[test]
fn usage_error_exits_nonzero() {
    let out = gcl().args(["bernoulli"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn instance_roundtrip_through_fuzz() {
    // each emitted line must parse back into a loadable instance
    let out = gcl()
        .args([
            "fuzz",
            "--profile",
            "rank-deficient-well-placed",
            "--count",
            "3",
            "--n",
            "4",
            "--seed",
            "9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut instances = 0;
    for line in text.lines() {
        if !line.starts_with('{') {
            continue;
        }
        let parsed: serde_json::Value = serde_json::from_str(line).unwrap();
        let reserialized = serde_json::to_string(&parsed).unwrap();
        let reparsed: serde_json::Value = serde_json::from_str(&reserialized).unwrap();
        assert_eq!(parsed, reparsed);
        assert!(parsed["forms"].as_array().unwrap().len() == 4);
        instances += 1;
    }
    assert_eq!(instances, 3);
}
