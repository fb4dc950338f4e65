//! End-to-end tests of the `kazlab` binary: exit codes, error records,
//! verdict schema, and output plumbing.

use std::path::Path;
use std::process::Command;

fn kazlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kazlab"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn witness_verdict_has_the_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = kazlab()
        .args(["--out-dir"])
        .arg(dir.path())
        .args(["kazhdan", "witness", "--set", "lacunary:2^k", "--epsilon", "0.05"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verdict.json")).unwrap())
            .unwrap();
    for key in ["kind", "window", "defect", "atom_estimate", "trace"] {
        assert!(verdict.get(key).is_some(), "missing {key}");
    }
    assert_eq!(verdict["kind"], "non_kazhdan_witness");
    assert!(verdict["defect"].as_f64().unwrap() < 0.05);
    assert!(verdict["trace"].as_array().unwrap().len() > 30);
    for key in ["tool_version", "scenario_hash", "tolerances"] {
        assert!(verdict.get(key).is_some(), "audit field {key}");
    }
    assert!(dir.path().join("witness_measure.toml").exists());
}

#[test]
fn certify_defaults_reproduce_the_atom() {
    let dir = tempfile::tempdir().unwrap();
    let measure = dir.path().join("m.toml");
    write(
        &measure,
        r#"
[[atoms]]
angle = "0"
re = 0.95

[density]
kind = "uniform"
mass = 0.05
grid = 1024
"#,
    );
    let out = kazlab()
        .args(["--out-dir"])
        .arg(dir.path())
        .args(["kazhdan", "certify", "--set", "lacunary:2^k+k", "--K", "20", "--measure"])
        .arg(&measure)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verdict.json")).unwrap())
            .unwrap();
    assert_eq!(verdict["kind"], "atom_certificate");
    let atom = verdict["atom_estimate"].as_f64().unwrap();
    assert!((atom - 0.95).abs() < 0.05, "atom {atom}");
}

#[test]
fn schema_errors_exit_2_with_error_record() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    write(&bad, "kind = \"no-such-command\"\n[params]\n");
    let out = kazlab().arg("run").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let record: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("machine-readable error record");
    assert_eq!(record["error"]["code"], "SCHEMA");
}

#[test]
fn io_errors_exit_3_and_compute_errors_exit_4() {
    let out = kazlab()
        .args(["measure", "eval", "--measure", "/nonexistent/m.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let record: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(record["error"]["code"], "IO");

    let dir = tempfile::tempdir().unwrap();
    let out = kazlab()
        .args(["--out-dir"])
        .arg(dir.path())
        .args(["kazhdan", "witness", "--set", "lacunary:3^k+k", "--epsilon", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let record: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(record["error"]["code"], "COMPUTE");
}

#[test]
fn json_format_switches_the_data_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = kazlab()
        .args(["--format", "json", "--out-dir"])
        .arg(dir.path())
        .args(["weyl", "scan", "--seq", "poly:1,0", "--theta", "1/4", "--N", "64", "--harmonics", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("weyl_scan.json")).unwrap())
            .unwrap();
    assert!(rows.as_array().unwrap().len() > 4);
    assert!(rows[0].get("magnitude").is_some());
}

#[test]
fn scenario_output_section_controls_filenames() {
    let dir = tempfile::tempdir().unwrap();
    let scen = dir.path().join("scen.toml");
    write(
        &scen,
        &format!(
            r#"
kind = "heisenberg-decay"

[params]
lambda = 1.0
pmax = 4.0
points = 513
radius = 14.0

[output]
dir = "{}"
data = "hdecay.csv"
report = "hreport.json"
"#,
            dir.path().join("sub").display()
        ),
    );
    let out = kazlab().arg("run").arg(&scen).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("sub/hdecay.csv").exists());
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("sub/hreport.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["command"], "heisenberg-decay");
    assert!(report["results"]["magnitude_at_0"].as_f64().unwrap() > 0.9);
}
