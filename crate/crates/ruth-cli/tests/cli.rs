//! End-to-end checks of the binary: exit codes, report formats, and the
//! shipped fixture files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ruth"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn validate_cocycle_fixture_exits_zero() {
    let out = bin().arg("validate").arg(fixture("z2_cocycle.json")).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] structure equations: rep `rho`"));
    assert!(text.contains("[PASS] serialization round-trip"));
}

#[test]
fn run_executes_fixture_task_lists() {
    for name in ["z2_cocycle.json", "pair3_trivial.json", "z2_swap.json"] {
        let out = bin().arg("run").arg(fixture(name)).output().unwrap();
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn json_report_is_machine_readable() {
    let out = bin()
        .arg("vanish")
        .arg(fixture("z2_cocycle.json"))
        .args(["--rep", "rho", "--degrees", "0..4", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["command"], "vanish");
    let assertions = report["assertions"].as_array().unwrap();
    assert!(assertions.iter().all(|a| a["ok"].as_bool().unwrap()));
}

#[test]
fn report_flag_writes_the_json_file() {
    let path = std::env::temp_dir().join("ruth_cli_report_test.json");
    let _ = std::fs::remove_file(&path);
    let out = bin()
        .arg("cohomology")
        .arg(fixture("pair3_trivial.json"))
        .args(["--degrees", "0..2", "--report"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "cohomology");
    let _ = std::fs::remove_file(&path);
}

#[test]
fn missing_file_exits_two() {
    let out = bin().arg("validate").arg("no-such-file.json").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dangling_reference_exits_two() {
    let path = std::env::temp_dir().join("ruth_cli_dangling_test.json");
    std::fs::write(
        &path,
        serde_json::json!({
            "schema_version": 1,
            "groupoid": {
                "objects": ["x"],
                "arrows": [{"id": "f", "src": "x", "tgt": "ghost"}],
                "units": {"x": "f"},
                "inverses": {"f": "f"},
                "comp": []
            }
        })
        .to_string(),
    )
    .unwrap();
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn violated_structure_equations_exit_one() {
    // the cocycle entry is perturbed on a unit-containing string, which
    // breaks closedness of η and hence the structure equations
    let path = std::env::temp_dir().join("ruth_cli_invalid_rep_test.json");
    std::fs::write(
        &path,
        serde_json::json!({
            "schema_version": 1,
            "groupoid": {
                "objects": ["pt"],
                "arrows": [
                    {"id": "e", "src": "pt", "tgt": "pt"},
                    {"id": "s", "src": "pt", "tgt": "pt"}
                ],
                "units": {"pt": "e"},
                "inverses": {"e": "e", "s": "s"},
                "comp": [["e","e","e"],["e","s","s"],["s","e","s"],["s","s","e"]]
            },
            "bundle": {"E": {"amplitude": [0, 1], "dims": {"pt": {"0": 1, "1": 1}}}},
            "rep": {"rho": {"bundle": "E", "tensors": [
                {"k": 1, "string": ["e"], "l": 0, "matrix": [["1"]]},
                {"k": 1, "string": ["e"], "l": 1, "matrix": [["1"]]},
                {"k": 1, "string": ["s"], "l": 0, "matrix": [["1"]]},
                {"k": 1, "string": ["s"], "l": 1, "matrix": [["1"]]},
                {"k": 2, "string": ["e", "s"], "l": 1, "matrix": [["1"]]}
            ]}}
        })
        .to_string(),
    )
    .unwrap();
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[FAIL] structure equations: rep `rho`"));
    let _ = std::fs::remove_file(&path);
}
