use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3lattice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON on stdout")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    fs::write(f.path(), contents).unwrap();
    f
}

#[test]
fn lattice_info_k7() {
    let o = run(&["lattice-info", "K7", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["det"], "7");
    assert_eq!(v["even"], true);
    assert_eq!(
        v["discriminant_group"]["invariant_factors"],
        serde_json::json!(["7"])
    );
}

#[test]
fn lattice_info_a15_text() {
    let o = run(&["lattice-info", "A15"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("det           -16"), "{text}");
    assert!(text.contains("Z/16"), "{text}");
}

#[test]
fn lattice_info_chain_fixture() {
    let o = run(&["lattice-info", "A15-chain-1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["det"], "-16");
}

#[test]
fn lattice_info_reads_json_files() {
    let f = temp_file(r#"{"label":"K7","gram":[[-4,1],[1,-2]]}"#);
    let o = run(&["lattice-info", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["det"], "7");
}

#[test]
fn input_errors_exit_two() {
    let empty = temp_file("");
    assert_eq!(
        run(&["lattice-info", empty.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let broken = temp_file(r#"{"gram": [[2, 1], [0, 2]]}"#);
    assert_eq!(
        run(&["lattice-info", broken.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["lattice-info", "Q9"]).status.code(), Some(2));
    assert_eq!(
        run(&["lattice-info", "missing/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["fibration", "nonexistent"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify-all", "--perturb", "det"]).status.code(),
        Some(2)
    );
}

#[test]
fn fibration_fixtures() {
    let o = run(&["fibration", "AST", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["configuration"], "I7 + 7 I1 + II*");
    assert_eq!(v["euler_sum"], 24);
    assert_eq!(v["implied_mw_rank"], 0);

    let o = run(&["fibration", "Ko", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["configuration"], "III* + 7 I1 + IV*");
    assert_eq!(v["implied_mw_rank"], 1);
}

#[test]
fn fibration_rejects_degree_thirteen() {
    let mut a6 = vec![0; 14];
    a6[13] = 1;
    let f = temp_file(&serde_json::json!({"a4": [0, 1], "a6": a6}).to_string());
    let o = run(&["fibration", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("a6"));
}

#[test]
fn fibration_non_minimal_is_a_failure() {
    let f = temp_file(r#"{"label":"constant","a4":[1],"a6":[1]}"#);
    assert_eq!(
        run(&["fibration", f.path().to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn fibration_json_builds_the_lattice() {
    let f = temp_file(
        r#"{"label":"AST","mw_rank":0,"fibers":[
            {"place":"0","type":"I7","identity":"Γ7"},
            {"place":"t^7 - 2 = 0","type":"I1","count":7},
            {"place":"inf","type":"II*","identity":"Θ1"}]}"#,
    );
    let o = run(&["fibration", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["euler_sum"], 24);
    assert_eq!(v["shioda_tate_rank"], 16);
    assert_eq!(v["neron_severi"]["det"], "-7");
}

#[test]
fn fibration_json_euler_mismatch_exits_one() {
    let f = temp_file(
        r#"{"mw_rank":0,"fibers":[{"place":"0","type":"I7","identity":"Γ7"},
            {"place":"inf","type":"II*","identity":"Θ1"}]}"#,
    );
    let o = run(&["fibration", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("euler sum     17"));
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let a = run(&["verify-all", "--json"]);
    let b = run(&["verify-all", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    let (mut va, mut vb) = (json(&a), json(&b));
    assert_eq!(va["all_passed"], true);
    va["timestamp"] = Value::Null;
    vb["timestamp"] = Value::Null;
    assert_eq!(
        serde_json::to_string(&va).unwrap(),
        serde_json::to_string(&vb).unwrap()
    );
    let glue = va["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "08-glue")
        .unwrap();
    assert_eq!(glue["values"]["H_square"], "112");
    assert_eq!(glue["values"]["n"], "16");
}

#[test]
fn perturbed_run_names_the_failing_checks() {
    let o = run(&["verify-all", "--perturb", "gram"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] 06-ns-build"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("06-ns-build"));
}
