use std::process::{Command, Output};

use serde_json::Value;

fn fingap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fingap")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = fingap(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("fingap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn lame_indices_from_leading_coefficient() {
    let v = json_of(&["indicial", "--n", "2", "--b2", "-6"]);
    assert_eq!(v["indices"], serde_json::json!(["-2", "3"]));
    assert_eq!(v["gaps"], serde_json::json!(["5"]));
}

#[test]
fn gap_pair_two_two_has_one_condition() {
    let v = json_of(&["constraints", "--q", "2", "--r", "2"]);
    let conds = v["conditions"].as_array().unwrap();
    assert_eq!(conds.len(), 1);
    assert_eq!(conds[0]["poly"], "3*c + e^2");
    assert_eq!(conds[0]["lambda_degree"], 0);
}

#[test]
fn homogeneous_check_by_gaps() {
    assert_eq!(json_of(&["homog-check", "--q", "1", "--r", "1"])["integrable"], true);
    assert_eq!(json_of(&["homog-check", "--indices", "-1/2,1/2"])["integrable"], false);
}

#[test]
fn locus_table_is_verified() {
    let out = fingap(&["locus", "--r", "2", "--q-max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("r,q,branch,classification"));
    assert!(text.contains("2,2,1,one-parameter-family,-1/3,"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn reconstruction_agrees_with_closed_form() {
    let v = json_of(&["reconstruct", "--r", "5", "--quantity", "g2/e^4"]);
    assert_eq!(v["agrees"], true);
}

#[test]
fn jtable_matches_for_r8() {
    let out = fingap(&["jtable", "--r", "8", "--q-max", "14"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn commuting_operator_for_lame_two() {
    let v = json_of(&["commute", "--operator", "D^2 - 6*P", "--order", "5"]);
    assert!(v["commuting"].as_str().unwrap().starts_with("D^5"));
    let v = json_of(&["commute", "--operator", "D^2 - 5*P", "--order", "3"]);
    assert!(v["commuting"].is_null());
}

#[test]
fn monodromy_verdicts() {
    let v = json_of(&["monodromy", "--operator", "D^2 - 6*P"]);
    assert_eq!(v["verdict"], "trivial");
    let v = json_of(&["monodromy", "--operator", "D^2 - 5*P"]);
    assert_ne!(v["verdict"], "trivial");
}

#[test]
fn half_periods_are_a_finite_gap_configuration() {
    let cfg = r#"{"points":[[0,0],[0.5,0],[0,0.5],[0.5,0.5]],"multiplicities":[1,1,1,1]}"#;
    let v = json_of(&["cm2-residuals", "--config", cfg]);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn single_particle_critical_value() {
    let cfg = r#"{"points":[[0,0]],"momenta":[[0.3,0.1]],"c":[1,1]}"#;
    let v = json_of(&["cm3-crit", "--config", cfg, "--vary", "c"]);
    // c = -3 p^2
    let c = &v["config"]["c"];
    assert!((c[0].as_f64().unwrap() + 0.24).abs() < 1e-12);
    assert!((c[1].as_f64().unwrap() + 0.18).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(fingap(&["constraints", "--q", "2", "--r", "3"]).status.code(), Some(2));
    assert_eq!(fingap(&["indicial", "--operator", "D^2 - 6*"]).status.code(), Some(2));
    assert_eq!(fingap(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(fingap(&["inozemtsev-grad", "--points", "[[0.2,0.1]]", "--m", "1,2"]).status.code(), Some(2));
    assert_eq!(fingap(&["cm2-residuals", "--config", "{"]).status.code(), Some(2));
    assert_eq!(fingap(&["verify-paper", "--criteria", "12"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["monodromy", "--operator", "D^2 - 2*P", "--lambda", "1,0", "--lambda", "-2,1", "--lambda", "0,5"];
    assert_eq!(stdout(&fingap(&args)), stdout(&fingap(&args)));
    let args = ["verify-paper", "--criteria", "7", "--seed", "3"];
    let (a, b) = (fingap(&args), fingap(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("[PASS] criterion  7"));
}

#[test]
fn manifest_replays() {
    let manifest = scratch("run.json");
    let result = scratch("constraints.json");
    let m = manifest.to_str().unwrap();
    let out = fingap(&["constraints", "--q", "4", "--r", "1", "--output", result.to_str().unwrap(), "--manifest", m]);
    assert_eq!(out.status.code(), Some(0));
    let recorded: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(recorded["command"], "constraints");
    assert_eq!(recorded["seed"], 0);
    let bytes = std::fs::read(&result).unwrap().len();
    assert_eq!(recorded["outputs"][0]["bytes"], bytes);

    let replay = fingap(&["replay", "--from", m]);
    assert_eq!(replay.status.code(), Some(0));
    assert!(stdout(&replay).ends_with("identical\n"));

    // a tampered hash is reported as a mismatch
    let tampered = std::fs::read_to_string(&manifest).unwrap().replace("\"sha256\": \"", "\"sha256\": \"ff");
    std::fs::write(&manifest, tampered).unwrap();
    assert_eq!(fingap(&["replay", "--from", m]).status.code(), Some(1));
}
