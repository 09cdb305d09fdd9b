use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indivisible"))
        .args(args)
        .env_remove("INDIV_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn verify_small_case() {
    let out = run(&["verify", "--q", "5", "--ell", "3", "--m", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["gamma"]["gamma"], "1");
    assert_eq!(v["genus"]["riemann_hurwitz"], 2);
    assert_eq!(v["genus"]["l_degree_half"], 2);
    assert_eq!(v["ell_divides"], false);
    assert_eq!(v["class_number"], "16");
    assert_eq!(v["l_poly"], serde_json::json!(["1", "-3", "8", "-15", "25"]));
    assert_eq!(v["seed"], 0x5eed);
    for key in ["input", "admissibility", "rikuna_checks", "ramification", "timings_ms", "version"] {
        assert!(!v[key].is_null(), "missing {key}");
    }
}

#[test]
fn certificate_is_reproducible() {
    let args = ["verify", "--q", "11", "--ell", "3", "--m", "2", "--n", "1", "--seed", "9"];
    let a = without_timings(json(&run(&args)));
    let b = without_timings(json(&run(&args)));
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["seed"], 9);
}

#[test]
fn json_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = run(&[
        "verify", "--q", "5", "--ell", "3", "--m", "2", "--n", "1", "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "ok");
}

#[test]
fn congruence_violation_is_invalid_input() {
    let out = run(&["verify", "--q", "7", "--ell", "3", "--m", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "invalid");
    assert!(v["error"].as_str().unwrap().contains("violates q ≡ −1 (mod ℓ)"));
    assert!(v["ell_divides"].is_null());
}

#[test]
fn malformed_inputs_exit_2() {
    for args in [
        vec!["verify", "--q", "6", "--ell", "3", "--m", "2", "--n", "1"],
        vec!["verify", "--q", "5", "--ell", "4", "--m", "2", "--n", "1"],
        vec!["verify", "--q", "5", "--ell", "3", "--m", "3", "--n", "1"],
        vec!["verify", "--q", "5", "--ell", "3", "--m", "2"],
        vec!["verify", "--q", "x", "--ell", "3", "--m", "2", "--n", "1"],
        vec!["admissible", "--ell", "3", "--m", "1"],
        vec!["gamma", "--q", "7", "--ell", "3", "--m", "2"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn budget_refusal() {
    let out = run(&["verify", "--q", "5", "--ell", "3", "--m", "2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "budget");
    assert_eq!(v["genus"]["riemann_hurwitz"], 26);
    assert!(v["error"].as_str().unwrap().contains("1862645149230957030"));
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_indivisible"))
        .args(["verify", "--q", "5", "--ell", "3", "--m", "2", "--n", "1"])
        .env("INDIV_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "budget");
}

#[test]
fn admissible_reports() {
    let out = run(&["admissible", "--ell", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["c"], "4");
    assert_eq!(v["threshold"], "64");
    assert_eq!(v["residue"], 5);
    assert_eq!(v["modulus"], 6);

    let v = json(&run(&["admissible", "--ell", "3", "--m", "77"]));
    let rhs = v["corollary"]["rhs_f64"].as_f64().unwrap();
    assert!((rhs - 0.0677).abs() < 1e-4);
    assert_eq!(v["corollary"]["verdict"], true);

    let v = json(&run(&["admissible", "--ell", "3", "--m", "2", "--q", "71"]));
    assert_eq!(v["admissible"], true);
}

#[test]
fn gamma_command() {
    let out = run(&["gamma", "--q", "5", "--ell", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["gamma"], "1");
    assert_eq!(v["lambda"], "2");
    assert_eq!(v["tau"], "4");
    assert_eq!(v["witnesses"][0]["norm_not_power"], true);
}

#[test]
fn survey_csv() {
    let out = run(&["survey", "--ell", "3", "--m", "2", "--q-max", "50", "--n-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("q,ell,m,n,congruent,admissible,gamma,genus,h,ell_divides_h,status")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let qs: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(qs, ["5", "11", "17", "23", "29", "41", "47"]);
    assert!(rows.iter().all(|r| r.len() == 11 && r[9] == "false" && r[10] == "OK"));
}

#[test]
fn survey_other_progression() {
    let out = run(&["survey", "--ell", "5", "--m", "2", "--q-max", "20", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let qs: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert_eq!(qs, [9, 19]);
}

#[test]
fn survey_marks_budget_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = run(&[
        "survey", "--ell", "3", "--m", "2", "--q-max", "10", "--n-max", "3", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].ends_with(",OK") && rows[1].ends_with(",OK"));
    assert!(rows[2].starts_with("5,3,2,3,") && rows[2].ends_with(",BUDGET"));
}
