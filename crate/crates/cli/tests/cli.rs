use std::process::{Command, Output};

use serde_json::Value;

fn osc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osc")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn finite_osc_prints_bare_value() {
    let out = osc(&["osc", "finite", "--s", "1,2,3", "--t", "3,4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn walk_prints_both_traces() {
    let out = osc(&["walk", "--alpha", "3", "--beta", "w*2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["upper"], serde_json::json!(["w*2", "w", "3"]));
    assert_eq!(v["lower"], serde_json::json!(["0", "2"]));
}

#[test]
fn json_envelope_has_every_field() {
    let out = osc(&["osc", "seq", "--s", "1,5", "--t", "2,3", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    for key in ["command", "seed", "budgets", "result", "counterexamples", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "osc seq");
    assert_eq!(v["result"], 1);
    assert!(v["elapsed_ms"].is_null());

    let timed = json(&osc(&["osc", "seq", "--s", "1,5", "--t", "2,3", "--format", "json", "--timing"]));
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn triple_and_ordinal_osc() {
    assert_eq!(stdout(&osc(&["osc", "triple", "--s", "0,2", "--t", "1", "--u", "1,3"])), "3\n");
    let v = json(&osc(&["osc", "ordinal", "--alpha", "3", "--beta", "w*2"]));
    assert!(v["value"].is_u64());
}

#[test]
fn usage_and_module_errors_exit_two() {
    assert_eq!(osc(&["osc", "finite", "--s", "1"]).status.code(), Some(2));
    assert_eq!(osc(&["osc", "finite", "--s", "x", "--t", "1"]).status.code(), Some(2));
    assert_eq!(osc(&["osc", "seq", "--s", "1,2", "--t", "1"]).status.code(), Some(2));
    assert_eq!(osc(&["osc", "triple", "--s", "1", "--t", "1", "--u", "2"]).status.code(), Some(2));
    assert_eq!(osc(&["walk", "--alpha", "w", "--beta", "3"]).status.code(), Some(2));
    let unknown = osc(&["verify", "nothing"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown suite"));
}

#[test]
fn kronecker_finds_six() {
    let out = osc(&["kronecker", "--z", "sqrt(2)", "--u", "0", "--v", "1/2", "--eps", "0.3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "6\n");
    let capped = osc(&["kronecker", "--z", "sqrt(2)", "--u", "0", "--v", "1/2", "--eps", "0.3", "--cap", "6"]);
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn lspace_sample_csv_header_and_rows() {
    let out = osc(&["lspace", "sample", "--xs", "1,2,w", "--betas", "w*2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("beta,xi,angle_rational,angle_terms,x,y"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn csv_is_refused_for_scalars() {
    assert_eq!(osc(&["osc", "finite", "--s", "1", "--t", "2", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn realize_bits_reads_back_target() {
    let v = json(&osc(&["realize-bits", "--alpha", "0110"]));
    assert_eq!(v["bits"], "0110");
    assert_eq!(v["lead"], 0);
}

#[test]
fn extend_splitting_adds_exactly_n() {
    let v = json(&osc(&["extend-splitting", "--s", "1,4", "--t", "2", "--n", "5"]));
    assert_eq!(v["osc"].as_u64().unwrap(), v["baseline"].as_u64().unwrap() + 5);
}

#[test]
fn final_color_target_demo() {
    let v = json(&osc(&["color", "final", "--target", "3,0;1,2"]));
    assert_eq!(v["colors"], serde_json::json!([[3, 0], [1, 2]]));
}

#[test]
fn derivative_membership_and_realization() {
    let v = json(&osc(&["derivative", "--family", "canonical:k=2,M=16", "--k", "2", "--member", ""]));
    assert_eq!(v["member"], true);
    let v = json(&osc(&["derivative", "--family", "canonical:k=2,M=16", "--k", "2", "--realize"]));
    let values: Vec<u64> = v["pairs"].as_array().unwrap().iter().map(|p| p["osc"].as_u64().unwrap()).collect();
    assert_eq!(values, [1, 2, 3]);
}

#[test]
fn explicit_family_file() {
    let dir = std::env::temp_dir().join(format!("osc-cli-family-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("family.txt");
    std::fs::write(&path, "\n0\n0,1\n").unwrap();
    let family = format!("explicit:{}", path.display());
    let v = json(&osc(&["derivative", "--family", &family, "--k", "0"]));
    assert_eq!(v["members"].as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("osc-cli-out-{}.json", std::process::id()));
    let out = osc(&["verify", "baire", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify baire");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["result"]["passed"], true);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn moore_color_is_an_angle() {
    let out = osc(&["color", "moore", "--alpha", "3", "--beta", "w*2", "--session", "w"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("sqrt("));
}

#[test]
fn lspace_hit_reports() {
    let v = json(&osc(&[
        "lspace", "hit", "--a", "1;2", "--b", "w,w+1;w*2,w*2+1", "--centers", "1/2", "--eps", "2", "--phi", "0",
    ]));
    assert_eq!(v["hits"], 4);
}
