//! End-to-end runs of the `gradua` binary: exit codes, witnesses, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gradua(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradua"))
        .args(args)
        .env_remove("GRADUA_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

/// Runs and checks the exit code, then parses the JSON report.
fn expect(code: i32, args: &[&str]) -> Value {
    let out = gradua(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    json(&out)
}

fn assert_failing_with_witness(report: &Value) {
    assert_eq!(report["pass"], false);
    assert!(report.get("witness").is_some_and(|w| !w.is_null()), "{report}");
}

#[test]
fn help_prints_usage() {
    let out = gradua(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Usage") && text.contains("characterize"));
}

#[test]
fn roundtrip_of_inline_space_passes() {
    let r = expect(0, &["roundtrip", "--space", r#"{"rank":[1,1]}"#, "--order", "2"]);
    assert_eq!(r["pass"], true);
    assert_eq!(r["details"]["ev_identity"], true);
}

#[test]
fn non_free_data_is_rejected_with_relation() {
    let r = expect(1, &["characterize", "--data", &data("nonfree_order2.json"), "--order", "2"]);
    assert_failing_with_witness(&r);
    assert_eq!(r["witness"]["relation"], "y1_1^2");
    let r = expect(0, &["characterize", "--data", &data("free_order2.json"), "--order", "2"]);
    assert_eq!(r["details"]["rank_vector"], serde_json::json!([1, 1]));
}

#[test]
fn negative_weight_is_an_input_error_with_location() {
    let out = gradua(&["dualize", "--space", r#"{"variables":[{"name":"y","weight":-1}]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gradua(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(gradua(&["characterize", "--data", &data("free_order2.json")]).status.code(), Some(2));
    assert_eq!(gradua(&["weil", "check-free", "--algebra", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["bundle", "dualize", "--atlas", &data("atlas.json"), "--max-weight", "2"];
    let a = gradua(&args);
    let b = gradua(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let sel = ["selftest"];
    assert_eq!(gradua(&sel).stdout, gradua(&sel).stdout);
}

#[test]
fn graded_map_checks() {
    let space = data("space_yz.json");
    expect(0, &["space", "check-morphism", "--space", &space, "--map", &data("map_graded.json")]);
    let bad = expect(1, &["space", "check-morphism", "--space", &space, "--map", &data("map_ungraded.json")]);
    assert_failing_with_witness(&bad);
    let dual = expect(0, &["dualize", "--space", &space, "--order", "4"]);
    assert_eq!(dual["details"]["dimensions"], serde_json::json!([1, 1, 2, 2, 3]));
}

#[test]
fn weil_algebra_commands() {
    let free = data("free_order2.json");
    let nonfree = data("nonfree_order2.json");
    expect(0, &["weil", "check-free", "--algebra", &free]);
    assert_failing_with_witness(&expect(1, &["weil", "check-free", "--algebra", &nonfree]));
    let g = expect(0, &["weil", "generators", "--algebra", &nonfree]);
    assert_eq!(g["details"]["rank_vector"], serde_json::json!([1, 1]));
    let kd = expect(0, &["dualize", "--algebra", &free]);
    assert_eq!(kd["details"]["rank_vector"], serde_json::json!([1, 1]));
    assert_failing_with_witness(&expect(1, &["dualize", "--algebra", &nonfree]));
}

#[test]
fn coalgebra_commands() {
    let space = data("space_yz.json");
    let r = expect(0, &["coalg", "comul", "--algebra", &space, "--element", "Y[y,z]"]);
    assert_eq!(r["details"]["matches_shuffle_formula"], true);
    assert_eq!(r["details"]["terms"].as_array().map(Vec::len), Some(4));
    expect(0, &["coalg", "axioms", "--algebra", &space, "--max-weight", "5"]);
    expect(0, &["coalg", "axioms", "--algebra", &data("free_order2.json")]);
    assert_eq!(gradua(&["coalg", "comul", "--algebra", &space, "--element", "Y[q]"]).status.code(), Some(2));
}

#[test]
fn bundle_commands() {
    let good = data("atlas.json");
    let broken = data("atlas_broken.json");
    expect(0, &["bundle", "check", "--atlas", &good]);
    let split = expect(0, &["bundle", "split", "--atlas", &good]);
    assert_eq!(split["details"]["rank_vector"], serde_json::json!([1, 1]));
    let bad = expect(1, &["bundle", "check", "--atlas", &broken]);
    assert_failing_with_witness(&bad);
    assert_eq!(bad["witness"]["triple"], serde_json::json!(["A", "B", "A"]));
    assert_failing_with_witness(&expect(1, &["bundle", "split", "--atlas", &broken]));
    assert_failing_with_witness(&expect(1, &["bundle", "dualize", "--atlas", &broken]));
}

#[test]
fn characterization_commands() {
    let r = expect(0, &["characterize", "reconstruct", "--data", &data("free_order2.json"), "--order", "2"]);
    assert_eq!(r["details"]["structure_recovered"], true);
    assert_failing_with_witness(&expect(
        1,
        &["characterize", "reconstruct", "--data", &data("nonfree_order2.json"), "--order", "2"],
    ));
    let dvb = expect(0, &["characterize", "dvb", "--data", &data("dvb.json")]);
    assert_eq!(dvb["details"]["core_dim"], 1);
    assert_failing_with_witness(&expect(1, &["characterize", "dvb", "--data", &data("dvb_degenerate.json")]));
    let m12 = expect(0, &["characterize", "rank-m12", "--rank", "2,1"]);
    assert_eq!(m12["details"]["brute_force"], 6);
    assert!(m12["details"].get("literal_formula").is_some());
}

#[test]
fn super_commands() {
    let n2 = expect(0, &["super", "check-n2", "--data", &data("n_manifold.json")]);
    assert_eq!(n2["details"]["oracle_agrees"], true);
    let degenerate = r#"{"odd_dim": 2, "even_dim": 1, "map": [[[0], [0]], [[0], [0]]]}"#;
    assert_failing_with_witness(&expect(1, &["super", "check-n2", "--data", degenerate]));
    expect(0, &["super", "check-free", "--algebra", &data("super_order2.json"), "--order", "2"]);
}

#[test]
fn text_format_and_timing() {
    let out = gradua(&["characterize", "rank-m12", "--rank", "1,1", "--format", "text", "--timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("result: pass") && text.contains("timing_ms"));
}

#[test]
fn selftest_runs_every_criterion() {
    let out = Command::new(env!("CARGO_BIN_EXE_gradua"))
        .arg("selftest")
        .env("GRADUA_SEED", "7")
        .output()
        .expect("binary runs");
    let r = json(&out);
    assert_eq!(out.status.code(), Some(0), "{r}");
    assert_eq!(r["details"]["seed"], 7);
    assert_eq!(r["details"]["criteria"].as_array().map(Vec::len), Some(12));
}
