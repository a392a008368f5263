//! End-to-end runs of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn psdmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psdmult")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn example_verification_passes() {
    let o = psdmult(&["verify", "example-2-6", "--a", "neg-quadratic", "--b", "1", "--t", "0.1,1,10", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["seed"], 7);
    assert_eq!(r["scenario"]["kind"], "example-2-6");
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for key in ["version", "grid", "elapsed_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn anti_cpsd_scalar_part_fails() {
    let o = psdmult(&["verify", "example-2-6", "--a", "pos-quadratic", "--b", "0", "--seed", "7"]);
    assert_eq!(code(&o), 1);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let a = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "a-cpsd").unwrap();
    assert_eq!(a["passed"], false);
    assert!(!a["witness"].is_null());
}

#[test]
fn malformed_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"version\": 1, \"seed\": ").unwrap();
    let o = psdmult(&["verify", "example-2-6", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(code(&psdmult(&["verify", "example-2-6"])), 2, "missing seed");
    assert_eq!(code(&psdmult(&["verify", "no-such-scenario", "--seed", "1"])), 2);
    assert_eq!(code(&psdmult(&["verify", "norm-suite", "--seed", "1", "--grid", "1,1000,40"])), 2);
    assert_eq!(code(&psdmult(&["test-psd", "--seed", "1", "--symbol", "nonsense"])), 2);
    assert_eq!(code(&psdmult(&["verify", "example-2-6", "--seed", "1", "--t", "-1"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("other.json");
    std::fs::write(&path, r#"{"version":1,"seed":3,"scenario":{"kind":"schur-suite"}}"#).unwrap();
    assert_eq!(code(&psdmult(&["verify", "example-2-6", "--config", path.to_str().unwrap()])), 2);
    std::fs::write(&path, r#"{"version":1,"seed":3,"scenario":{"kind":"schur-suite","count":5,"colour":1}}"#).unwrap();
    assert_eq!(code(&psdmult(&["verify", "schur-suite", "--config", path.to_str().unwrap()])), 2);
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("schur.json");
    std::fs::write(&path, r#"{"version":1,"seed":3,"scenario":{"kind":"schur-suite","count":25}}"#).unwrap();
    let out = dir.path().join("r.json");
    let csv = dir.path().join("trials.csv");
    let o = psdmult(&[
        "verify", "schur-suite", "--config", path.to_str().unwrap(),
        "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS hadamard-psd"));
    assert_eq!(report(&out)["scenario"]["count"], 25);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("check,trial,value"));
    assert_eq!(rows.lines().count(), 26);
}

#[test]
fn falsify_bump_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.json");
    let o = psdmult(&["falsify", "--symbol", "bump", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r = report(&out);
    let checks = r["checks"].as_array().unwrap();
    let probe = checks.iter().find(|c| c["name"] == "probe-positivity").unwrap();
    assert_eq!(probe["passed"], false);
    assert!(probe["value"].as_f64().unwrap() <= -1e-3);
    assert!(!probe["witness"]["verdict"]["witness"]["position"].is_null());
}

#[test]
fn falsify_gaussian_finds_nothing() {
    let o = psdmult(&["falsify", "--symbol", "gaussian", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn symbol_tests() {
    assert_eq!(code(&psdmult(&["test-psd", "--symbol", "cos", "--seed", "2"])), 0);
    assert_eq!(code(&psdmult(&["test-psd", "--symbol", "bump", "--seed", "2"])), 1);
    assert_eq!(code(&psdmult(&["test-cpsd", "--symbol", "neg-quadratic", "--seed", "2"])), 0);
    assert_eq!(code(&psdmult(&["test-cpsd", "--symbol", "pos-quadratic", "--seed", "2"])), 1);
    assert_eq!(code(&psdmult(&["norms", "--symbol", "cos", "--seed", "2"])), 0);
    assert_eq!(code(&psdmult(&["synth-lk", "--seed", "2", "--t", "0.5,2"])), 0);
}

#[test]
fn synthesis_rejects_negative_weights() {
    assert_eq!(code(&psdmult(&["synth-bochner", "--seed", "4"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neg.json");
    std::fs::write(
        &path,
        r#"{"version":1,"seed":4,"scenario":{"kind":"synth-bochner","dim":1,
            "atoms":[{"location":[1.0],"weight":1.0},{"location":[2.0],"weight":-0.5}]}}"#,
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let o = psdmult(&["synth-bochner", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r = report(&out);
    assert!(r["checks"][0]["witness"]["error"].as_str().unwrap().contains("weight"));
}

#[test]
fn apply_writes_field_and_slice() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("out.mplb");
    let csv = dir.path().join("slice.csv");
    let o = psdmult(&[
        "apply", "--symbol", "gaussian", "--seed", "5", "--grid", "2,32,10",
        "--output", field.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&field).unwrap();
    assert_eq!(&bytes[..4], b"MPLB");
    let f = psdmult::engine::io::read_binary(&bytes[..]).unwrap();
    assert_eq!(f.spec().len(), 32 * 32);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,re_0,im_0");
    assert_eq!(text.lines().count(), 33);

    // Feeding the output back in runs the positivity trial again.
    let o = psdmult(&["apply", "--symbol", "gaussian", "--seed", "5", "--grid", "2,32,10", "--input", field.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = psdmult(&["apply", "--seed", "5", "--input", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn reports_are_reproducible() {
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string_pretty(&v).unwrap()
    };
    for args in [
        &["verify", "bochner-suite", "--seed", "11"][..],
        &["verify", "lk-suite", "--seed", "11"][..],
        &["falsify", "--seed", "11"][..],
    ] {
        let a = psdmult(args);
        let b = psdmult(args);
        assert_eq!(code(&a), code(&b));
        assert_eq!(strip(&a), strip(&b), "{args:?}");
    }
    let a = psdmult(&["verify", "schur-suite", "--seed", "11"]);
    let b = psdmult(&["verify", "schur-suite", "--seed", "12"]);
    assert_ne!(strip(&a), strip(&b));
}
