//! End-to-end runs of the `qframe` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qframe_core::frames::{random_frame, renormalize, Convention};
use qframe_core::io::{read_frame, read_json, read_operator, FrameJson, RepJson};
use qframe_core::operator_space::{validate_state, HERMITICITY_TOL};
use qframe_core::quasiprob::rep_state;
use serde_json::Value;
use tempfile::TempDir;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn qframe(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qframe"))
        .current_dir(dir)
        .env_remove("QFRAME_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Builds the standard Wootters(3) frame and its canonical dual in `dir`.
fn wootters_pair(dir: &Path) -> (PathBuf, PathBuf) {
    let out = qframe(
        dir,
        &["frame", "build", "--kind", "wootters", "--dim", "3", "--convention", "standard", "-o", "f.json"],
    );
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = qframe(dir, &["frame", "duals", "--frame", "f.json", "-o", "e.json"]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    (dir.join("f.json"), dir.join("e.json"))
}

#[test]
fn wootters_build_then_check() {
    let tmp = TempDir::new().unwrap();
    wootters_pair(tmp.path());
    let out = qframe(tmp.path(), &["frame", "check", "--frame", "f.json", "--dual", "e.json"]);
    assert_eq!(status(&out), 0);
    let report = stdout_json(&out);
    assert!(report["dual"]["duality_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(report["dual"]["is_dual"], true);
    assert_eq!(report["tight"], true);
    assert_eq!(report["covariant"], true);
    assert_eq!(report["convention"], "standard");
}

#[test]
fn frame_check_flags_a_non_dual() {
    let tmp = TempDir::new().unwrap();
    wootters_pair(tmp.path());
    let mut dual: FrameJson = read_json(&tmp.path().join("e.json")).unwrap();
    for e in &mut dual.elements {
        for x in e.re.iter_mut().chain(e.im.iter_mut()).flatten() {
            *x *= 2.0;
        }
    }
    qframe_core::io::write_json(&tmp.path().join("doubled.json"), &dual).unwrap();
    let out = qframe(tmp.path(), &["frame", "check", "--frame", "f.json", "--dual", "doubled.json"]);
    assert_eq!(status(&out), 1);
    assert_eq!(stdout_json(&out)["dual"]["is_dual"], false);
}

#[test]
fn deformed_and_trace_probabilities_agree_on_fixtures() {
    let tmp = TempDir::new().unwrap();
    let (f, e) = wootters_pair(tmp.path());
    let state = fixtures().join("state_d3.json");
    let povm = fixtures().join("povm_d3.json");
    let run = |mode: &str| {
        let out = qframe(
            tmp.path(),
            &[
                "prob", "--mode", mode, "--state", path_str(&state), "--povm", path_str(&povm), "--frame",
                path_str(&f), "--dual", path_str(&e),
            ],
        );
        assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        stdout_json(&out)
    };
    let trace = run("trace");
    let deformed = run("deformed");
    assert!(deformed["max_pairwise_deviation"].as_f64().unwrap() <= 1e-10);
    let values = |v: &Value| -> Vec<f64> {
        v["outcomes"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect()
    };
    let (t, d) = (values(&trace), values(&deformed));
    assert_eq!(t.len(), d.len());
    let max_dev = t.iter().zip(&d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(max_dev <= 1e-10, "deviation {max_dev:e}");
}

#[test]
fn prob_csv_table() {
    let tmp = TempDir::new().unwrap();
    let (f, e) = wootters_pair(tmp.path());
    let out = qframe(
        tmp.path(),
        &[
            "--format",
            "csv",
            "prob",
            "--mode",
            "total",
            "--state",
            path_str(&fixtures().join("state_d3.json")),
            "--povm",
            path_str(&fixtures().join("povm_d3.json")),
            "--frame",
            path_str(&f),
            "--dual",
            path_str(&e),
        ],
    );
    assert_eq!(status(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("outcome,trace,deformed,total,value,valid"));
}

#[test]
fn wootters_dimension_two_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = qframe(tmp.path(), &["frame", "build", "--kind", "wootters", "--dim", "2"]);
    assert_eq!(status(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("does not span"), "{err}");
}

#[test]
fn underdetermined_random_frame_is_numerical_failure() {
    let tmp = TempDir::new().unwrap();
    let out = qframe(tmp.path(), &["frame", "build", "--kind", "random", "--dim", "3", "--n", "4"]);
    assert_eq!(status(&out), 3);
}

#[test]
fn malformed_json_reports_location() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("bad.json"), "{\n  \"dim\": 3,\n  \"labels\": [\n").unwrap();
    let out = qframe(tmp.path(), &["frame", "check", "--frame", "bad.json"]);
    assert_eq!(status(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "{err}");
}

#[test]
fn dimension_mismatch_exits_two() {
    let tmp = TempDir::new().unwrap();
    let out = qframe(tmp.path(), &["frame", "build", "--kind", "leonhardt", "--dim", "2", "-o", "f.json"]);
    assert_eq!(status(&out), 0);
    let out = qframe(
        tmp.path(),
        &["rep", "state", "--frame", "f.json", "--state", path_str(&fixtures().join("state_d3.json"))],
    );
    assert_eq!(status(&out), 2);
}

#[test]
fn artifacts_round_trip_bit_exactly() {
    let tmp = TempDir::new().unwrap();
    let out = qframe(
        tmp.path(),
        &[
            "frame", "build", "--kind", "random", "--dim", "3", "--n", "11", "--seed", "42", "--convention", "raw",
            "-o", "r.json",
        ],
    );
    assert_eq!(status(&out), 0);
    let expected = renormalize(&random_frame(3, 11, 42, false).unwrap(), Convention::Raw).unwrap();
    let loaded = read_frame(&tmp.path().join("r.json"), HERMITICITY_TOL).unwrap();
    assert_eq!(FrameJson::from_frame(&loaded), FrameJson::from_frame(&expected));
    for (a, b) in loaded.elements().iter().zip(expected.elements()) {
        assert_eq!(a.as_matrix(), b.as_matrix());
    }
    assert_eq!(loaded.weights(), expected.weights());
    assert_eq!(loaded.id(), expected.id());

    let out = qframe(tmp.path(), &["frame", "duals", "--frame", "r.json", "-o", "d.json"]);
    assert_eq!(status(&out), 0);
    let dual_text = fs::read_to_string(tmp.path().join("d.json")).unwrap();
    let dual = read_frame(&tmp.path().join("d.json"), HERMITICITY_TOL).unwrap();
    let rewritten = qframe_core::io::to_json_string(&FrameJson::from_frame(&dual)).unwrap();
    assert_eq!(rewritten.trim_end(), dual_text.trim_end());

    let state = fixtures().join("state_d3.json");
    let out = qframe(tmp.path(), &["rep", "state", "--frame", "r.json", "--state", path_str(&state), "-o", "rep.json"]);
    assert_eq!(status(&out), 0);
    let rep: RepJson = read_json(&tmp.path().join("rep.json")).unwrap();
    let rho = validate_state(&read_operator(&state, HERMITICITY_TOL).unwrap()).unwrap();
    let direct = rep_state(&expected, &rho).unwrap().rep;
    let (reloaded, _) = rep.to_rep().unwrap();
    assert_eq!(reloaded, direct);
}

#[test]
fn identical_arguments_give_identical_artifacts() {
    let tmp = TempDir::new().unwrap();
    let build = |name: &str| {
        let out = qframe(
            tmp.path(),
            &["frame", "build", "--kind", "random", "--dim", "2", "--seed", "7", "--positive", "-o", name],
        );
        assert_eq!(status(&out), 0);
        fs::read(tmp.path().join(name)).unwrap()
    };
    assert_eq!(build("a.json"), build("b.json"));

    let from_env = Command::new(env!("CARGO_BIN_EXE_qframe"))
        .current_dir(tmp.path())
        .env("QFRAME_SEED", "7")
        .args(["frame", "build", "--kind", "random", "--dim", "2", "--positive", "-o", "c.json"])
        .output()
        .unwrap();
    assert_eq!(status(&from_env), 0);
    assert_eq!(fs::read(tmp.path().join("c.json")).unwrap(), build("a.json"));
}

#[test]
fn classical_check_verdicts() {
    let tmp = TempDir::new().unwrap();
    let (f, e) = wootters_pair(tmp.path());
    let classical = fixtures().join("classical");
    let args = |states: &Path| {
        vec![
            "classical-check".to_owned(),
            "--frame".into(),
            path_str(&f).into(),
            "--dual".into(),
            path_str(&e).into(),
            "--states".into(),
            path_str(states).into(),
            "--povms".into(),
            path_str(&classical.join("povms")).into(),
        ]
    };
    let run = |states: &Path| {
        let a = args(states);
        qframe(tmp.path(), &a.iter().map(String::as_str).collect::<Vec<_>>())
    };

    let out = run(&classical.join("states"));
    assert_eq!(status(&out), 0);
    assert_eq!(stdout_json(&out)["classical_for_this_pair"], true);

    let states = tmp.path().join("states");
    fs::create_dir(&states).unwrap();
    for entry in fs::read_dir(classical.join("states")).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, states.join(p.file_name().unwrap())).unwrap();
    }
    fs::copy(fixtures().join("negative_state_d3.json"), states.join("negative.json")).unwrap();
    let out = run(&states);
    assert_eq!(status(&out), 1);
    let report = stdout_json(&out);
    assert_eq!(report["classical_for_this_pair"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn negativity_and_purity_of_scanned_state() {
    let tmp = TempDir::new().unwrap();
    wootters_pair(tmp.path());
    let state = fixtures().join("negative_state_d3.json");
    let out = qframe(tmp.path(), &["rep", "state", "--frame", "f.json", "--state", path_str(&state), "-o", "rep.json"]);
    assert_eq!(status(&out), 0);

    let out = qframe(tmp.path(), &["negativity", "--rep", "rep.json"]);
    assert_eq!(status(&out), 2, "id-only reps need --frame");
    let out = qframe(tmp.path(), &["negativity", "--rep", "rep.json", "--frame", "f.json"]);
    assert_eq!(status(&out), 0);
    let report = stdout_json(&out);
    assert!(report["min_value"].as_f64().unwrap() < 0.0);
    assert!(report["count_negative"].as_u64().unwrap() >= 1);

    let out = qframe(tmp.path(), &["star", "check-pure", "--frame", "f.json", "--dual", "e.json", "--rep", "rep.json"]);
    assert_eq!(status(&out), 0);
    assert_eq!(stdout_json(&out)["pure"], true);

    let out = qframe(
        tmp.path(),
        &["star", "--frame", "f.json", "--dual", "e.json", "--a", "rep.json", "--b", "rep.json", "-o", "sq.json"],
    );
    assert_eq!(status(&out), 0);
    assert!(tmp.path().join("sq.json").exists());
}

#[test]
fn embedded_frame_rep_needs_no_frame_argument() {
    let tmp = TempDir::new().unwrap();
    wootters_pair(tmp.path());
    let state = fixtures().join("negative_state_d3.json");
    let out = qframe(
        tmp.path(),
        &["rep", "state", "--frame", "f.json", "--state", path_str(&state), "--embed-frame", "-o", "rep.json"],
    );
    assert_eq!(status(&out), 0);
    let out = qframe(tmp.path(), &["negativity", "--rep", "rep.json"]);
    assert_eq!(status(&out), 0);
}

#[test]
fn nogo_witness_batch() {
    let tmp = TempDir::new().unwrap();
    let out = qframe(tmp.path(), &["nogo", "witness", "--dim", "2", "--seeds", "4", "-o", "w.json"]);
    assert_eq!(status(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Vec<Value> = read_json(&tmp.path().join("w.json")).unwrap();
    assert_eq!(reports.len(), 4);
    for r in &reports {
        assert!(r["min_dual_eig"].as_f64().unwrap() < 0.0);
    }
}

#[test]
fn closed_form_duals_report_scalar() {
    let tmp = TempDir::new().unwrap();
    wootters_pair(tmp.path());
    let out = qframe(tmp.path(), &["frame", "duals", "--frame", "f.json", "--paper", "-o", "p.json"]);
    assert_eq!(status(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("scalar"));
    let out = qframe(tmp.path(), &["frame", "check", "--frame", "f.json", "--dual", "p.json"]);
    assert_eq!(status(&out), 0);
}

#[test]
fn config_file_overrides() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("bad.json"), r#"{"tolerances": {"duality": -1}}"#).unwrap();
    let out = qframe(tmp.path(), &["--config", "bad.json", "frame", "build", "--kind", "wootters", "--dim", "3"]);
    assert_eq!(status(&out), 2);

    fs::write(tmp.path().join("cfg.json"), r#"{"convention": "standard", "output": {"path": "cfg_out.json"}}"#).unwrap();
    let out = qframe(tmp.path(), &["--config", "cfg.json", "frame", "build", "--kind", "wootters", "--dim", "3"]);
    assert_eq!(status(&out), 0);
    let frame = read_frame(&tmp.path().join("cfg_out.json"), HERMITICITY_TOL).unwrap();
    assert_eq!(frame.convention(), Convention::Standard);
}
