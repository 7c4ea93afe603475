//! End-to-end checks of the `pnspace` binary: exit codes, report shape,
//! determinism, and the compute commands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn pnspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (serde_json::Value, Option<i32>) {
    let out = pnspace(args);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {:?}", out));
    (doc, out.status.code())
}

#[test]
fn axioms_suite_passes_on_the_bundled_space() {
    let space = spec("simple-r3.json");
    let (doc, code) = run_json(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "axioms",
        "--seed",
        "7",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(doc["report_version"], 1);
    assert_eq!(doc["aggregate"], true);
    assert_eq!(doc["config"]["seed"], 7);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    let checks: Vec<&str> = reports.iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert_eq!(checks, ["n1-identity", "n2-symmetry", "n3-triangle", "n4-splitting"]);
    for r in reports {
        assert_eq!(r["pass"], true);
        assert_eq!(r["elapsed_ms"], 0);
        assert_eq!(r["suite"], "axioms");
    }
}

#[test]
fn reports_are_sorted_by_suite_then_check() {
    let space = spec("simple-r2.json");
    let (doc, code) = run_json(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "quotient",
        "--suite",
        "axioms",
        "--seed",
        "3",
    ]);
    assert_eq!(code, Some(0));
    let keys: Vec<(String, String)> = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["suite"].as_str().unwrap().to_string(),
                r["check"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.first().unwrap().0 == "axioms");
}

#[test]
fn kernel_testbed_asserts_its_documented_failure() {
    let space = spec("c00-kernel.json");
    let (doc, code) = run_json(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "closedness",
        "--seed",
        "7",
    ]);
    assert_eq!(code, Some(0), "expected-failure testbeds exit 0");
    assert_eq!(doc["aggregate"], true);
    let report = &doc["reports"][0];
    assert_eq!(report["pass"], true);
    let witness = report["witness"].as_str().unwrap();
    assert!(witness.contains("N1"), "witness must name the failing axiom: {witness}");
}

#[test]
fn broken_norm_rule_fails_the_axioms_suite() {
    let space = spec("norm-squared-r2.json");
    let (doc, code) = run_json(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "axioms",
        "--seed",
        "7",
    ]);
    assert_eq!(code, Some(1));
    assert_eq!(doc["aggregate"], false);
    let n3 = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "n3-triangle")
        .unwrap();
    assert_eq!(n3["pass"], false);
    assert!(n3["witness"].as_str().unwrap().len() > 0);
}

#[test]
fn serstnev_space_gets_its_extra_check() {
    let space = spec("serstnev-r2.json");
    let (doc, code) = run_json(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "axioms",
        "--seed",
        "5",
    ]);
    assert_eq!(code, Some(0));
    let checks: Vec<&str> = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["check"].as_str().unwrap())
        .collect();
    assert!(checks.contains(&"serstnev-splitting"));
}

#[test]
fn missing_spec_file_is_a_clean_failure() {
    let out = pnspace(&[
        "run",
        "--space",
        "no-such-file.json",
        "--suite",
        "axioms",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no-such-file.json"), "stderr: {err}");
}

#[test]
fn unknown_suite_is_rejected_with_the_menu() {
    let space = spec("simple-r2.json");
    let out = pnspace(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "divination",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("metric-oracle"), "stderr should list the suites: {err}");
}

#[test]
fn seed_is_mandatory() {
    let space = spec("simple-r2.json");
    let out = pnspace(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "axioms",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--seed"), "stderr: {err}");
}

#[test]
fn subspace_flag_overrides_the_spec_file() {
    let space = spec("simple-r3.json");
    let out = pnspace(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--subspace",
        "0 1 0",
        "--suite",
        "quotient",
        "--seed",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn inconclusive_estimates_use_their_own_exit_code() {
    let space = spec("c00-kernel.json");
    let out = pnspace(&[
        "compute",
        "quotient-norm",
        "--space",
        space.to_str().unwrap(),
        "--point",
        "1 0 0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("inconclusive"), "stderr: {err}");
}

#[test]
fn compute_sibley_prints_the_closed_form() {
    let lhs = spec("steps/eps-03.df");
    let rhs = spec("steps/eps0.df");
    let out = pnspace(&[
        "compute",
        "sibley",
        lhs.to_str().unwrap(),
        rhs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0.3\n");
}

#[test]
fn compute_tau_emits_reparseable_df_text() {
    let lhs = spec("steps/eps-2.df");
    let rhs = spec("steps/eps-3.df");
    for extra in [None, Some("--dual")] {
        let mut args = vec!["compute", "tau", "--tnorm", "min"];
        if let Some(flag) = extra {
            args.push(flag);
        }
        args.push(lhs.to_str().unwrap());
        args.push(rhs.to_str().unwrap());
        let out = pnspace(&args);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8_lossy(&out.stdout);
        let parsed = pnspace_core::distfn::DistFn::parse_df(&text).unwrap();
        assert_eq!(parsed, pnspace_core::distfn::DistFn::unit_step(5.0).unwrap());
    }
}

#[test]
fn compute_tau_accepts_a_tnorm_table_file() {
    let table = spec("product.tn");
    let lhs = spec("steps/eps-2.df");
    let rhs = spec("steps/eps-3.df");
    let out = pnspace(&[
        "compute",
        "tau",
        "--tnorm",
        table.to_str().unwrap(),
        lhs.to_str().unwrap(),
        rhs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed =
        pnspace_core::distfn::DistFn::parse_df(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(parsed, pnspace_core::distfn::DistFn::unit_step(5.0).unwrap());
}

#[test]
fn compute_dist_matches_the_projection() {
    let out = pnspace(&[
        "compute", "dist", "--norm", "l2", "--basis", "1 0", "--point", "3 4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "4\n");
}

#[test]
fn compute_quotient_norm_prints_the_residual_step() {
    let space = spec("simple-r2.json");
    let out = pnspace(&[
        "compute",
        "quotient-norm",
        "--space",
        space.to_str().unwrap(),
        "--point",
        "0.3 0.4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "DF v1\n0.4 1\ninf 1\n");
}

#[test]
fn identical_config_and_seed_reproduce_identical_bytes() {
    let space = spec("simple-r2.json");
    let args = [
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "axioms",
        "--suite",
        "lifting",
        "--seed",
        "42",
    ];
    let a = pnspace(&args);
    let b = pnspace(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let space = spec("simple-r2.json");
    let dir = std::env::temp_dir().join("pnspace-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("report.json");
    let out = pnspace(&[
        "run",
        "--space",
        space.to_str().unwrap(),
        "--suite",
        "metric-oracle",
        "--samples",
        "20",
        "--seed",
        "8",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "report must go to the file, not stdout");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["aggregate"], true);
    std::fs::remove_file(&out_path).ok();
}
