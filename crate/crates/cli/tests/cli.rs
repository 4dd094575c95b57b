//! End-to-end tests of the `oplab` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn oplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oplab"))
        .args(args)
        .env_remove("OPLAB_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn result(args: &[&str]) -> Value {
    let out = oplab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    let report: Value = serde_json::from_slice(&out.stdout).expect("JSON report");
    report["result"].clone()
}

const M1: &str = r#"{"type":"matrix","k":1}"#;
const M2: &str = r#"{"type":"matrix","k":2}"#;
const E6: &str = r#"{"type":"grassmann","generators":6}"#;

#[test]
fn commutator_is_identity_of_scalars() {
    let r = result(&["check-identity", "--poly", "x1*x2-x2*x1", "--algebra", M1]);
    assert_eq!(r["identity"], Value::Bool(true));
    let r = result(&["check-identity", "--poly", "x1*x2-x2*x1", "--algebra", M2]);
    assert_eq!(r["identity"], Value::Bool(false));
}

#[test]
fn matrix_min_degree() {
    assert_eq!(result(&["min-degree", "--algebra", M2, "--max", "5"])["min_degree"], 4);
    assert_eq!(result(&["min-degree", "--algebra", M2, "--max", "3"])["min_degree"], Value::Null);
}

#[test]
fn grassmann_codimension() {
    assert_eq!(result(&["codim", "--algebra", E6, "--n", "4"])["codim"], 8);
}

#[test]
fn algebra_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m1.json");
    std::fs::write(&path, M1).unwrap();
    let arg = format!("@{}", path.display());
    assert_eq!(result(&["codim", "--algebra", &arg, "--n", "3"])["codim"], 1);
}

#[test]
fn generators_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.txt");
    std::fs::write(&path, "x1*x2 - x2*x1;\nx1*x2*x3 - x3*x2*x1\n").unwrap();
    let r = result(&["ideal-dim", "--gens-file", path.to_str().unwrap(), "--n", "3"]);
    assert_eq!(r["dim"], 5);
}

#[test]
fn ideal_dim_methods_agree() {
    for n in ["2", "3", "4"] {
        let a = result(&["ideal-dim", "--gens", "x1*x2*x3 - x2*x1*x3", "--n", n, "--basis"]);
        let b = result(&["ideal-dim", "--gens", "x1*x2*x3 - x2*x1*x3", "--n", n, "--basis", "--method", "closure"]);
        assert_eq!(a["basis"], b["basis"]);
    }
}

#[test]
fn membership_by_poly_and_element() {
    let g = "x1*x2 - x2*x1";
    assert_eq!(result(&["membership", "--gens", g, "--poly", "x1*x2*x3 - x2*x1*x3"])["member"], true);
    assert_eq!(result(&["membership", "--gens", g, "--element", "1*(1,2,3)"])["member"], false);
}

#[test]
fn slices_equal_pairs() {
    let r = result(&["slices-equal", "--gens", "x1*x2 - x2*x1", "--other-gen-elem", "1*(1,2) - 1*(2,1)", "--max", "4"]);
    assert_eq!(r["equal"], true);
    let r = result(&["slices-equal", "--gens", "x1*x2 - x2*x1", "--other-gens", "x1*x2*x3 - x2*x1*x3", "--max", "4"]);
    assert_eq!(r["equal"], true);
    let r = result(&["slices-equal", "--gens", "x1*x2 - x2*x1", "--other-gens", "x1*x2*x3 - x2*x1*x3 - x3*x1*x2 + x3*x2*x1", "--max", "4"]);
    assert_eq!(r["equal"], false);
    assert_eq!(r["first_difference"], 2);
}

#[test]
fn roundtrip_and_closure_verify() {
    assert_eq!(result(&["roundtrip", "--gens", "x1*x2 - x2*x1", "--max", "4"])["passed"], true);
    assert_eq!(result(&["closure-verify", "--algebra", M2, "--max", "3"])["closed"], true);
    assert_eq!(result(&["closure-verify", "--gens", "x1*x2 - x2*x1", "--max", "4"])["closed"], true);
}

#[test]
fn phi_round_trip() {
    let r = result(&["phi", "--element", "2*(2,3,1) - 1*(1,2,3)"]);
    let poly = r["poly"].as_str().unwrap().to_string();
    let back = result(&["phi", "--poly", &poly]);
    assert_eq!(back["element"], "-1*(1,2,3) + 2*(2,3,1)");
}

#[test]
fn multilinearize_square() {
    let r = result(&["multilinearize", "--poly", "x1^2"]);
    assert_eq!(r["components"][0]["poly"], "1*x1*x2 + 1*x2*x1");
}

#[test]
fn compose_partial_and_full() {
    let r = result(&["compose", "--outer", "1*(1,2)", "--slot", "2", "--inner", "1*(2,1)"]);
    assert_eq!(r["result"], "1*(1,3,2)");
    let r = result(&["compose", "--outer", "1*(2,1)", "--inner", "1*(1)", "--inner", "1*(1,2)"]);
    assert_eq!(r["result"], "1*(2,3,1)");
}

#[test]
fn output_is_deterministic() {
    let args = ["ideal-dim", "--gens", "x1*x2*x3 - x3*x1*x2", "--n", "4", "--basis"];
    assert_eq!(oplab(&args).stdout, oplab(&args).stdout);
    let args = ["codim", "--algebra", M2, "--n", "4", "--pretty"];
    assert_eq!(oplab(&args).stdout, oplab(&args).stdout);
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let runs = [
        vec!["ideal-dim", "--gens", "x1*x2*x3 - x2*x3*x1", "--n", "4", "--basis"],
        vec!["codim", "--algebra", E6, "--n", "3"],
        vec!["min-degree", "--algebra", M2, "--max", "4"],
    ];
    for args in runs {
        let plain = oplab(&args).stdout;
        let mut cached = vec!["--cache-dir", cache];
        cached.extend(&args);
        let cold = oplab(&cached).stdout;
        let warm = oplab(&cached).stdout;
        assert_eq!(plain, cold);
        assert_eq!(cold, warm);
    }
    let list = result(&["--cache-dir", cache, "cache", "list"]);
    let entries = list["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    assert!(entries.iter().all(|e| e["valid"] == true));

    let mut stats = vec!["--cache-dir", cache, "--stats"];
    stats.extend(["codim", "--algebra", E6, "--n", "3"]);
    let report: Value = serde_json::from_slice(&oplab(&stats).stdout).unwrap();
    assert_eq!(report["stats"]["cache_hits"], 1);
    assert_eq!(report["stats"]["cache_misses"], 0);
}

#[test]
fn corrupt_cache_entries_are_recomputed_and_collected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "ideal-dim", "--gens", "x1*x2 - x2*x1", "--n", "3"];
    let cold = oplab(&args).stdout;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), "garbage").unwrap();
    }
    assert_eq!(oplab(&args).stdout, cold);
    let gc = result(&["--cache-dir", cache, "cache", "gc"]);
    assert_eq!(gc["removed"].as_array().unwrap().len(), 0);
    std::fs::write(dir.path().join("0000-unital-3.opideal"), "garbage").unwrap();
    let gc = result(&["--cache-dir", cache, "cache", "gc"]);
    assert_eq!(gc["removed"].as_array().unwrap().len(), 1);
    let gc = result(&["--cache-dir", cache, "cache", "gc", "--all"]);
    assert!(!gc["removed"].as_array().unwrap().is_empty());
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn domain_errors_exit_one_with_error_object() {
    let cases: [(&[&str], &str); 6] = [
        (&["--mode", "nonunital", "compose", "--outer", "1*(1,2)", "--slot", "1", "--inner", "1*()"], "contraction_forbidden"),
        (&["check-identity", "--poly", "x1*", "--algebra", M1], "parse"),
        (&["check-identity", "--poly", "x1", "--algebra", r#"{"type":"matrix","k":0}"#], "invalid_algebra"),
        (&["phi", "--poly", "x1*x1"], "not_multilinear"),
        (&["ideal-dim", "--gen-elem", "0*(1,2)", "--n", "2"], "zero_generator"),
        (&["codim", "--algebra", E6, "--n", "5", "--budget", "10"], "budget_exceeded"),
    ];
    for (args, kind) in cases {
        let out = oplab(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["error"]["kind"], kind, "{args:?}");
        assert!(report.get("result").is_none());
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [&["bogus"][..], &["codim", "--n", "3"], &["--mode", "sideways", "phi", "--element", "1*(1)"]] {
        assert_eq!(oplab(args).status.code(), Some(2), "{args:?}");
    }
}
