use qforms::cli::{run_args, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use qforms::io::{from_csv, from_json, SeriesJson, CSV_HEADER};
use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = run_args(std::iter::once("qforms").chain(args.iter().copied()));
    (out.code, out.output)
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("json output")
}

#[test]
fn odd_m_is_a_usage_error() {
    let (code, out) = run(&["coeff", "--M", "3", "--N", "1", "--r", "1/2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.contains("even M required"));
    let (code, out) = run(&["verify", "--identity", "appell", "--M", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.contains("even M required"));
}

#[test]
fn decimal_input_is_rejected() {
    let (code, out) = run(&["coeff", "--M", "0", "--N", "2", "--r", "0.5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.contains("decimal"));
    let (code, _) = run(&["lattice", "--N", "2", "--r", "1", "--order", "2.5"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["coeff", "--N", "1"]).0, EXIT_USAGE);
    assert_eq!(run(&["coeff", "--M", "0", "--N", "3", "--r", "1"]).0, EXIT_USAGE);
    assert_eq!(run(&["quantum", "--N", "3", "--r", "1", "--action", "member"]).0, EXIT_USAGE);
    assert_eq!(run(&["quantum", "--N", "4", "--r", "1", "--point", "2/4", "--action", "member"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_PASS);
}

#[test]
fn coeff_json_and_csv_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let (code, out) = run(&["--cache-dir", cache, "coeff", "--M", "2", "--N", "1", "--r", "1/2", "--order", "4"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    let sj: SeriesJson = serde_json::from_value(v["coefficient"]["series"].clone()).unwrap();
    let from_j = from_json(&sj).unwrap();
    assert_eq!(v["coefficient"]["phase"], "i");
    assert!(!v["decomposition"].as_array().unwrap().is_empty());
    let (code, csv) = run(&["--cache-dir", cache, "coeff", "--M", "2", "--N", "1", "--r", "1/2", "--order", "4", "--format", "csv"]);
    assert_eq!(code, EXIT_PASS);
    assert!(csv.starts_with(CSV_HEADER));
    assert!(from_csv(&csv).unwrap().terms().eq(from_j.terms()));
}

#[test]
fn lattice_matches_coeff() {
    let (_, a) = run(&["lattice", "--N", "3", "--r", "3/2", "--order", "6", "--format", "csv"]);
    let (_, b) = run(&["coeff", "--M", "0", "--N", "3", "--r", "3/2", "--order", "6", "--format", "csv", "--cache-dir", "/nonexistent/qforms"]);
    assert_eq!(from_csv(&a).unwrap().terms().collect::<Vec<_>>(), from_csv(&b).unwrap().terms().collect::<Vec<_>>());
}

#[test]
fn pde_and_laurent_report() {
    let (code, out) = run(&["pde", "--N", "4", "--order", "8"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(json(&out)["kernel"].as_array().unwrap().len(), 2);
    let (code, out) = run(&["pde", "--N", "1", "--M", "1", "--order", "4"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(json(&out)["f"].as_array().unwrap().len(), 2);
    let (code, out) = run(&["laurent", "--M", "0", "--N", "2", "--count", "1", "--order", "4"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(json(&out)["D"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_passes_and_accepts_legacy_names() {
    for id in ["appell", "thm13", "pde", "prop32", "lemma31", "phicrank", "theta", "crank"] {
        let (code, out) = run(&["verify", "--identity", id, "--N", "2", "--points", "1", "--bits", "96"]);
        assert_eq!(code, EXIT_PASS, "{id}: {out}");
        assert_eq!(json(&out)["passed"], true);
    }
}

#[test]
fn quantum_actions() {
    let base = ["quantum", "--N", "4", "--r", "1", "--point", "1/2", "--bits", "96"];
    for action in ["member", "gamma", "lvalues", "value", "cocycle", "asymptotics"] {
        let mut args = base.to_vec();
        args.extend(["--action", action]);
        let (code, out) = run(&args);
        assert_eq!(code, EXIT_PASS, "{action}: {out}");
    }
    let (code, _) = run(&["quantum", "--N", "4", "--r", "1", "--point", "1/3", "--action", "gamma"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn slow_asymptotics_report_a_failure() {
    let (code, out) = run(&["quantum", "--N", "2", "--r", "1", "--point", "1/4", "--action", "asymptotics", "--bits", "96", "--terms", "2"]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn oracle_agrees() {
    let (code, out) = run(&["oracle", "--M", "2", "--N", "1", "--r", "1/2", "--bits", "96"]);
    assert_eq!(code, EXIT_PASS, "{out}");
}

#[test]
fn binary_uses_cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_qforms");
    let args = ["coeff", "--M", "0", "--N", "2", "--r", "1", "--order", "5"];
    let first = Command::new(exe).args(args).env("QFORMS_CACHE", dir.path()).output().unwrap();
    assert_eq!(first.status.code(), Some(EXIT_PASS));
    assert_eq!(json(&String::from_utf8_lossy(&first.stdout))["cache_hit"], false);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let second = Command::new(exe).args(args).env("QFORMS_CACHE", dir.path()).output().unwrap();
    assert_eq!(json(&String::from_utf8_lossy(&second.stdout))["cache_hit"], true);

    let odd = Command::new(exe).args(["coeff", "--M", "1", "--N", "2", "--r", "1"]).env("QFORMS_CACHE", dir.path()).output().unwrap();
    assert_eq!(odd.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&odd.stderr).contains("even M required"));
}

#[test]
fn corrupted_cache_entry_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_qforms");
    let args = ["coeff", "--M", "0", "--N", "2", "--r", "1", "--order", "3"];
    Command::new(exe).args(args).env("QFORMS_CACHE", dir.path()).output().unwrap();
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let p = e.unwrap().path();
        let mut b = std::fs::read(&p).unwrap();
        let i = b.len() - 1;
        b[i] ^= 1;
        std::fs::write(&p, b).unwrap();
    }
    let out = Command::new(exe).args(args).env("QFORMS_CACHE", dir.path()).output().unwrap();
    let v = json(&String::from_utf8_lossy(&out.stdout));
    assert_eq!(v["cache_hit"], false);
    assert!(v["cache_warning"].as_str().unwrap().contains("checksum"), "{v}");
    let again = Command::new(exe).args(args).env("QFORMS_CACHE", dir.path()).output().unwrap();
    assert_eq!(json(&String::from_utf8_lossy(&again.stdout))["cache_hit"], true);
}
