use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_bigint::BigInt;
use perfect_unary::fieldfile::parse_rational;
use perfect_unary::report::{rat, Report};
use perfect_unary::sweep::{self, SweepRow};
use perfect_unary_core::Q;
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_perfect-unary"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fields_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fields")
}

fn field_file(name: &str) -> String {
    fields_dir().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("perfect-unary-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    let _ = std::fs::remove_file(&p);
    p
}

fn report(o: &Output) -> Report {
    serde_json::from_str(&stdout(o)).expect("valid report")
}

#[test]
fn json_reports_round_trip() {
    for args in [
        vec!["field-info", "--quadratic", "5"],
        vec!["bounds", "--quadratic", "2"],
        vec!["enumerate", "--quadratic", "6"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let r = report(&o);
        let again: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(again, r);
        assert_eq!(r.to_json(), stdout(&o));
    }
}

#[test]
fn bounds_for_sqrt2() {
    let r = report(&run(&["bounds", "--quadratic", "2"]));
    let b = r.bounds.unwrap();
    assert!(b.rho.starts_with("1.3836255365977"), "{}", b.rho);
    assert_eq!(b.a_source, "discriminant");
    assert_eq!(b.exponent_variant, "proof");
    assert_eq!(b.thm1, b.thm1_proof);
    assert_eq!(r.field.discriminant, "8");

    let r = report(&run(&["bounds", "--quadratic", "2", "--exponent-variant", "stated", "--eta-variant", "theorem"]));
    let b = r.bounds.unwrap();
    assert_eq!(b.thm2, b.thm2_stated);
    assert_eq!(b.eta_variant, "theorem");

    let b = report(&run(&["bounds", "--quadratic", "2", "--assume-unit-reducible"])).bounds.unwrap();
    assert_eq!(b.rho, "0");
    assert_eq!(b.a_source, "unit");
}

#[test]
fn enumerate_cubic_from_file() {
    let o = run(&["enumerate", "--field", &field_file("cubic49.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r.field.discriminant, "49");
    assert!(r.field.regulator.starts_with("5.2545"), "{}", r.field.regulator);
    let e = r.enumeration.unwrap();
    assert_eq!(e.class_count, 2);
    assert!(e.closure_complete);
    let checks = r.checks.unwrap();
    assert!(checks.results.values().all(|c| c.status != perfect_unary::checks::Status::Fail));
    assert!(checks.results.contains_key("interior_disjointness"));
}

#[test]
fn verify_adds_oracle_and_rerun() {
    let o = run(&["verify", "--quadratic", "7", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let results = report(&o).checks.unwrap().results;
    assert_eq!(results["oracle"].status, perfect_unary::checks::Status::Pass);
    assert_eq!(results["determinism"].status, perfect_unary::checks::Status::Pass);
}

#[test]
fn csv_output_is_key_value() {
    let o = run(&["field-info", "--quadratic", "13", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("field.discriminant,13\n"));
    let reg = text.lines().find(|l| l.starts_with("field.regulator,")).unwrap();
    let digits = reg.split(',').nth(1).unwrap().split('e').next().unwrap().replace(['.', '-'], "");
    assert!(digits.len() <= 12, "{reg}");
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["field-info", "--quadratic", "12"],
        vec!["field-info", "--quadratic", "1"],
        vec!["field-info", "--quadratic", "2", "--precision-bits", "63"],
        vec!["field-info", "--quadratic", "2", "--precision-bits", "5000"],
        vec!["field-info"],
        vec!["enumerate", "--quadratic", "2", "--field", "x.json"],
        vec!["sweep-quadratic"],
        vec!["sweep-quadratic", "--dmax", "5", "--format", "json"],
        vec!["no-such-command"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn malformed_field_file_reports_line() {
    let p = scratch("bad.json");
    std::fs::write(&p, "{\n  \"min_poly\": [1, 0, 1],\n  \"fundamental_units\": [[\"1/0\"]]\n}\n").unwrap();
    let o = run(&["field-info", "--field", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");

    std::fs::write(&p, r#"{"min_poly": [1, 0, 1]}"#).unwrap();
    let o = run(&["field-info", "--field", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("non-real"));

    let o = run(&["field-info", "--field", p.with_extension("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn limits_exit_3_with_partial_report() {
    let o = run(&["enumerate", "--quadratic", "19", "--max-classes", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let e = report(&o).enumeration.unwrap();
    assert!(!e.closure_complete);
    assert_eq!(e.class_count, 2);
    assert!(e.anomalies.iter().any(|a| a.contains("class limit")));

    let o = run(&["enumerate", "--quadratic", "19", "--timeout", "0.000001"]);
    assert_eq!(o.status.code(), Some(3));
    let e = report(&o).enumeration.unwrap();
    assert!(e.anomalies.iter().any(|a| a.contains("stopped")));
}

#[test]
fn output_flag_writes_file() {
    let p = scratch("info.json");
    let o = run(&["field-info", "--quadratic", "3", "--output", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Report = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(r.field.discriminant, "12");
}

#[test]
fn sweep_resumes_and_is_deterministic() {
    let full = scratch("full.csv");
    let part = scratch("part.csv");
    let o = run(&["sweep-quadratic", "--dmax", "11", "--seed", "1", "--output", full.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["sweep-quadratic", "--dmax", "6", "--seed", "1", "--output", part.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["sweep-quadratic", "--dmax", "11", "--seed", "1", "--output", part.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // only the missing fields were computed
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().collect::<Vec<_>>(), vec!["d = 7", "d = 10", "d = 11"]);
    assert_eq!(std::fs::read(&full).unwrap(), std::fs::read(&part).unwrap());

    let rows = sweep::read_rows(&full).unwrap();
    let ds: Vec<i64> = rows.iter().map(|r| r.d).collect();
    assert_eq!(ds, vec![2, 3, 5, 6, 7, 10, 11]);
    let counts: Vec<&str> = rows.iter().map(|r| r.class_count.as_str()).collect();
    assert_eq!(counts, vec!["1", "1", "1", "2", "2", "1", "2"]);

    // existing rows are kept verbatim
    let mut edited = rows.clone();
    edited[0].error = "kept".into();
    std::fs::write(&part, sweep::write_rows(&edited)).unwrap();
    let o = run(&["sweep-quadratic", "--dmax", "11", "--seed", "1", "--output", part.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(sweep::read_rows(&part).unwrap()[0].error, "kept");
}

#[test]
fn sweep_exit_codes() {
    let row = sweep::row_for(2, &perfect_unary::RunConfig::default());
    assert_eq!(sweep::exit_code(std::slice::from_ref(&row)), 0);
    let mut open = row.clone();
    open.closure_complete = "false".into();
    assert_eq!(sweep::exit_code(&[row.clone(), open]), 3);
    let mut failed: SweepRow = row.clone();
    failed.mu_product = "fail".into();
    assert_eq!(sweep::exit_code(&[row, failed]), 4);
}

proptest! {
    #[test]
    fn rationals_round_trip(p in any::<i64>(), q in 1i64..1_000_000) {
        let x = Q::new(BigInt::from(p), BigInt::from(q));
        prop_assert_eq!(parse_rational(&rat(&x)), Some(x));
    }
}
