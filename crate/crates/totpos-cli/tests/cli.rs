//! End-to-end tests of the `totpos` binary: exit codes, report shapes, and
//! the documented example invocations.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_totpos"))
}

fn run(args: &[&str]) -> (Value, i32) {
    let out = bin().args(args).output().expect("binary runs");
    parse_output(out, args)
}

fn parse_output(out: Output, args: &[&str]) -> (Value, i32) {
    let code = out.status.code().expect("no signal");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 report");
    let report = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout)
            .unwrap_or_else(|e| panic!("bad JSON from {args:?}: {e}\n{stdout}"))
    };
    (report, code)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const C_MATRIX: &str = r#"{"rows":3,"cols":3,"scalar":"rational",
  "data":["1","408/577","0","408/577","1","408/577","0","408/577","1"]}"#;

#[test]
fn check_reports_certificates_with_matching_exit_codes() {
    let path = temp_file("totpos_cli_c.json", C_MATRIX);
    let p = path.to_str().unwrap();

    let (report, code) = run(&["check", "--property", "tn", "--file", p]);
    assert_eq!(code, 0);
    assert_eq!(report["certificate"]["verdict"], "holds");
    assert_eq!(report["certificate"]["exact"], true);

    // The same matrix is not totally positive (it has zero entries).
    let (report, code) = run(&["check", "--property", "tp", "--file", p]);
    assert_eq!(code, 1);
    assert_eq!(report["certificate"]["verdict"], "fails");
    assert!(report["certificate"]["witness"].is_object());

    // Positive definiteness holds exactly.
    let (_, code) = run(&["check", "--property", "pd", "--file", p]);
    assert_eq!(code, 0);

    // Order-restricted check: minors of size <= 2 are fine for TP except
    // the zero entries; order 1 still sees them.
    let (_, code) = run(&["check", "--property", "tp", "--order", "1", "--file", p]);
    assert_eq!(code, 1);
}

#[test]
fn float_indeterminacy_exits_three() {
    let path = temp_file(
        "totpos_cli_ones.json",
        r#"{"rows":2,"cols":2,"scalar":"float","data":["1.0","1.0","1.0","1.0"]}"#,
    );
    let (report, code) = run(&["check", "--property", "tp", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(report["certificate"]["verdict"], "inconclusive");
}

#[test]
fn usage_and_io_errors_exit_two() {
    let (_, code) = run(&["check", "--property", "bogus", "--file", "x.json"]);
    assert_eq!(code, 2);
    let (_, code) = run(&["check", "--property", "tn", "--file", "/does/not/exist.json"]);
    assert_eq!(code, 2);
    // clap usage errors share the same exit code.
    let out = bin().arg("check").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Malformed entry text names the offending index.
    let path = temp_file(
        "totpos_cli_bad.json",
        r#"{"rows":1,"cols":2,"scalar":"rational","data":["1","2//3"]}"#,
    );
    let out =
        bin().args(["check", "--property", "tn", "--file", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2//3"));
}

#[test]
fn falsify_example_finds_pair_witness() {
    let (report, code) =
        run(&["falsify", "--fn", "exp(x)-1", "--mode", "tn", "--delta", "2"]);
    assert_eq!(code, 1);
    assert_eq!(report["outcome"], "counterexample");
    assert_eq!(report["family"], "pair-a");
    assert_eq!(report["source_certificate"]["verdict"], "holds");
    assert_eq!(report["violation"]["verdict"], "fails");

    // A genuine preserver exhausts its budget and exits 0.
    let (report, code) =
        run(&["falsify", "--power", "2,1", "--mode", "tn", "--delta", "4", "--budget", "64"]);
    assert_eq!(code, 0);
    assert_eq!(report["outcome"], "budget-exhausted");
    assert_eq!(report["tried"], 64);
}

#[test]
fn classify_and_is_preserver_agree() {
    let (report, code) = run(&["classify", "--mode", "tn", "--delta", "4"]);
    assert_eq!(code, 0);
    let desc = report["description"].as_str().unwrap();
    assert!(desc.contains("constants c ≥ 0"), "{desc}");
    assert!(desc.contains("α ∈ {1}"), "{desc}");

    let (report, code) =
        run(&["is-preserver", "--mode", "tn", "--delta", "4", "--power", "3,1"]);
    assert_eq!(code, 0);
    assert_eq!(report["preserves"], true);

    let (report, code) =
        run(&["is-preserver", "--mode", "tn", "--delta", "4", "--power", "1,2"]);
    assert_eq!(code, 1);
    assert_eq!(report["preserves"], false);
}

#[test]
fn apply_writes_image_matrices_exactly_when_possible() {
    let path = temp_file(
        "totpos_cli_apply.json",
        r#"{"rows":2,"cols":2,"scalar":"rational","data":["0","1","2","3"]}"#,
    );
    let (report, code) =
        run(&["apply", "--power", "1,2", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["matrix"]["scalar"], "rational");
    assert_eq!(report["matrix"]["data"][3], "9");

    // Expressions evaluate in float; zero stays exact only for powers.
    let (report, code) =
        run(&["apply", "--fn", "x^2 + 1/2", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["matrix"]["data"][0], "1/2");
}

#[test]
fn witness_emits_matrices_and_pipes_into_check() {
    let (report, code) = run(&["witness", "--family", "t-family", "--params", "1/10000"]);
    assert_eq!(code, 0);
    assert_eq!(report["matrix"]["rows"], 5);
    assert_eq!(report["matrix"]["data"][0], "5001/5000");

    // Feed the embedded matrix JSON back through check via stdin.
    let matrix = serde_json::to_string(&report["matrix"]).unwrap();
    let mut child = bin()
        .args(["check", "--property", "tn", "--file", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(matrix.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn embed_and_completions_verify_their_outputs() {
    let (report, code) = run(&["embed", "--entries", "4,2,3,5", "--rows", "4"]);
    assert_eq!(code, 0);
    assert_eq!(report["case"], "generic");
    assert_eq!(report["certificate"]["verdict"], "holds");
    let mu = report["mu"].as_str().unwrap();
    assert!(mu.starts_with("0.295032132671964"), "{mu}");

    let (report, code) = run(&[
        "embed-at",
        "--entries",
        "4,2,3,5",
        "--rows",
        "4",
        "--cols",
        "5",
        "--at",
        "1,2,2,4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["seed_rows"], serde_json::json!([1, 2]));
    assert_eq!(report["certificate"]["verdict"], "holds");

    let (report, code) =
        run(&["complete-hankel", "--a", "1", "--b", "1/2", "--c", "1/2", "--size", "4"]);
    assert_eq!(code, 0);
    assert_eq!(report["rho"], "2");
    assert_eq!(report["certificate"]["verdict"], "holds");

    let (report, code) = run(&[
        "complete-hankel",
        "--a",
        "1",
        "--b",
        "1/2",
        "--c",
        "1/2",
        "--size",
        "4",
        "--spacing",
        "1,1,3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["spacing"]["N"], 3);

    let (report, code) =
        run(&["extend-backwards", "--moments", "2,3,6,14,36,98,276"]);
    assert_eq!(code, 0);
    assert_eq!(report["certificate"]["verdict"], "holds");
    // Two new moments are prepended to the seven supplied ones.
    assert_eq!(report["moments"].as_array().unwrap().len(), 9);

    let diag = temp_file(
        "totpos_cli_diag.json",
        r#"{"rows":3,"cols":3,"scalar":"rational","data":["1","0","0","0","2","0","0","0","3"]}"#,
    );
    let (report, code) =
        run(&["densify", "--file", diag.to_str().unwrap(), "--tol", "1/1000"]);
    assert_eq!(code, 0);
    assert_eq!(report["certificate"]["verdict"], "holds");
    assert_eq!(report["certificate"]["property"], "totally-positive");
}

#[test]
fn precision_flag_and_env_control_float_width() {
    let path = temp_file(
        "totpos_cli_prec.json",
        r#"{"rows":1,"cols":1,"scalar":"rational","data":["2"]}"#,
    );
    let p = path.to_str().unwrap();
    let (narrow, _) =
        run(&["apply", "--fn", "sqrt(x)", "--file", p, "--precision", "64"]);
    let out = bin()
        .args(["apply", "--fn", "sqrt(x)", "--file", p])
        .env("TOTPOS_PRECISION", "192")
        .output()
        .unwrap();
    let (wide, _) = parse_output(out, &["apply-env"]);
    let narrow = narrow["matrix"]["data"][0].as_str().unwrap();
    let wide = wide["matrix"]["data"][0].as_str().unwrap();
    assert!(narrow.starts_with("1.41421356237309"), "{narrow}");
    assert!(wide.len() > narrow.len() + 30, "{narrow} vs {wide}");
}
