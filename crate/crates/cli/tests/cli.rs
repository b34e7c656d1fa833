use std::io::Write;
use std::process::Command;

use indcat_cli::{run_with, EXIT_NONCONFORM, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut argv = vec!["indcat"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    let r = run(&args);
    let v = serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", r.out));
    (r.code, v)
}

#[test]
fn indpoly_brute_prints_coefficients() {
    let r = run(&["indpoly", "--m", "3,4", "--method", "brute"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out, "1,9,28,44,40,22,7,1\n");
}

#[test]
fn indpoly_methods_agree() {
    let outs: Vec<String> = ["recursion", "brute", "deletion", "treedp"]
        .iter()
        .map(|m| run(&["indpoly", "--m", "2,3,1,4", "--method", m]).out)
        .collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]), "{outs:?}");
}

#[test]
fn indpoly_prefix_and_csv() {
    let r = run(&["indpoly", "--m", "3,4,5", "--n", "2", "--format", "csv"]);
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "k,coefficient");
    assert_eq!(lines[4], "3,44");
    assert_eq!(lines.len(), 9);
}

#[test]
fn analyze_text_report() {
    let r = run(&["analyze", "--coeffs", "1,6,7,4,1"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("strictly unimodal: true"));
    assert!(r.out.contains("modes: 2\n"));
    assert!(r.out.contains("strict-LD"));
    assert!(r.out.contains("balanced: true"));
}

#[test]
fn verify_showcase_json() {
    let (code, v) = json(&["verify", "--m", "4,9,9,10"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["instance"]["p_shape"]["modes"], serde_json::json!([16]));
    assert_eq!(v["instance"]["prediction"]["mode_set"], serde_json::json!([16]));
    assert_eq!(v["instance"]["k"], serde_json::json!([0, 4, 9, 13]));
    // Coefficients are decimal strings.
    assert_eq!(v["instance"]["p"][3][16], Value::String("639688410".into()));
    let verdicts: Vec<&str> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, ["conform", "conform"]);
}

#[test]
fn verify_non_monotone_is_nonconform() {
    // Min-recurrence exponent 3 against true multiplicity 4.
    let r = run(&["verify", "--m", "1,3,2", "--format", "csv"]);
    assert_eq!(r.code, EXIT_NONCONFORM);
    assert!(r.out.contains("cross-validate,nonconform"));
    assert!(r.out.contains("theorem-instance,hypothesis-not-met"));
}

#[test]
fn conditions_literal_range_fails() {
    let (code, v) = json(&["conditions", "--m", "4,9,9,10", "--cond3-range", "2:4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["conditions"]["all_pass"], Value::Bool(false));
    let (_, v) = json(&["conditions", "--m", "4,9,9,10"]);
    assert_eq!(v["conditions"]["all_pass"], Value::Bool(true));
    assert_eq!(v["conditions"]["cond3_results"]["3"]["lhs"], 26);
}

#[test]
fn lemma_exit_codes() {
    assert_eq!(
        run(&["lemma", "--q", "1,3,1", "--t", "1", "--check", "shift"]).code,
        EXIT_NONCONFORM
    );
    assert_eq!(run(&["lemma", "--q", "1,6,7,4,1", "--t", "2"]).code, EXIT_OK);
    let r = run(&["lemma", "--q", "1,6,7,4,1", "--t", "3"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("hypothesis-not-met"));
}

#[test]
fn lemma_generated_and_symmetric() {
    let (code, v) = json(&[
        "lemma",
        "--seed",
        "11",
        "--class",
        "strict-rd",
        "--degree",
        "9",
        "--check",
        "shift",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["records"][0]["seed"], 11);
    let (code, v) = json(&["lemma", "--q", "1,6,7,4,1", "--check", "shift", "--p-sym", "1,1,1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["records"][1]["check_name"], "symmetric-multiplier");
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["verify", "--m", "3,4,6", "--format", "json"][..],
        &["lemma", "--seed", "5", "--format", "json"][..],
        &["sweep", "--n-max", "2", "--format", "json"][..],
    ] {
        assert_eq!(run(args).out, run(args).out);
    }
}

#[test]
fn every_subcommand_emits_json() {
    for args in [
        &["indpoly", "--m", "2,2"][..],
        &["analyze", "--coeffs", "1,3,1"][..],
        &["conditions", "--m", "3,4"][..],
        &["verify", "--m", "3,4"][..],
        &["lemma", "--q", "1,3,2"][..],
        &["sweep", "--m-max", "2", "--n-max", "2"][..],
    ] {
        json(args);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &[][..],
        &["indpoly"][..],
        &["indpoly", "--m", "0,3"][..],
        &["indpoly", "--m", "3", "--n", "2"][..],
        &["indpoly", "--m", "3,4", "--cap", "31"][..],
        &["indpoly", "--m", "3,4", "--format", "xml"][..],
        &["analyze", "--coeffs", "1,-2,1"][..],
        &["analyze", "--coeffs", "1,a"][..],
        &["lemma", "--t", "1"][..],
        &["conditions", "--m", "3", "--cond3-range", "3"][..],
        &["sweep", "--input", "/nonexistent/list.txt"][..],
    ] {
        let r = run(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert!(!r.err.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn sweep_counts_and_exit() {
    let (code, v) = json(&["sweep", "--monotone"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["summary"]["instances"], 69);
    let r = run(&["sweep"]);
    assert_eq!(r.code, EXIT_NONCONFORM);
    assert!(r.out.contains("instances: 340"));
}

#[test]
fn sweep_input_file_and_jsonl_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("specs.txt");
    let mut f = std::fs::File::create(&input).unwrap();
    writeln!(f, "# showcase and a frozen instance\n4,9,9,10\n3,4\n").unwrap();
    let output = dir.path().join("out.jsonl");
    let r = run(&[
        "sweep",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let text = std::fs::read_to_string(&output).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["p_modes"], serde_json::json!([16]));
    assert_eq!(lines[2]["summary"]["instances"], 2);

    let csv_out = dir.path().join("out.csv");
    run(&[
        "sweep",
        "--input",
        input.to_str().unwrap(),
        "--output",
        csv_out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let csv = std::fs::read_to_string(csv_out).unwrap();
    assert!(csv.starts_with("m,n,cross_validation,theorem,modes,k,d\n"));
}

#[test]
fn cap_comes_from_environment() {
    let bin = env!("CARGO_BIN_EXE_indcat");
    let out = Command::new(bin)
        .args(["indpoly", "--m", "3,4", "--method", "brute"])
        .env("INDCAT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin)
        .args(["indpoly", "--m", "3,4", "--method", "brute", "--cap", "9"])
        .env("INDCAT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1,9,28,44,40,22,7,1\n");
}
